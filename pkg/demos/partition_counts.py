"""
Counting partitions three ways
==============================

For each theorem the left count and the right count come from brute-force
enumeration, and the third column is the coefficient of the generating
function.  The rows agree from n = 1 on; n = 0 is shown separately since
only n >= 1 is claimed.
"""

from qrr import partitions

rep = partitions.check_partition_theorem("AB", 5, 2, 16)
print(" n   A   B  gf")
for row in rep.rows:
    print(f"{row.n:2d} {row.left:3d} {row.right:3d} {row.gf:3d}")
print("n = 0:", rep.zero_row)

for theorem in partitions.THEOREMS:
    ok = all(partitions.check_partition_theorem(theorem, k, r, 30).passed for k, r in partitions.all_grids())
    print(theorem, "all grids equal through n = 30:", ok)

# the minimal A-side partitions are staircases of weight k n^2
print(partitions.staircase(5, 4, odd=True), sum(partitions.staircase(5, 4, odd=True)))

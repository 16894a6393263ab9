"""
Bailey pairs and the limiting transform
=======================================

The two pairs are checked against the defining relation, pushed through
the two-parameter transform on a few convergent points, and then through
the limiting form, which lands on two entries of the catalog.
"""

from fractions import Fraction

from qrr import catalog
from qrr.bailey import abbp_pair, newbp_pair, seq1aqf_sides, slater_transform_sides, verify_bailey_pair
from qrr.series import QSeries, SignedMonomial as M

for pair in (abbp_pair(), newbp_pair()):
    checks = verify_bailey_pair(pair, 12, 40)
    print(f"{pair.name}: relation holds for n <= 12: {all(c.passed for c in checks)}")

###############################################################################
# The transform needs ``aq/(yz)`` to have positive valuation
# -------------------------------------------------------------

half = M.q(Fraction(1, 2))
for y, z in [(M(-1), M(-1)), (M.q(1), -half)]:
    L, R = slater_transform_sides(abbp_pair(), y, z, 30)
    print(f"y = {y}, z = {z}:", L.agree(R).describe())

###############################################################################
# Limiting form
# -------------
# With the first pair in base q^2 and sqrt(a) = q, both sides equal (1 + q)
# times the corresponding sides of the three-way identity in the catalog.

N = 30
L, R = seq1aqf_sides(abbp_pair(base=M.q(2)), M.q(1), N)
lhs, rhs = catalog.build_sides("R2EQ2B", None, N)
factor = QSeries.from_dict({0: 1, 1: 1}, N)
print("matches the catalog entry:", L.agree(lhs * factor).passed and R.agree(rhs * factor).passed)

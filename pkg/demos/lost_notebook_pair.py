"""
The lost-notebook pair, expanded and checked
============================================

Two Rogers-Ramanujan type identities with a free parameter ``a``, expanded
exactly as truncated series and compared coefficient by coefficient.
"""

from qrr import catalog
from qrr.catalog import AMode, IdentityParams

# Both sides of the first identity, symbolic in a, through q^8
lhs, rhs = catalog.build_sides("R1", None, 8)
print("lhs:", lhs.format())
print("rhs:", rhs.format())

# A full verification reports the certified order and the time it took
for tag in ("R1", "R2"):
    print(catalog.verify(tag, None, 120).line())

###############################################################################
# Specializing ``a``
# ------------------
# A monomial value is substituted before expansion.  A root of unity keeps
# ``a`` symbolic and reduces both sides modulo the cyclotomic polynomial.

print(catalog.verify("R1", IdentityParams(a_mode=AMode.monomial(-catalog.M.q(1))), 60).line())
for row in catalog.TABLE_ROWS:
    if row.a_mode.kind == "cyclotomic":
        print(catalog.verify_row(row, 60).line(), "  a =", row.a_mode.label())

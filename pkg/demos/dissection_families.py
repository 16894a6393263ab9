"""
Dissection families and a misprint
==================================

Each family specializes to one of the parametric identities at m = 1 and gives new
identities at m = 2 and m = 3.  One of the printed m = 3 displays has an
exponent that does not match the family; the literal transcription fails
at the second coefficient, the corrected one passes.
"""

from qrr import catalog, identities
from qrr.catalog import IdentityParams
from qrr.series import SignedMonomial as M
from qrr.terms import lcm

for tag in ("TGEN1", "TGEN2", "TGEN3", "TGEN4", "TGEN5"):
    for m in (1, 2, 3):
        print(catalog.verify(tag, IdentityParams(m=m), 40).line(), f" m = {m}")

ctx = identities.Ctx(M.q(1), M.a(1))
for name in ("4b", "4b_literal"):
    s = identities.corollary(name, ctx)
    d = lcm(s.lhs.scale(), s.rhs.scale())
    print(name, s.lhs.at(20, d).agree(s.rhs.at(20, d)).describe())

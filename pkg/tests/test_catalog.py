"""Identity catalog: defaults, specializations, families and cross-checks."""

from fractions import Fraction

import pytest

from qrr import catalog, identities
from qrr.catalog import AMode, IdentityParams
from qrr.errors import BadParams
from qrr.series import QSeries, SignedMonomial, qs_substitute_a
from qrr.terms import Prod, Term, lcm

M = SignedMonomial
q = M.q(1)
h = Fraction(1, 2)
TGEN = ("TGEN1", "TGEN2", "TGEN3", "TGEN4", "TGEN5")


def partitions_into(residues, modulus, order):
    # oracle: count partitions into parts congruent to the residues
    p = [1] + [0] * order
    for part in range(1, order + 1):
        if part % modulus in residues:
            for k in range(part, order + 1):
                p[k] += p[k - part]
    return p


def test_catalog_shape():
    items = catalog.catalog_list()
    ids = [i for i in items if i.kind == "identity"]
    rows = [i for i in items if i.kind == "table_row"]
    assert len(ids) == 26 and len(rows) == 19
    assert [t.tag for t in ids] == list(catalog.TAGS)
    assert [r.label for r in rows][:3] == ["T1.1", "T1.2", "T1.3"]
    roots = [r.a_mode for r in rows if r.a_mode.kind == "cyclotomic"]
    # five distinct roots; the cube root appears in both of the first two tables
    assert len(roots) == 6 and len(set(roots)) == 5
    assert sorted({(m.n, m.power) for m in roots}) == [(3, 1), (4, 1), (4, 3), (6, 1), (6, 5)]


@pytest.mark.parametrize("tag", catalog.TAGS)
def test_defaults_pass(tag):
    rep = catalog.verify(tag, None, 60)
    assert rep.passed, rep.line()
    assert rep.order_certified >= 60 * rep.scale


@pytest.mark.parametrize("tag", ["R1", "R2"])
def test_lost_notebook_pair_deep(tag):
    rep = catalog.verify(tag, None, 120)
    assert rep.passed and rep.order_certified >= 120
    assert rep.millis < 10_000


def test_r1_rhs_theta_head():
    _, rhs = catalog.build_sides("R1", None, 6)
    # f(aq^3, q^3/a)/f(-q^2): a^±1 first appear at q^3, and 1/f(-q^2) is even in q
    assert rhs.coefficient(2).terms == {0: 1}
    assert rhs.coefficient(3).terms == {-1: 1, 1: 1}


def test_rr_first_rhs_partition_oracle():
    lhs, rhs = catalog.build_sides("RR_FIRST", None, 10)
    assert rhs.integer_coefficients()[:9] == [1, 1, 1, 1, 2, 2, 3, 3, 4]
    assert rhs.integer_coefficients() == partitions_into({1, 4}, 5, 10)
    _, rhs2 = catalog.build_sides("RR_SECOND", None, 30)
    assert rhs2.integer_coefficients() == partitions_into({2, 3}, 5, 30)


@pytest.mark.parametrize("row", catalog.TABLE_ROWS + catalog.POST_TABLE_ROWS, ids=lambda r: r.label)
def test_table_rows(row):
    rep = catalog.verify_row(row, 60)
    assert rep.passed, rep.line()
    assert rep.order_certified >= 60 * rep.scale


def test_table_row_examples():
    r = catalog.verify_table_row(1, 2)  # a = -1, x = q
    assert r.passed and r.params["a"] == "-1"
    r = catalog.verify_table_row(1, 1)  # a = i, x = q^(1/2)
    assert r.passed and r.scale == 2 and r.params["a"] == "i"
    r = catalog.verify_table_row(3, 5)  # a = -q, x = q^(3/2)
    # every exponent in this row turns out integral, so the minimal exact scale is 1
    assert r.passed and r.scale in (1, 2) and r.params["x"] == "q^3/2"
    with pytest.raises(BadParams):
        catalog.table_row(2, 9)


def test_ft_b_at_depth():
    assert catalog.verify("FT_B", None, 60).passed
    assert catalog.verify("FT_A", None, 60).passed


def test_bad_kr():
    with pytest.raises(BadParams, match="r < k/2"):
        catalog.verify("R1RK1", IdentityParams(k=3, r=2), 60)
    with pytest.raises(BadParams):
        catalog.verify("R2RK1", IdentityParams(k=2, r=1), 60)


@pytest.mark.parametrize("tag", TGEN)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_dissection_families(tag, m):
    rep = catalog.verify(tag, IdentityParams(m=m), 60)
    assert rep.passed and rep.order_certified >= 60 * rep.scale, rep.line()


PARENTS = {
    "TGEN1": ("R1", M.q(h), AMode.monomial(M.a(1, -3 * h))),
    "TGEN2": ("R1_PARTNER", M.q(h), AMode.symbolic()),
    "TGEN3": ("R2", q, AMode.symbolic()),
    "TGEN4": ("R1_PARTNER_SS", q, AMode.symbolic()),
    "TGEN5": ("RR22P", q, AMode.symbolic()),
}


@pytest.mark.parametrize("tag", TGEN)
def test_m1_coincides_with_parent(tag):
    parent, x, a = PARENTS[tag]
    child = catalog.build_sides(tag, IdentityParams(m=1), 40)
    par = catalog.build_sides(parent, IdentityParams(x_sub=x, a_mode=a), 40)
    for c, p in zip(child, par):
        assert c.agree(p).passed and c.agree(p).q_order >= 40


def test_tgen5_m2_is_the_remark():
    t = catalog.build_sides("TGEN5", IdentityParams(m=2), 60)
    r = catalog.build_sides("REMARK_SECOND", None, 60)
    assert t[0].agree(r[0]).passed and t[1].agree(r[1]).passed
    assert catalog.ALIASES["REMARK_SECOND"] == ("TGEN5", 2)


COROLLARIES = {"1a": ("TGEN1", 2), "1b": ("TGEN1", 3), "2a": ("TGEN2", 2), "2b": ("TGEN2", 3),
               "3a": ("TGEN3", 2), "3b": ("TGEN3", 3), "4a": ("TGEN4", 2), "4b": ("TGEN4", 3),
               "5a": ("TGEN5", 2), "5b": ("TGEN5", 3)}


def _eval(sides, N):
    d = lcm(sides.lhs.scale(), sides.rhs.scale())
    return sides.lhs.at(N, d), sides.rhs.at(N, d)


@pytest.mark.parametrize("name", sorted(COROLLARIES))
def test_corollary_displays(name):
    c = identities.Ctx(q, M.a(1))
    L, R = _eval(identities.corollary(name, c), 60)
    assert L.agree(R).passed
    tag, m = COROLLARIES[name]
    fam = catalog.build_sides(tag, IdentityParams(m=m), 60)
    assert L.agree(fam[0]).passed and R.agree(fam[1]).passed


@pytest.mark.parametrize("name", sorted(COROLLARIES))
@pytest.mark.parametrize("z", [M(-1), q, -M.q(2)], ids=str)
def test_corollaries_with_z_specialised(name, z):
    L, R = _eval(identities.corollary(name, identities.Ctx(q, z)), 60)
    assert L.agree(R).passed


def test_printed_m3_display_with_z_squared_fails():
    # the printed m = 3 case of the fourth family writes z^2 where z^3 belongs;
    # the literal transcription disagrees, the corrected one passes
    L, R = _eval(identities.corollary("4b_literal", identities.Ctx(q, M.a(1))), 20)
    rep = L.agree(R)
    assert not rep.passed and rep.first_mismatch == 2
    L, R = _eval(identities.corollary("4b", identities.Ctx(q, M.a(1))), 20)
    assert L.agree(R).passed


def test_t2gen_route_three_way():
    ctx = identities.Ctx(q, M.a(1))
    A, B, C = identities.t2gen_route(ctx)
    d = lcm(A.scale(), B.scale(), C.scale())
    sA, sB, sC = (n.at(40, d) for n in (A, B, C))
    assert sA.agree(sB).passed and sB.agree(sC).passed and sA.agree(sC).passed
    assert min(x.q_order for x in (sA, sB, sC)) >= 40 - 3  # substitution may cost a little


def test_aux_grids():
    grid = catalog.aux_grid()
    # 15 one-symbolic runs plus 25 + 25 both-monomial combinations
    assert len(grid) == 65
    for tag, p in grid:
        rep = catalog.verify(tag, p, 40)
        assert rep.passed, rep.line()


@pytest.mark.parametrize("tag", ["R1", "R2", "R1_PARTNER", "RR22P", "FT_A", "RR_2VAR"])
@pytest.mark.parametrize("m", [M(-1), q, -q, M.q(h), -M.q(2)], ids=str)
def test_substitution_commutes_with_building(tag, m):
    N = 40
    # the symbolic sides are built deeper so that terms past their order whose
    # a-power drags them below q^N are really present
    L, R = catalog.build_sides(tag, None, 3 * N)
    Ls, Rs = (qs_substitute_a(x, m) for x in (L, R))
    Ls, Rs = (x.truncate(N * x.scale) for x in (Ls, Rs))
    assert Ls.agree(Rs).passed
    direct = catalog.build_sides(tag, IdentityParams(a_mode=AMode.monomial(m)), N)
    for got, want in zip((Ls, Rs), direct):
        rep = got.agree(want)
        assert rep.passed and rep.q_order >= N


def test_verify_all_in_order():
    s = catalog.verify_all(30)
    assert s.ok and len(s.reports) == 26 + 19 + 2
    assert [r.tag for r in s.reports[:26]] == list(catalog.TAGS)
    assert s.reports[26].label == "T1.1" and s.reports[-1].label == "post.2"


def test_verify_all_parallel_matches():
    one = [r.to_json() for r in catalog.verify_all(20).reports]
    two = [r.to_json() for r in catalog.verify_all(20, jobs=2).reports]
    strip = lambda rs: [{k: v for k, v in r.items() if k != "millis"} for r in rs]  # noqa: E731
    assert strip(one) == strip(two)


def test_corrupted_builder_located(monkeypatch):
    real = identities.BUILDERS["R1"]

    def broken(c):
        s = real(c)
        s.rhs = Prod([s.rhs, Term(numer=[], extras=[[(1, M()), (1, M.a(1, 2))]])])
        return s

    monkeypatch.setitem(identities.BUILDERS, "R1", broken)
    s = catalog.verify_all(30, include_post=False)
    bad = s.failures()
    # R1 itself and the Table 1 rows built on it fail; everything else passes
    assert bad[0].tag == "R1" and all(r.tag == "R1" for r in bad)
    assert bad[0].discrepancy["exponent"] == 2
    assert s.passed == len(s.reports) - len(bad)


def test_report_json_shape():
    r = catalog.verify("R1", None, 20).to_json()
    assert set(r) >= {"tag", "params", "order_certified", "pass", "millis"}
    assert "discrepancy" not in r


def test_default_order_env(monkeypatch):
    monkeypatch.setenv("QRR_DEFAULT_ORDER", "25")
    assert catalog.default_order() == 25 and catalog.default_order(False) == 25
    monkeypatch.setenv("QRR_DEFAULT_ORDER", "x")
    with pytest.raises(BadParams):
        catalog.default_order()
    monkeypatch.delenv("QRR_DEFAULT_ORDER")
    assert (catalog.default_order(), catalog.default_order(False)) == (60, 120)


def test_schema_violations():
    with pytest.raises(BadParams):
        catalog.verify("RR_FIRST", IdentityParams(a_mode=AMode.monomial(q)))
    with pytest.raises(BadParams):
        catalog.verify("R1", IdentityParams(x_sub=M.q(-1)))
    with pytest.raises(BadParams):
        catalog.verify("R1", IdentityParams(aux=(("b", q),)))
    with pytest.raises(BadParams):
        catalog.verify("NOPE")

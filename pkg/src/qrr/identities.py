"""Side builders for every identity in the catalog.

Each builder takes a :class:`Ctx` (the resolved parameters) and returns a
:class:`Sides` of lazy nodes.  ``x`` is the base variable (usually ``q``), ``a``
the value of the free parameter (``a`` or ``z`` in the displays), already
substituted at the monomial level so specializations are exact.

Identities whose sides carry a non-invertible factor are built in
cross-multiplied form; the ``note`` field says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import BadParams
from .qfunctions import f_node, phi_node, psi_node, theta_node, theta_prod_node
from .series import SignedMonomial
from .terms import (N1, NSQ, ONE, TRI, TRI_M, HyperSum, IndexedPoch, InfPoch, Inv, Node, Prod,
                    Sum, Term, quad)

M = SignedMonomial
NEG = M(-1)


@dataclass(frozen=True)
class Ctx:
    x: SignedMonomial
    a: SignedMonomial
    m: int = 1
    k: int = 0
    r: int = 0
    aux: dict = field(default_factory=dict)
    n_max: int | None = None

    def xp(self, e) -> SignedMonomial:
        """``x**e`` for rational ``e`` (``x`` is a positive q-power)."""
        return M.q(self.x.q_exp * Fraction(e))


@dataclass
class Sides:
    lhs: Node
    rhs: Node
    middle: dict = field(default_factory=dict)
    note: str = ""


def P(base: SignedMonomial, step: SignedMonomial, length=(1, 0), base_step: SignedMonomial = ONE) -> IndexedPoch:
    """``(base * base_step**n; step)_{alpha n + beta}``; ``length=None`` is infinite."""
    return IndexedPoch(base, step, length, base_step)


def const(c: SignedMonomial):
    """A prefactor entry that does not depend on ``n``."""
    return (c, quad(0, 0, 1))


def hs(ctx: Ctx, **kw) -> HyperSum:
    kw.setdefault("n_max_override", ctx.n_max)
    return HyperSum(**kw)


def over(node: Node, *dens: Node) -> Node:
    return Prod([node] + [Inv(d) for d in dens])


def infs(*pairs) -> list:
    return [InfPoch(b, s) for b, s in pairs]


# ---------------------------------------------------------------------------
# the parametric identities and their specializations
# ---------------------------------------------------------------------------

def r1(c: Ctx) -> Sides:
    x, a = c.x, c.a
    x2 = x * x
    lhs = hs(c, prefactor=[(x, quad(2))], numer=[P(-(a * x), x2), P(-(x / a), x2)],
             denom=[P(x2, x2, (2, 0))])
    rhs = over(theta_node(a * x ** 3, x ** 3 / a), f_node(x2))
    return Sides(lhs, rhs)


def r2(c: Ctx) -> Sides:
    x, a = c.x, c.a
    x2, x4 = x * x, x ** 4
    lhs = hs(c, prefactor=[(x, NSQ)], numer=[P(-(a * x), x2), P(-(x / a), x2)],
             denom=[P(x, x2), P(x4, x4)])
    rhs = over(theta_node(a * x2, x2 / a), psi_node(-x))
    return Sides(lhs, rhs)


def r1_partner(c: Ctx) -> Sides:
    x, a = c.x, c.a
    x2 = x * x
    lhs = hs(c, prefactor=[(x, quad(2, 2))], numer=[P(-a, x2, (1, 1)), P(-(x2 / a), x2)],
             denom=[P(x2, x2, (2, 1))])
    rhs = over(theta_node(a, x ** 6 / a), f_node(x2))
    return Sides(lhs, rhs)


def rr22p(c: Ctx) -> Sides:
    x, a = c.x, c.a
    x2, x4 = x * x, x ** 4
    body = hs(c, prefactor=[(x, quad(1, 2))], numer=[P(-(a * x), x2), P(-(x / a), x2)],
              denom=[P(x, x2, (1, 1)), P(x4, x4)])
    lhs = Prod([Term(numer=[-a]), body])
    rhs = over(theta_node(a, x4 / a), psi_node(-x))
    return Sides(lhs, rhs, note="the factor (1+a) is kept as a multiplier on the left")


def r1_partner_ss(c: Ctx) -> Sides:
    x, a = c.x, c.a
    lhs = hs(c, prefactor=[(x, TRI)], numer=[P(-x, x), P(-a, x, (1, 1)), P(-(x / a), x)],
             denom=[P(x, x, (2, 1))])
    rhs = over(theta_node(a, x * x / a), phi_node(-x))
    return Sides(lhs, rhs)


def _alt_theta_tail(c: Ctx, expo, extras) -> HyperSum:
    return hs(c, prefactor=[(NEG, N1), (c.x, expo)], extras=extras)


def ft_a(c: Ctx) -> Sides:
    x, a = c.x, c.a
    lhs = hs(c, prefactor=[(NEG, N1), (x, TRI)], numer=[P(-a, x, (1, 1)), P(-(x / a), x)],
             denom=[P(x, x, (1, 1), base_step=x)])
    rhs = _alt_theta_tail(c, quad(1, 1), [[(1, ONE, a.inv()), (1, a, a)]])
    return Sides(lhs, rhs)


def ft_b(c: Ctx) -> Sides:
    x, a = c.x, c.a
    body = hs(c, n_start=1, prefactor=[(NEG, N1), (x, TRI)],
              numer=[P(-(a * x), x, (1, -1)), P(-a.inv(), x), P(x, x)],
              denom=[P(x, x, (2, 0))])
    lhs = Sum([(1, Term()), (1, Prod([Term(extras=[[(1, a), (-1, ONE)]]), body]))])
    rhs = _alt_theta_tail(c, NSQ, [[(1, ONE, a), (1, x / a, x * x / a)]])
    return Sides(lhs, rhs, note="the factor (a-1) is kept as a multiplier on the left")


def rr_2var(c: Ctx) -> Sides:
    q, z = c.x, c.a
    lhs = hs(c, prefactor=[(z, N1), (q, NSQ)], denom=[P(q, q)])
    tail = hs(c, n_start=1,
              prefactor=[(NEG, N1), (z, quad(0, 2)), (q, quad(Fraction(5, 2), Fraction(-1, 2)))],
              numer=[P(z * q, q, (1, -1))], denom=[P(q, q)],
              extras=[[(1, ONE, ONE), (-1, z, q * q)]])
    rhs = over(Sum([(1, Term()), (1, tail)]), Term(numer=infs((z * q, q))))
    return Sides(lhs, rhs)


def rr_first(c: Ctx) -> Sides:
    q = c.x
    lhs = hs(c, prefactor=[(q, NSQ)], denom=[P(q, q)])
    rhs = Term(denom=infs((q, q ** 5), (q ** 4, q ** 5)))
    return Sides(lhs, rhs)


def rr_second(c: Ctx) -> Sides:
    q = c.x
    lhs = hs(c, prefactor=[(q, quad(1, 1))], denom=[P(q, q)])
    rhs = Term(denom=infs((q ** 2, q ** 5), (q ** 3, q ** 5)))
    return Sides(lhs, rhs)




def aqb(c: Ctx) -> Sides:
    q = c.x
    if "c" in c.aux and "b" in c.aux:
        b, cc = c.aux["b"], c.aux["c"]
    elif "c" in c.aux:
        b, cc = c.a, c.aux["c"]
    elif "b" in c.aux:
        b, cc = c.aux["b"], c.a
    else:
        b, cc = c.a, q
    q2 = q * q
    numer = [P(b, q), P(q / b, q)]
    pre = [(cc, N1), (q, TRI_M)]
    prod_num = infs((cc * q / b, q2), (b * cc, q2))
    if cc.q_exp > 0:
        lhs = hs(c, prefactor=pre, numer=numer, denom=[P(cc, q), P(q2, q2)])
        rhs = Term(numer=prod_num, denom=infs((cc, q)))
        return Sides(lhs, rhs)
    if cc.q_exp < 0 or cc.a_exp == 0:
        raise BadParams(f"c = {cc} must be symbolic or have positive valuation")
    # (c;q)_n is not a unit: multiply through by (c;q)_inf
    lhs = hs(c, prefactor=pre, numer=numer + [P(cc, q, None, base_step=q)], denom=[P(q2, q2)])
    rhs = Term(numer=prod_num)
    return Sides(lhs, rhs, note="cross-multiplied by (c;q)_inf")


def aqg(c: Ctx) -> Sides:
    q = c.x
    a = c.a
    b = c.aux.get("b", -q)
    abq = a * b * q
    if abq.q_exp <= 0:
        raise BadParams(f"abq = {abq} must have positive valuation")
    q2 = q * q
    lhs = hs(c, prefactor=[(q, TRI)], numer=[P(a, q), P(b, q)], denom=[P(q, q), P(abq, q2)])
    rhs = Term(numer=infs((a * q, q2), (b * q, q2)), denom=infs((q, q2), (abq, q2)))
    return Sides(lhs, rhs)


def r2eq2b(c: Ctx) -> Sides:
    x, a = c.x, c.a
    x2, x4 = x * x, x ** 4
    lhs = hs(c, prefactor=[(NEG, N1), (x, NSQ)],
             numer=[P(x, x2, (1, 1)), P(-a, x2, (1, 1)), P(-(x2 / a), x2)],
             denom=[P(x2, x2, (2, 1))])
    mid = over(hs(c, prefactor=[(NEG, N1), (x, quad(2, 1))],
                  extras=[[(1, ONE, ONE), (-1, x, x2)], [(1, ONE, a.inv()), (1, a, a)]]),
               psi_node(x))
    prods = Sum([(1, Term(numer=infs((a * x, x4), (x ** 3 / a, x4), (x4, x4)))),
                 (1, Term(a, numer=infs((x / a, x4), (x ** 3 * a, x4), (x4, x4))))])
    rhs = over(prods, psi_node(x))
    return Sides(lhs, rhs, middle={"theta_series": mid})


def rr2ceq2c(c: Ctx) -> Sides:
    x, a = c.x, c.a
    lhs = hs(c, prefactor=[(NEG, N1), (x, TRI_M)], numer=[P(x, x), P(-a, x), P(-(x / a), x)],
             denom=[P(x, x, (2, 0))])
    first = hs(c, n_start=1, prefactor=[(NEG, N1), (x, NSQ)],
               extras=[[(1, ONE, a.inv()), (-1, ONE, a)]])
    second = hs(c, prefactor=[(NEG, N1), (x, quad(1, 1))], extras=[[(1, ONE, a.inv()), (1, a, a)]])
    rhs = Sum([(1, Term()), (1, first), (-1, second)])
    return Sides(lhs, rhs)


# ---------------------------------------------------------------------------
# dissection families
# ---------------------------------------------------------------------------

def _dissection(c: Ctx, outer: Callable[[int], tuple], inner: Callable[[int], HyperSum], rhs: Node) -> Sides:
    """``sum_{r<m} outer(r) * inner(r)`` against ``rhs``.

    ``outer(r)`` is (monomial, extra-or-None) where the extra is an
    n-independent factor ``sum c*mono``.
    """
    if c.m < 1:
        raise BadParams("m must be a positive integer")
    parts = []
    for r in range(c.m):
        mono, extra = outer(r)
        body = inner(r)
        pre = Term(mono, extras=[extra] if extra else [])
        parts.append((1, Prod([pre, body])))
    return Sides(Sum(parts), rhs)


def tgen1(c: Ctx) -> Sides:
    q, z, m = c.x, c.a, c.m
    B = c.xp(m * m)

    def inner(r):
        s = c.xp(Fraction(m * m, 2)) * z ** m * c.xp(3 * m * (Fraction(r) - Fraction(1, 2)))
        t = c.xp(Fraction(m * m, 2)) / (z ** m * c.xp(3 * m * (Fraction(r) - Fraction(1, 2))))
        return hs(c, prefactor=[(B, NSQ)], numer=[P(-s, B), P(-t, B)], denom=[P(B, B, (2, 0))])

    q3 = q ** 3
    rhs = over(theta_prod_node(z, q3 / z), f_node(B))
    return _dissection(c, lambda r: (c.xp(Fraction(3 * r * (r - 1), 2)) * z ** r, None), inner, rhs)


def tgen2(c: Ctx) -> Sides:
    q, z, m = c.x, c.a, c.m
    B = c.xp(m * m)

    def inner(r):
        sh = c.xp(3 * m * (Fraction(r) - Fraction(1, 2)))
        s = c.xp(Fraction(3 * m * m, 2)) * z ** m * sh
        t = ONE / (c.xp(Fraction(m * m, 2)) * z ** m * sh)
        return hs(c, prefactor=[(B, quad(1, 1))], numer=[P(-s, B, (1, 1)), P(-t, B)],
                  denom=[P(B, B, (2, 1))])

    rhs = over(theta_prod_node(z, q ** 3 / z), f_node(B))
    return _dissection(c, lambda r: (c.xp(Fraction(3 * r * (r - 1), 2)) * z ** r, None), inner, rhs)


def tgen3(c: Ctx) -> Sides:
    q, z, m = c.x, c.a, c.m
    B = c.xp(m * m)
    B2, B4 = B * B, B ** 4

    def inner(r):
        s = B * z ** m * c.xp(4 * m * r)
        t = B / (z ** m * c.xp(4 * m * r))
        return hs(c, prefactor=[(B, NSQ)], numer=[P(-s, B2), P(-t, B2)], denom=[P(B, B2), P(B4, B4)])

    rhs = over(Prod([theta_prod_node(z * q * q, q * q / z), Term(numer=infs((-B, B2)))]),
               f_node(B2))
    return _dissection(c, lambda r: (c.xp(2 * r * r) * z ** r, None), inner, rhs)


def tgen4(c: Ctx) -> Sides:
    q, z, m = c.x, c.a, c.m
    B = c.xp(m * m)

    def inner(r):
        sh = c.xp(m * (2 * r - 1))
        return hs(c, prefactor=[(c.xp(Fraction(m * m, 2)), quad(1, 1))],
                  numer=[P(-(B * z ** m * sh), B, (1, 1)), P(-B, B), P(-(ONE / (z ** m * sh)), B)],
                  denom=[P(B, B, (2, 1))])

    rhs = over(Prod([theta_prod_node(z, q * q / z), Term(numer=infs((-B, B)))]), f_node(B))
    return _dissection(c, lambda r: (c.xp(r * r - r) * z ** r, None), inner, rhs)


def tgen5(c: Ctx) -> Sides:
    q, z, m = c.x, c.a, c.m
    B = c.xp(m * m)
    B2 = B * B

    def inner(r):
        sh = c.xp(m * (4 * r - 2))
        return hs(c, prefactor=[(B, quad(1, 2))],
                  numer=[P(-B, B2, (1, 1)), P(-(B ** 3 * sh * z ** m), B2),
                         P(-(ONE / (B * sh * z ** m)), B2)],
                  denom=[P(B2, B2, (2, 1))])

    def outer(r):
        return (c.xp(2 * r * r - 2 * r) * z ** r, [(1, ONE), (1, z ** m * c.xp(2 * m * m + (4 * r - 2) * m))])

    rhs = over(Prod([theta_prod_node(z, q ** 4 / z), Term(numer=infs((-B, B2)))]), f_node(B2))
    return _dissection(c, outer, inner, rhs)


# ---------------------------------------------------------------------------
# quintuple product consequences
# ---------------------------------------------------------------------------

def t2gen(c: Ctx) -> Sides:
    q, z = c.x, c.a
    zi = z.inv()
    z3 = z ** 3
    lhs = hs(c, prefactor=[(q, NSQ)], numer=[P(-z3, q), P(-z3.inv(), q)], denom=[P(q, q, (2, 0))],
             extras=[[(1, ONE, ONE), (-1, z, q), (-1, zi, q)]])
    prod = Term(numer=infs((z * q, q), (q / z, q), (q * z * z, q * q), (q / (z * z), q * q)),
                extras=[[(1, ONE), (-1, z), (-1, zi)]])
    return Sides(lhs, prod, note="cross-multiplied by 1-(z+1/z)")


def t2gen_route(c: Ctx) -> tuple[Node, Node, Node]:
    """The proof route: two specializations of the first identity, the
    quintuple theta combination, and the product, all divided by ``(1 - 1/z)``-free forms.

    Returns nodes ``(A, B, C)`` with ``A = R1(a=q^(1/2) z^3) - R1(a=q^(1/2)/z^3)/z``
    (both at ``x = q^(1/2)``, left sides), ``B`` the same combination of right
    sides and ``C = qpi2 / (q;q)_inf``; all three should agree.
    """
    q, z = c.x, c.a
    h = c.xp(Fraction(1, 2))
    up = r1(Ctx(h, h * z ** 3, n_max=c.n_max))
    down = r1(Ctx(h, h / z ** 3, n_max=c.n_max))
    A = Sum([(1, up.lhs), (-1, Prod([Term(z.inv()), down.lhs]))])
    B = Sum([(1, up.rhs), (-1, Prod([Term(z.inv()), down.rhs]))])
    C = over(Term(numer=infs((q, q), (z * q, q), (z.inv(), q), (z * z * q, q * q), (q / (z * z), q * q))),
             f_node(q))
    return A, B, C


def t3gen(c: Ctx) -> Sides:
    q, z = c.x, c.a
    z3 = z ** 3
    lhs = hs(c, prefactor=[(q, quad(1, 1))], numer=[P(-(q * q * z3), q), P(-((q * z3).inv()), q)],
             denom=[P(q, q, (2, 1))], extras=[[(1, ONE, ONE), (-1, q * z, q), (-1, z.inv(), q)]])
    rhs = Term(numer=infs((z * q, q), (z.inv(), q), (q ** 3 * z * z, q * q), (q / (z * z), q * q)))
    return Sides(lhs, rhs)


# ---------------------------------------------------------------------------
# partition series
# ---------------------------------------------------------------------------

def check_kr(k, r) -> None:
    """Positive integers with ``k >= 3`` and ``r < k/2``; names the first rule broken."""
    if not (isinstance(k, int) and isinstance(r, int)):
        raise BadParams(f"k and r must be integers (got k={k!r}, r={r!r})")
    for ok, rule in ((k >= 3, "k >= 3"), (r >= 1, "r > 0"), (2 * r < k, "r < k/2")):
        if not ok:
            raise BadParams(f"require {rule} (got k={k}, r={r})")


def _check_kr(c: Ctx) -> None:
    check_kr(c.k, c.r)


def r1rk1(c: Ctx) -> Sides:
    _check_kr(c)
    k, r = c.k, c.r
    qk = c.xp(k)
    lhs = hs(c, prefactor=[(qk, NSQ)], numer=[P(-c.xp(r), qk), P(-c.xp(k - r), qk)],
             denom=[P(qk, qk, (2, 0))])
    q3k = c.xp(3 * k)
    rhs = Term(numer=infs((-c.xp(k + r), q3k), (-c.xp(2 * k - r), q3k)),
               denom=infs((qk, q3k), (c.xp(2 * k), q3k)))
    return Sides(lhs, rhs)


def r2rk1(c: Ctx) -> Sides:
    _check_kr(c)
    k, r = c.k, c.r
    qk, q2k, q4k = c.xp(k), c.xp(2 * k), c.xp(4 * k)
    lhs = hs(c, prefactor=[(qk, NSQ)], numer=[P(-c.xp(k + r), q2k), P(-c.xp(k - r), q2k)],
             denom=[P(qk, q2k), P(q4k, q4k)])
    rhs = Term(numer=infs((-c.xp(2 * k + r), q4k), (-c.xp(2 * k - r), q4k)), denom=infs((qk, q2k)))
    return Sides(lhs, rhs)


def r3rk1(c: Ctx) -> Sides:
    _check_kr(c)
    k, r = c.k, c.r
    qk, q3k = c.xp(k), c.xp(3 * k)
    lhs = hs(c, prefactor=[(qk, quad(1, 1))], numer=[P(-c.xp(r), qk, (1, 1)), P(-c.xp(k - r), qk)],
             denom=[P(qk, qk, (2, 1))])
    rhs = Term(numer=infs((-c.xp(r), q3k), (-c.xp(3 * k - r), q3k)),
               denom=infs((qk, q3k), (c.xp(2 * k), q3k)))
    return Sides(lhs, rhs, note="reads (-q^r, q^k)_{n+1} as (-q^r; q^k)_{n+1}")


def rr22rk2(c: Ctx) -> Sides:
    _check_kr(c)
    k, r = c.k, c.r
    qk, q2k, q4k = c.xp(k), c.xp(2 * k), c.xp(4 * k)
    lhs = hs(c, prefactor=[(qk, quad(1, 2, 1))], numer=[P(-c.xp(k + r), q2k), P(-c.xp(k - r), q2k)],
             denom=[P(qk, q2k, (1, 1)), P(q4k, q4k)])
    rhs = Term(qk, numer=infs((-c.xp(4 * k + r), q4k), (-c.xp(4 * k - r), q4k)), denom=infs((qk, q2k)))
    return Sides(lhs, rhs)


# ---------------------------------------------------------------------------
# literal corollary displays (m = 2, 3)
# ---------------------------------------------------------------------------

def _qz(qe, ze=0, sign=1) -> SignedMonomial:
    return M(sign, ze, Fraction(qe))


def _block(c: Ctx, coeff: SignedMonomial, extra, body: HyperSum) -> tuple:
    return (1, Prod([Term(coeff, extras=[extra] if extra else []), body]))


def _sub(mono: SignedMonomial, c: Ctx) -> SignedMonomial:
    """Rewrite a literal ``sign q^e z^f`` in terms of the context's ``x`` and ``a``."""
    return M(mono.sign) * c.xp(mono.q_exp) * c.a ** mono.a_exp


def _lit(c: Ctx, spec: list, rhs: Node) -> Sides:
    """Build ``sum_blocks coeff*(extra)*sum_n(...)`` from a literal spec.

    Each block is ``(coeff, extra, pre_quad_in_q, numer, denom)`` where numer and
    denom entries are ``(base, step_qexp, length)`` with literal monomials.
    """
    parts = []
    for coeff, extra, pre, numer, denom in spec:
        body = hs(c, prefactor=[(c.xp(1), pre)],
                  numer=[P(_sub(b, c), c.xp(s), ln) for b, s, ln in numer],
                  denom=[P(_sub(b, c), c.xp(s), ln) for b, s, ln in denom])
        ex = [(k, _sub(mm, c)) for k, mm in extra] if extra else None
        parts.append(_block(c, _sub(coeff, c), ex, body))
    return Sides(Sum(parts), rhs)


def corollary(name: str, c: Ctx) -> Sides:
    """Literal transcriptions of the m = 2 and m = 3 dissection corollaries."""
    n0, n1 = (1, 0), (1, 1)
    z = c.a
    q = c.x
    if name == "1a":
        den = [(_qz(4), 4, (2, 0))]
        rhs = over(theta_prod_node(z, q ** 3 / z), f_node(c.xp(4)))
        spec = [(_qz(0), None, quad(4), [(_qz(5, -2, -1), 4, n0), (_qz(-1, 2, -1), 4, n0)], den),
                (_qz(0, 1), None, quad(4), [(_qz(5, 2, -1), 4, n0), (_qz(-1, -2, -1), 4, n0)], den)]
    elif name == "1b":
        den = [(_qz(9), 9, (2, 0))]
        rhs = over(theta_prod_node(z, q ** 3 / z), f_node(c.xp(9)))
        spec = [(_qz(0), None, quad(9), [(_qz(9, -3, -1), 9, n0), (_qz(0, 3, -1), 9, n0)], den),
                (_qz(0, 1), None, quad(9), [(_qz(9, 3, -1), 9, n0), (_qz(0, -3, -1), 9, n0)], den),
                (_qz(3, 2), None, quad(9), [(_qz(18, 3, -1), 9, n0), (_qz(-9, -3, -1), 9, n0)], den)]
    elif name == "2a":
        den = [(_qz(4), 4, (2, 1))]
        rhs = over(theta_prod_node(z, q ** 3 / z), f_node(c.xp(4)))
        spec = [(_qz(0), None, quad(4, 4), [(_qz(3, 2, -1), 4, n1), (_qz(1, -2, -1), 4, n0)], den),
                (_qz(0, 1), None, quad(4, 4), [(_qz(9, 2, -1), 4, n1), (_qz(-5, -2, -1), 4, n0)], den)]
    elif name == "2b":
        den = [(_qz(9), 9, (2, 1))]
        rhs = over(theta_prod_node(z, q ** 3 / z), f_node(c.xp(9)))
        spec = [(_qz(0), None, quad(9, 9), [(_qz(9, 3, -1), 9, n1), (_qz(0, -3, -1), 9, n0)], den),
                (_qz(0, 1), None, quad(9, 9), [(_qz(18, 3, -1), 9, n1), (_qz(-9, -3, -1), 9, n0)], den),
                (_qz(3, 2), None, quad(9, 9), [(_qz(27, 3, -1), 9, n1), (_qz(-18, -3, -1), 9, n0)], den)]
    elif name == "3a":
        den = [(_qz(4), 8, n0), (_qz(16), 16, n0)]
        rhs = over(Prod([theta_prod_node(z * q * q, q * q / z), Term(numer=infs((-c.xp(4), c.xp(8))))]),
                   f_node(c.xp(8)))
        spec = [(_qz(0), None, quad(4), [(_qz(4, -2, -1), 8, n0), (_qz(4, 2, -1), 8, n0)], den),
                (_qz(2, 1), None, quad(4), [(_qz(-4, -2, -1), 8, n0), (_qz(12, 2, -1), 8, n0)], den)]
    elif name == "3b":
        den = [(_qz(9), 18, n0), (_qz(36), 36, n0)]
        rhs = over(Prod([theta_prod_node(z * q * q, q * q / z), Term(numer=infs((-c.xp(9), c.xp(18))))]),
                   f_node(c.xp(18)))
        spec = [(_qz(0), None, quad(9), [(_qz(9, -3, -1), 18, n0), (_qz(9, 3, -1), 18, n0)], den),
                (_qz(2, 1), None, quad(9), [(_qz(-3, -3, -1), 18, n0), (_qz(21, 3, -1), 18, n0)], den),
                (_qz(8, 2), None, quad(9), [(_qz(-15, -3, -1), 18, n0), (_qz(33, 3, -1), 18, n0)], den)]
    elif name in ("4a", "4b", "4b_literal"):
        mm = 2 if name == "4a" else 3
        # the printed m = 3 display writes z^2 where the family gives z^3
        e = 2 if name in ("4a", "4b_literal") else 3
        B = mm * mm
        den = [(_qz(B), B, (2, 1))]
        rhs = over(Prod([theta_prod_node(z, q * q / z), Term(numer=infs((-c.xp(B), c.xp(B))))]),
                   f_node(c.xp(B)))
        pre = quad(Fraction(B, 2), Fraction(B, 2))
        if mm == 2:
            rows = [(_qz(0), 2, 2), (_qz(0, 1), 6, -2)]
        else:
            rows = [(_qz(0), 6, 3), (_qz(0, 1), 12, -3), (_qz(2, 2), 18, -9)]
        spec = [(co, None, pre, [(_qz(up, e, -1), B, n1), (_qz(B, 0, -1), B, n0), (_qz(dn, -e, -1), B, n0)], den)
                for co, up, dn in rows]
    elif name in ("5a", "5b"):
        mm = 2 if name == "5a" else 3
        B = mm * mm
        den = [(_qz(2 * B), 2 * B, (2, 1))]
        rhs = over(Prod([theta_prod_node(z, q ** 4 / z), Term(numer=infs((-c.xp(B), c.xp(2 * B))))]),
                   f_node(c.xp(2 * B)))
        pre = quad(B, 2 * B)
        if mm == 2:
            rows = [(_qz(0), 4, 8, 0), (_qz(0, 1), 12, 16, -8)]
        else:
            rows = [(_qz(0), 12, 21, -3), (_qz(0, 1), 24, 33, -15), (_qz(4, 2), 36, 45, -27)]
        spec = [(co, [(1, ONE), (1, _qz(ex, mm))], pre,
                 [(_qz(B, 0, -1), 2 * B, n1), (_qz(up, mm, -1), 2 * B, n0), (_qz(dn, -mm, -1), 2 * B, n0)], den)
                for co, ex, up, dn in rows]
    else:
        raise KeyError(name)
    return _lit(c, spec, rhs)


def remark_second(c: Ctx) -> Sides:
    """The remark's display, transcribed literally (it is the m = 2 case of TGEN5)."""
    return corollary("5a", c)


BUILDERS: dict[str, Callable[[Ctx], Sides]] = {
    "R1": r1, "R2": r2, "R1_PARTNER": r1_partner, "RR22P": rr22p, "R1_PARTNER_SS": r1_partner_ss,
    "FT_A": ft_a, "FT_B": ft_b, "RR_2VAR": rr_2var, "RR_FIRST": rr_first, "RR_SECOND": rr_second,
    "AQB": aqb, "AQG": aqg, "R2EQ2B": r2eq2b, "RR2CEQ2C": rr2ceq2c,
    "TGEN1": tgen1, "TGEN2": tgen2, "TGEN3": tgen3, "TGEN4": tgen4, "TGEN5": tgen5,
    "T2GEN": t2gen, "T3GEN": t3gen,
    "R1RK1": r1rk1, "R2RK1": r2rk1, "R3RK1": r3rk1, "RR22RK2": rr22rk2,
    "REMARK_SECOND": remark_second,
}

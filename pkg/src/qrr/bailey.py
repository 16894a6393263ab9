"""Bailey pairs and the two transformation sequences built on them.

A Bailey pair relative to ``z`` (in base ``q``) is a pair of sequences with

    beta_n = sum_{r=0}^{n} alpha_r / ((q; q)_{n-r} (z q; q)_{n+r}).

Pairs here are described structurally (a :class:`~qrr.terms.HyperSum` kept as
a *summand template*, plus explicit overrides for small ``n``) so that the
transformed sums inherit certified tail bounds without further work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadParams
from .series import QSeries, SignedMonomial
from .series import qs_agree
from .terms import (ONE, TRI, TRI_M, HyperSum, IndexedPoch, InfPoch, Node, Prod, Sum, Term, lcm,
                    poch, quad)

M = SignedMonomial


@dataclass(frozen=True)
class IndexedSeq:
    """A sequence ``n -> Term``: a template valid for ``n >= template.n_start``
    plus explicit overrides below that."""

    template: HyperSum
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        bad = [n for n in self.overrides if n >= self.template.n_start or n < 0]
        if bad:
            raise ValueError(f"overrides must precede the template start: {bad}")

    def term(self, n: int) -> Term:
        if n in self.overrides:
            return self.overrides[n]
        if n < self.template.n_start:
            return Term.zero()
        return self.template.term(n)


@dataclass(frozen=True)
class BaileyPair:
    """``(alpha, beta)`` relative to ``relative`` in base ``base``."""

    name: str
    base: SignedMonomial
    relative: SignedMonomial
    alpha: IndexedSeq
    beta: IndexedSeq

    def alpha_n(self, n: int) -> Term:
        return self.alpha.term(n)

    def beta_n(self, n: int) -> Term:
        return self.beta.term(n)


def _check_base(q: SignedMonomial) -> None:
    if q.sign != 1 or q.a_exp != 0 or q.q_exp <= 0:
        raise BadParams(f"Bailey base must be a positive q-power, got {q}")


def abbp_pair(base: SignedMonomial = M.q(1), a: SignedMonomial = M.a(1)) -> BaileyPair:
    """``alpha_n = (a^-n + a^(n+1)) q^(n(n+1)/2)``,
    ``beta_n = (-a; q)_{n+1} (-q/a; q)_n / (q^2; q)_{2n}``, relative to ``q``."""
    q = base
    _check_base(q)
    alpha = HyperSum(prefactor=[(q, TRI)], extras=[[(1, ONE, a.inv()), (1, a, a)]])
    beta = HyperSum(numer=[IndexedPoch(-a, q, (1, 1)), IndexedPoch(-(q / a), q, (1, 0))],
                    denom=[IndexedPoch(q * q, q, (2, 0))])
    return BaileyPair("ABBP", q, q, IndexedSeq(alpha), IndexedSeq(beta))


def newbp_pair(base: SignedMonomial = M.q(1), a: SignedMonomial = M.a(1)) -> BaileyPair:
    """``alpha_0 = 1``, ``alpha_n = a^-n q^(n(n-1)/2) + a^n q^(n(n+1)/2)``,
    ``beta_n = (-aq; q)_n (-1/a; q)_n / (q; q)_{2n}``, relative to ``1``."""
    q = base
    _check_base(q)
    alpha = HyperSum(prefactor=[(q, TRI_M)], extras=[[(1, ONE, a.inv()), (1, ONE, a * q)]], n_start=1)
    beta = HyperSum(numer=[IndexedPoch(-(a * q), q, (1, 0)), IndexedPoch(-a.inv(), q, (1, 0))],
                    denom=[IndexedPoch(q, q, (2, 0))])
    return BaileyPair("NewBP", q, ONE, IndexedSeq(alpha, {0: Term()}), IndexedSeq(beta))


# ---------------------------------------------------------------------------
# pair verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairCheck:
    n: int
    passed: bool
    order: Fraction


def _eval_at(nodes, order: Fraction) -> list[QSeries]:
    d = lcm(*(n.scale() for n in nodes))
    return [n.at(order, d) for n in nodes]


def verify_bailey_pair(pair: BaileyPair, n_max: int, order) -> list[PairCheck]:
    """Check the defining relation for ``n <= n_max`` through ``q**order``.

    Everything is cross-multiplied, so only polynomials in ``q`` are compared:

        num(beta_n) (q;q)_n (zq;q)_{2n} prod_r den(alpha_r)
            = den(beta_n) sum_r num(alpha_r) (q^{n-r+1};q)_r (zq^{n+r+1};q)_{n-r}
              prod_{s != r} den(alpha_s)
    """
    q, z = pair.base, pair.relative
    order = Fraction(order)
    out = []
    for n in range(n_max + 1):
        b = pair.beta_n(n)
        alphas = [pair.alpha_n(r) for r in range(n + 1)]
        D = Term(numer=poch(q, q, n) + poch(z * q, q, 2 * n))
        lhs_parts: list[Node] = [b.numerator_part(), D] + [a.denominator_part() for a in alphas]
        rhs_terms = []
        for r, a in enumerate(alphas):
            cross = Term(numer=poch(q ** (n - r + 1), q, r) + poch(z * q ** (n + r + 1), q, n - r))
            others = [alphas[s].denominator_part() for s in range(n + 1) if s != r]
            rhs_terms.append((1, Prod([a.numerator_part(), cross] + others)))
        lhs = Prod(lhs_parts)
        rhs = Prod([b.denominator_part(), Sum(rhs_terms)])
        L, R = _eval_at([lhs, rhs], order)
        out.append(PairCheck(n, qs_agree(L, R).passed, order))
    return out


# ---------------------------------------------------------------------------
# transformation sequences
# ---------------------------------------------------------------------------

def _attach(seq: IndexedSeq, factor: HyperSum, n_max: int | None) -> Node:
    """``sum_n seq(n) * factor(n)`` with the template's certified tail."""
    t = seq.template
    merged = HyperSum(
        prefactor=list(t.prefactor) + list(factor.prefactor),
        numer=list(t.numer) + list(factor.numer),
        denom=list(t.denom) + list(factor.denom),
        extras=list(t.extras) + list(factor.extras),
        n_start=t.n_start,
        n_max_override=n_max,
    )
    parts: list = [(1, merged)]
    for n, term in sorted(seq.overrides.items()):
        parts.append((1, term * factor.term(n)))
    return Sum(parts) if len(parts) > 1 else merged


def slater_nodes(pair: BaileyPair, y: SignedMonomial, z: SignedMonomial,
                 n_max: int | None = None) -> tuple[Node, Node]:
    """Both sides of the Bailey lemma with the two parameters ``y, z``.

        sum (y, z; q)_n (aq/yz)^n beta_n
          = (aq/y, aq/z; q)_inf / (aq, aq/yz; q)_inf
            * sum (y, z; q)_n / (aq/y, aq/z; q)_n (aq/yz)^n alpha_n
    """
    q, a = pair.base, pair.relative
    w = a * q / (y * z)
    if w.q_exp <= 0:
        raise BadParams(f"aq/(yz) = {w} must have positive valuation for convergence")
    n1 = quad(0, 1, 0)
    left = HyperSum(prefactor=[(w, n1)], numer=[IndexedPoch(y, q, (1, 0)), IndexedPoch(z, q, (1, 0))])
    right = HyperSum(prefactor=[(w, n1)],
                     numer=[IndexedPoch(y, q, (1, 0)), IndexedPoch(z, q, (1, 0))],
                     denom=[IndexedPoch(a * q / y, q, (1, 0)), IndexedPoch(a * q / z, q, (1, 0))])
    lhs = _attach(pair.beta, left, n_max)
    pre = Term(numer=[InfPoch(a * q / y, q), InfPoch(a * q / z, q)],
               denom=[InfPoch(a * q, q), InfPoch(w, q)])
    rhs = Prod([pre, _attach(pair.alpha, right, n_max)])
    return lhs, rhs


def slater_transform_sides(pair: BaileyPair, y: SignedMonomial, z: SignedMonomial,
                           order, n_max: int | None = None) -> tuple[QSeries, QSeries]:
    lhs, rhs = slater_nodes(pair, y, z, n_max)
    L, R = _eval_at([lhs, rhs], Fraction(order))
    return L, R


def seq1aqf_nodes(pair: BaileyPair, sqrt_a: SignedMonomial,
                  n_max: int | None = None) -> tuple[Node, Node]:
    """The limiting form of the Bailey lemma with ``y = q sqrt(a)``, ``z -> inf``
    and ``a = sqrt_a**2`` (the pair must be relative to that ``a``).

        sum (q sqrt(a); q)_n (-sqrt(a))^n q^(n(n-1)/2) beta_n
          = (q sqrt(a); q)_inf / (aq; q)_inf
            * sum (1 - sqrt(a) q^n) (-sqrt(a))^n q^(n(n-1)/2) alpha_n
    """
    q, a = pair.base, pair.relative
    if sqrt_a * sqrt_a != a:
        raise BadParams(f"({sqrt_a})^2 != {a}, the pair's relative parameter")
    n1 = quad(0, 1, 0)
    pre_n = [(-sqrt_a, n1), (q, TRI_M)]
    left = HyperSum(prefactor=pre_n, numer=[IndexedPoch(q * sqrt_a, q, (1, 0))])
    right = HyperSum(prefactor=pre_n, extras=[[(1, ONE, ONE), (-1, sqrt_a, q)]])
    lhs = _attach(pair.beta, left, n_max)
    pre = Term(numer=[InfPoch(q * sqrt_a, q)], denom=[InfPoch(a * q, q)])
    rhs = Prod([pre, _attach(pair.alpha, right, n_max)])
    return lhs, rhs


def seq1aqf_sides(pair: BaileyPair, sqrt_a: SignedMonomial, order,
                  n_max: int | None = None) -> tuple[QSeries, QSeries]:
    lhs, rhs = seq1aqf_nodes(pair, sqrt_a, n_max)
    L, R = _eval_at([lhs, rhs], Fraction(order))
    return L, R

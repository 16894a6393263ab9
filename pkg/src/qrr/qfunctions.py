"""q-Pochhammer symbols, Ramanujan's theta functions, and product identities.

Two layers live here.  The ``*_node`` helpers return lazy nodes used by the
identity builders; the plain functions (``pochhammer``, ``theta_sum``, ...)
evaluate those nodes to a :class:`~qrr.series.QSeries` at a given q-order.

Orders passed to the plain functions are measured in powers of ``q``; the
returned series carries its own scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import InvalidTheta, NonTerminating
from .series import QSeries, SignedMonomial
from .terms import (BilateralSum, InfPoch, Node, Quad, Sum, Term, lcm, poch)

M = SignedMonomial
Z = M.a  # the free symbol, written z in the product identities

Order = Union[int, Fraction]


@dataclass(frozen=True)
class PochSpec:
    """``(base; modulus)_length``; ``length=None`` means the infinite product."""

    base: SignedMonomial
    modulus: SignedMonomial
    length: int | None = None

    def __post_init__(self):
        if self.modulus.a_exp != 0:
            raise ValueError("Pochhammer modulus must be a pure q-power")
        if self.length is None and self.modulus.q_exp <= 0:
            raise NonTerminating(f"(A; {self.modulus})_inf never terminates")
        if self.length is not None and self.length < 0:
            raise ValueError("negative Pochhammer length")

    def factors(self) -> list:
        return poch(self.base, self.modulus, self.length)


@dataclass(frozen=True)
class ThetaSpec:
    """Arguments of ``f(A, B)``; ``A*B`` must be a positive pure q-power."""

    A: SignedMonomial
    B: SignedMonomial

    def __post_init__(self):
        if self.A.a_exp + self.B.a_exp != 0:
            raise InvalidTheta(f"f({self.A}, {self.B}): product is not a pure q-power")
        if self.A.q_exp + self.B.q_exp <= 0:
            raise InvalidTheta(f"f({self.A}, {self.B}): base must have positive valuation")

    @property
    def base(self) -> SignedMonomial:
        return self.A * self.B


def _as_mono(x) -> SignedMonomial:
    if isinstance(x, SignedMonomial):
        return x
    return M.q(Fraction(x))


def _eval(node: Node, order: Order, scale: int | None = None) -> QSeries:
    d = lcm(node.scale(), scale or 1)
    return node.at(order, d)


# ---------------------------------------------------------------------------
# nodes
# ---------------------------------------------------------------------------

def poch_node(*specs: PochSpec) -> Term:
    numer: list = []
    for s in specs:
        numer += s.factors()
    return Term(numer=numer)


def theta_node(A: SignedMonomial, B: SignedMonomial) -> BilateralSum:
    """``f(A, B) = sum_j A^(j(j+1)/2) B^(j(j-1)/2)`` as a bilateral sum."""
    spec = ThetaSpec(A, B)
    pA, pB = spec.A.q_exp, spec.B.q_exp
    exponent = Quad((0), (pA - pB) / 2, (pA + pB) / 2)

    def term(j: int) -> SignedMonomial:
        return A ** (j * (j + 1) // 2) * B ** (j * (j - 1) // 2)

    return BilateralSum(term, exponent)


def theta_prod_node(A: SignedMonomial, B: SignedMonomial) -> Term:
    """``f(A, B) = (-A, -B, AB; AB)_inf`` in product form."""
    spec = ThetaSpec(A, B)
    ab = spec.base
    return Term(numer=[InfPoch(-A, ab), InfPoch(-B, ab), InfPoch(ab, ab)])


def f_node(x: SignedMonomial) -> Term:
    """Ramanujan's ``f(-x) = (x; x)_inf`` (pass ``x`` itself, not ``-x``)."""
    return Term(numer=[InfPoch(x, x)])


def psi_node(x: SignedMonomial) -> Term:
    """``psi(x) = (x^2; x^2)_inf / (x; x^2)_inf``; ``x`` may carry a minus sign."""
    x2 = x * x
    return Term(numer=[InfPoch(x2, x2)], denom=[InfPoch(x, x2)])


def phi_node(x: SignedMonomial) -> Term:
    """``phi(x) = f(x, x) = (-x; x^2)_inf^2 (x^2; x^2)_inf``."""
    x2 = x * x
    return Term(numer=[InfPoch(-x, x2), InfPoch(-x, x2), InfPoch(x2, x2)])


# ---------------------------------------------------------------------------
# evaluated builders
# ---------------------------------------------------------------------------

def pochhammer(spec: PochSpec, order: Order, scale: int | None = None) -> QSeries:
    """Exact truncated ``prod_{k < length} (1 - base * modulus^k)``."""
    return _eval(poch_node(spec), order, scale)


def multi_pochhammer(specs: Sequence[PochSpec], order: Order, scale: int | None = None) -> QSeries:
    if specs:
        lengths = {s.length for s in specs}
        mods = {s.modulus for s in specs}
        if len(lengths) > 1 or len(mods) > 1:
            raise ValueError("multi_pochhammer needs a shared modulus and length")
    return _eval(poch_node(*specs), order, scale)


def theta_sum(spec: ThetaSpec, order: Order, scale: int | None = None) -> QSeries:
    return _eval(theta_node(spec.A, spec.B), order, scale)


def theta_product(spec: ThetaSpec, order: Order, scale: int | None = None) -> QSeries:
    return _eval(theta_prod_node(spec.A, spec.B), order, scale)


def euler_f(s, order: Order) -> QSeries:
    """``f(-q^s) = (q^s; q^s)_inf``."""
    s = Fraction(s)
    if s <= 0:
        raise ValueError("s must be positive")
    return _eval(f_node(M.q(s)), order)


def psi_builder(x, order: Order) -> QSeries:
    """``psi(x)`` for ``x = +-q^s`` (pass a number ``s`` for ``q^s``)."""
    return _eval(psi_node(_as_mono(x)), order)


def phi_builder(x, order: Order) -> QSeries:
    """``phi(x)`` for ``x = +-q^s`` (pass a number ``s`` for ``q^s``)."""
    return _eval(phi_node(_as_mono(x)), order)


# ---------------------------------------------------------------------------
# triple product dissection and quintuple product
# ---------------------------------------------------------------------------

def jtp_dissect_nodes(m: int, q: SignedMonomial = M.q(1), z: SignedMonomial = Z()) -> tuple[Node, Node]:
    """Both sides of the m-dissection of ``(-z, -q/z, q; q)_inf``.

    ``q`` and ``z`` may be replaced by monomials; the identity builders use
    ``q -> q^3``, ``q -> q^4`` and so on.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    lhs = theta_prod_node(z, q / z)
    base = q ** (m * m)
    half = M.q(q.q_exp * Fraction(m * m, 2))
    parts = []
    for r in range(m):
        shift = M.q(q.q_exp * m * (Fraction(r) - Fraction(1, 2)))
        A = half * z ** m * shift
        B = half / (z ** m * shift)
        pre = q ** (r * (r - 1) // 2) * z ** r
        inner = Term(pre, numer=[InfPoch(-A, base), InfPoch(-B, base), InfPoch(base, base)])
        parts.append((1, inner))
    return lhs, Sum(parts)


def jtp_dissect(m: int, order: Order) -> tuple[QSeries, QSeries]:
    lhs, rhs = jtp_dissect_nodes(m)
    d = lcm(lhs.scale(), rhs.scale())
    return lhs.at(order, d), rhs.at(order, d)


def quintuple_nodes(q: SignedMonomial = M.q(1), z: SignedMonomial = Z()) -> tuple[Node, Node, Node]:
    """Sum side, theta combination, and product side of the quintuple product."""
    p = q.q_exp
    expo = Quad(0, p / 2, 3 * p / 2)
    plus = BilateralSum(lambda n: M.q(p * Fraction(3 * n * n + n, 2)) * z ** (3 * n), expo)
    minus = BilateralSum(lambda n: M.q(p * Fraction(3 * n * n + n, 2)) * z ** (-3 * n - 1), expo)
    sum_side = Sum([(1, plus), (-1, minus)])

    q2, q3 = q * q, q * q * q
    z3 = z ** 3
    first = Term(numer=[InfPoch(-(q2 * z3), q3), InfPoch(-(q / z3), q3), InfPoch(q3, q3)])
    second = Term(z.inv(), numer=[InfPoch(-(q2 / z3), q3), InfPoch(-(q * z3), q3), InfPoch(q3, q3)])
    theta_comb = Sum([(1, first), (-1, second)])

    product = Term(numer=[InfPoch(q, q), InfPoch(z * q, q), InfPoch(z.inv(), q),
                          InfPoch(z * z * q, q2), InfPoch(q / (z * z), q2)])
    return sum_side, theta_comb, product


def quintuple(order: Order) -> tuple[QSeries, QSeries, QSeries]:
    nodes = quintuple_nodes()
    d = lcm(*(n.scale() for n in nodes))
    return tuple(n.at(order, d) for n in nodes)  # type: ignore[return-value]

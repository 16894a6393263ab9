"""Lazy series expressions with certified truncation.

Every node knows a lower bound on its q-valuation and its natural scale, and
can produce a :class:`QSeries` at any requested scaled order.  Composite nodes
use the valuation bounds to request exactly enough precision from their
children, so negative exponents (``-1/(q z^2)``-style Pochhammer bases) never
silently erode the certified window.

The workhorse is :class:`Term`::

    coeff * prod(1 - numer_i) * prod(extras_j) / prod(1 - denom_k)

and :class:`HyperSum`, a sum of such terms indexed by ``n`` whose omitted tail
is bounded below by an explicit quadratic in ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .errors import NonTerminating, NotAUnit, TailNotCertified
from .series import QSeries, SignedMonomial, qs_invert, qs_mul

M = SignedMonomial
ONE = M()
Q = M.q


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def _floor_scaled(v: Fraction, d: int) -> int:
    return math.floor(v * d)


class Node:
    """Base class: ``val_lb`` in q-units, ``scale``, and ``series``."""

    def val_lb(self) -> Fraction:
        raise NotImplementedError

    def scale(self) -> int:
        raise NotImplementedError

    def series(self, order_s: int, d: int) -> QSeries:
        """Series at scale ``d`` certified through ``t**order_s``."""
        raise NotImplementedError

    def at(self, order, d: int | None = None) -> QSeries:
        """Evaluate to q-order ``order`` (int or Fraction) at scale ``d``."""
        d = d or self.scale()
        return self.series(_floor_scaled(Fraction(order), d), d)

    # composition sugar
    def __mul__(self, other: "Node") -> "Node":
        return Prod([self, _node(other)])

    def __rmul__(self, other) -> "Node":
        return Prod([_node(other), self])

    def __add__(self, other) -> "Node":
        return Sum([(1, self), (1, _node(other))])

    __radd__ = __add__

    def __sub__(self, other) -> "Node":
        return Sum([(1, self), (-1, _node(other))])

    def __rsub__(self, other) -> "Node":
        return Sum([(1, _node(other)), (-1, self)])

    def __neg__(self) -> "Node":
        return Sum([(-1, self)])


def _node(x) -> Node:
    if isinstance(x, Node):
        return x
    if isinstance(x, int):
        return Term(M(1 if x > 0 else -1), extras=[[(abs(x), M())]]) if x else Term.zero()
    if isinstance(x, SignedMonomial):
        return Term(x)
    raise TypeError(f"cannot lift {type(x).__name__} to a series node")


# ---------------------------------------------------------------------------
# infinite Pochhammer marker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InfPoch:
    """The factor list ``(base; step)_inf`` expanded lazily."""

    base: SignedMonomial
    step: SignedMonomial

    def __post_init__(self):
        if self.step.a_exp != 0 or self.step.q_exp <= 0:
            raise NonTerminating(f"infinite product with step {self.step} never terminates")

    def negative_sum(self) -> Fraction:
        s = Fraction(0)
        j = 0
        while True:
            v = self.base.q_exp + j * self.step.q_exp
            if v >= 0:
                return s
            s += v
            j += 1

    def factors(self, limit: Fraction) -> list[SignedMonomial]:
        out = []
        j = 0
        cur = self.base
        while cur.q_exp <= limit:
            out.append(cur)
            cur = cur * self.step
            j += 1
        return out


def poch(base: SignedMonomial, step: SignedMonomial, n: int | None) -> list:
    """Factor monomials of ``(base; step)_n`` (``n=None`` for infinite)."""
    if n is None:
        return [InfPoch(base, step)]
    if n < 0:
        raise ValueError("negative Pochhammer length")
    out = []
    cur = base
    for _ in range(n):
        out.append(cur)
        cur = cur * step
    return out


def multi(bases: Iterable[SignedMonomial], step: SignedMonomial, n: int | None) -> list:
    out: list = []
    for b in bases:
        out.extend(poch(b, step, n))
    return out


# ---------------------------------------------------------------------------
# Term
# ---------------------------------------------------------------------------

Extra = Sequence[tuple[int, SignedMonomial]]  # sum of c * monomial


def _merge_extra(extra: Extra) -> tuple[tuple[int, SignedMonomial], ...]:
    acc: dict = {}
    for c, m in extra:
        key = (m.a_exp, m.q_exp)
        acc[key] = acc.get(key, 0) + c * m.sign
    return tuple((c, M(1, e, p)) for (e, p), c in sorted(acc.items(), key=lambda kv: (kv[0][1], kv[0][0])) if c)


class Term(Node):
    """``coeff * prod(1 - n) * prod(extra) / prod(1 - d)`` with monomial factors."""

    def __init__(self, coeff: SignedMonomial = ONE, numer: Sequence = (), denom: Sequence = (),
                 extras: Sequence[Extra] = ()):
        self.coeff = coeff
        self.numer = tuple(numer)
        self.denom = tuple(denom)
        self.extras = tuple(_merge_extra(e) for e in extras)
        self._zero = any(not e for e in self.extras) or any(
            (f.base if isinstance(f, InfPoch) else f) == ONE for f in self.numer)

    @classmethod
    def zero(cls) -> "Term":
        return cls(extras=[[]])

    def is_zero(self) -> bool:
        return self._zero

    def __mul__(self, other):
        if isinstance(other, Term):
            return Term(self.coeff * other.coeff, self.numer + other.numer,
                        self.denom + other.denom, self.extras + other.extras)
        if isinstance(other, SignedMonomial):
            return Term(self.coeff * other, self.numer, self.denom, self.extras)
        return Node.__mul__(self, other)

    def numerator_part(self) -> "Term":
        return Term(self.coeff, self.numer, (), self.extras)

    def denominator_part(self) -> "Term":
        """The denominators as a numerator-only term (for cross-multiplying)."""
        return Term(ONE, self.denom)

    def _normalized(self):
        """Move negative-exponent denominators into the coefficient."""
        coeff = self.coeff
        den = []
        for f in self.denom:
            if isinstance(f, InfPoch):
                if f.base.q_exp <= 0:
                    raise NotAUnit(f"infinite denominator {f} has a non-positive base")
                den.append(f)
                continue
            if f.q_exp > 0:
                den.append(f)
            elif f.q_exp < 0:
                # 1/(1 - d) = -d^-1 / (1 - d^-1)
                coeff = coeff * (-f.inv())
                den.append(f.inv())
            else:
                raise NotAUnit(f"denominator factor 1 - ({f}) is not a unit")
        return coeff, den

    def _neg_total(self) -> Fraction:
        s = Fraction(0)
        for f in self.numer:
            if isinstance(f, InfPoch):
                s += f.negative_sum()
            elif f.q_exp < 0:
                s += f.q_exp
        for e in self.extras:
            s += min(m.q_exp for _, m in e)
        return s

    def val_lb(self) -> Fraction:
        if self._zero:
            return Fraction(10 ** 12)
        coeff, _ = self._normalized()
        return coeff.q_exp + self._neg_total()

    def valuation(self) -> Fraction:
        """Exact valuation (factors are monomial binomials over an integral domain)."""
        return self.val_lb()

    def scale(self) -> int:
        ds = [self.coeff.q_exp.denominator]
        for f in self.numer + self.denom:
            if isinstance(f, InfPoch):
                ds += [f.base.q_exp.denominator, f.step.q_exp.denominator]
            else:
                ds.append(f.q_exp.denominator)
        for e in self.extras:
            ds += [m.q_exp.denominator for _, m in e]
        return lcm(*ds)

    def series(self, order_s: int, d: int) -> QSeries:
        if self._zero:
            return QSeries.zero(order_s, d)
        coeff, den = self._normalized()
        v_pre = coeff.scaled_exp(d)
        neg = _floor_scaled(self._neg_total(), d)
        inner = order_s - v_pre  # order needed before the prefactor shift
        work = inner - neg
        if work < 0:
            return QSeries.zero(order_s, d)
        span = Fraction(inner - neg, d)  # factors with larger exponent act as 1
        x = QSeries.one(work, d)
        for e in self.extras:
            x = _mul_poly(x, e, d)
        numer = []
        for f in self.numer:
            if isinstance(f, InfPoch):
                numer.extend(f.factors(span))
            else:
                numer.append(f)
        numer.sort(key=lambda m: m.q_exp)
        for f in numer:
            s = f.scaled_exp(d)
            if s > x.order - x.v_min:
                continue
            x = x.mul_binomial(-f.sign, f.a_exp, s)
        for f in den:
            facs = f.factors(span) if isinstance(f, InfPoch) else [f]
            for g in facs:
                s = g.scaled_exp(d)
                if s > x.order - x.v_min:
                    continue
                x = x.div_binomial(g.sign, g.a_exp, s)
        x = x.scale_by(coeff.sign, coeff.a_exp).shift(v_pre)
        return x.truncate(order_s)

    def __repr__(self) -> str:
        return (f"Term({self.coeff}, numer={len(self.numer)}, denom={len(self.denom)}, "
                f"extras={len(self.extras)})")


def _mul_poly(x: QSeries, extra, d: int) -> QSeries:
    shifts = [(c, m.a_exp, m.scaled_exp(d)) for c, m in extra]
    lo = min(s for _, _, s in shifts)
    order = x.order + lo
    acc = QSeries.zero(order, d)
    for c, e, s in shifts:
        acc = acc + x.scale_by(c, e).shift(s).truncate(order)
    return acc


def factor_product(numer: Sequence = (), denom: Sequence = (), coeff: SignedMonomial = ONE) -> Term:
    return Term(coeff, numer, denom)


# ---------------------------------------------------------------------------
# composite nodes
# ---------------------------------------------------------------------------

class Prod(Node):
    def __init__(self, parts: Sequence[Node]):
        self.parts = [_node(p) for p in parts]

    def val_lb(self) -> Fraction:
        return sum((p.val_lb() for p in self.parts), Fraction(0))

    def scale(self) -> int:
        return lcm(*(p.scale() for p in self.parts))

    def valuation(self) -> Fraction:
        total = Fraction(0)
        for p in self.parts:
            if not hasattr(p, "valuation"):
                raise NotAUnit("inverse needs an exactly known valuation")
            total += p.valuation()
        return total

    def series(self, order_s: int, d: int) -> QSeries:
        vlb = [_floor_scaled(p.val_lb(), d) for p in self.parts]
        total = sum(vlb)
        if total > order_s:
            return QSeries.zero(order_s, d)
        out = None
        for p, v in zip(self.parts, vlb):
            s = p.series(order_s - (total - v), d)
            out = s if out is None else qs_mul(out, s)
        if out is None:
            return QSeries.one(order_s, d)
        if out.order < order_s:
            raise ArithmeticError("product lost precision; valuation bound violated")
        return out.truncate(order_s)


class Sum(Node):
    def __init__(self, parts: Sequence[tuple[int, Node]]):
        self.parts = [(c, _node(p)) for c, p in parts]

    def val_lb(self) -> Fraction:
        return min((p.val_lb() for _, p in self.parts), default=Fraction(10 ** 12))

    def scale(self) -> int:
        return lcm(*(p.scale() for _, p in self.parts))

    def series(self, order_s: int, d: int) -> QSeries:
        out = QSeries.zero(order_s, d)
        for c, p in self.parts:
            out = out + p.series(order_s, d).scale_by(c)
        return out


class Inv(Node):
    """Inverse of a node whose lowest coefficient is ``+-a**e``."""

    def __init__(self, part: Node):
        self.part = _node(part)

    def _v(self) -> Fraction:
        p = self.part
        if hasattr(p, "valuation"):
            return p.valuation()
        raise NotAUnit("inverse needs an exactly known valuation")

    def val_lb(self) -> Fraction:
        return -self._v()

    def scale(self) -> int:
        return self.part.scale()

    def series(self, order_s: int, d: int) -> QSeries:
        v = self._v() * d
        if v.denominator != 1:
            raise ValueError("valuation not representable at this scale")
        x = self.part.series(order_s + 2 * int(v), d)
        y = qs_invert(x)
        if y.order < order_s:
            raise ArithmeticError("inverse lost precision; valuation was not exact")
        return y.truncate(order_s)


class Fixed(Node):
    """A precomputed series (used by tests to inject corrupted builders)."""

    def __init__(self, fn: Callable[[int, int], QSeries], val_lb: Fraction = Fraction(0), scale: int = 1):
        self.fn = fn
        self._v = Fraction(val_lb)
        self._s = scale

    def val_lb(self) -> Fraction:
        return self._v

    def scale(self) -> int:
        return self._s

    def series(self, order_s: int, d: int) -> QSeries:
        return self.fn(order_s, d)


# ---------------------------------------------------------------------------
# hypergeometric-type sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quad:
    """Integer-valued polynomial ``c0 + c1*n + c2*n**2`` (rational coefficients)."""

    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    def __post_init__(self):
        for f in ("c0", "c1", "c2"):
            object.__setattr__(self, f, Fraction(getattr(self, f)))

    def __call__(self, n: int) -> Fraction:
        return self.c0 + self.c1 * n + self.c2 * n * n

    def int_at(self, n: int) -> int:
        v = self(n)
        if v.denominator != 1:
            raise ValueError(f"{self} is not integral at n={n}")
        return int(v)


def quad(c2=0, c1=0, c0=0) -> Quad:
    return Quad(Fraction(c0), Fraction(c1), Fraction(c2))


N1 = quad(0, 1, 0)        # n
NSQ = quad(1, 0, 0)       # n^2
TRI = quad(Fraction(1, 2), Fraction(1, 2))    # n(n+1)/2
TRI_M = quad(Fraction(1, 2), Fraction(-1, 2))  # n(n-1)/2


@dataclass(frozen=True)
class IndexedPoch:
    """``(base * base_step**n ; step)_{alpha*n + beta}``; ``length=None`` is infinite."""

    base: SignedMonomial
    step: SignedMonomial
    length: tuple[int, int] | None
    base_step: SignedMonomial = ONE

    def __post_init__(self):
        if self.step.a_exp != 0 and self.length is None:
            raise NonTerminating("infinite product step must be a pure q-power")
        if self.step.q_exp <= 0 and self.length is None:
            raise NonTerminating(f"infinite product with step {self.step} never terminates")
        if self.base_step.q_exp < 0:
            raise ValueError("base may only grow with n")

    def factors(self, n: int) -> list:
        b = self.base * self.base_step ** n
        if self.length is None:
            return poch(b, self.step, None)
        L = self.length[0] * n + self.length[1]
        return poch(b, self.step, L)

    def numer_lower_bound(self) -> Fraction:
        """Lower bound of the valuation of the factor product, for every n."""
        if self.step.q_exp <= 0:
            raise TailNotCertified("finite Pochhammer step must have positive valuation for tail bounds")
        return InfPoch(self.base, self.step).negative_sum()

    def denoms(self) -> list[int]:
        return [self.base.q_exp.denominator, self.step.q_exp.denominator,
                self.base_step.q_exp.denominator]


@dataclass
class HyperSum(Node):
    """``sum_{n >= n_start} prod(pre_i ** k_i(n)) * extras * numer / denom``.

    ``prefactor`` is a list of (monomial, Quad).  Each extra is a list of
    ``(c, m0, m1)`` meaning ``c * m0 * m1**n``.  The tail bound is
    ``val(n) >= P(n) + C`` with ``P`` the prefactor exponent and ``C`` collecting
    the most negative contributions of numerators and extras.
    """

    prefactor: Sequence[tuple[SignedMonomial, Quad]] = ()
    numer: Sequence[IndexedPoch] = ()
    denom: Sequence[IndexedPoch] = ()
    extras: Sequence[Sequence[tuple[int, SignedMonomial, SignedMonomial]]] = ()
    n_start: int = 0
    n_stop: int | None = None
    n_max_override: int | None = None
    last_n_max: int | None = field(default=None, init=False, repr=False, compare=False)

    def term(self, n: int) -> Term:
        coeff = ONE
        for m, k in self.prefactor:
            coeff = coeff * m ** k.int_at(n)
        numer: list = []
        for p in self.numer:
            numer += p.factors(n)
        denom: list = []
        for p in self.denom:
            denom += p.factors(n)
        extras = [[(c, m0 * m1 ** n) for c, m0, m1 in e] for e in self.extras]
        return Term(coeff, numer, denom, extras)

    def _poly(self) -> Quad:
        c0 = c1 = c2 = Fraction(0)
        for m, k in self.prefactor:
            c0 += m.q_exp * k.c0
            c1 += m.q_exp * k.c1
            c2 += m.q_exp * k.c2
        return Quad(c0, c1, c2)

    def _bound(self) -> tuple[Quad, Fraction]:
        """``val(term(n)) >= P(n) + C`` for every ``n >= n_start``.

        An extra ``sum c*m0*m1**n`` is bounded by ``min m0 + n * min m1``.
        """
        P = self._poly()
        c = sum((p.numer_lower_bound() for p in self.numer), Fraction(0))
        lin = Fraction(0)
        for e in self.extras:
            c += min(m0.q_exp for _, m0, _ in e)
            lin += min(m1.q_exp for _, _, m1 in e)
        return Quad(P.c0, P.c1 + lin, P.c2), c

    def n_max(self, order_q: Fraction) -> int:
        """Largest index that can contribute through ``q**order_q``."""
        if self.n_stop is not None:
            return self.n_stop
        P, C = self._bound()
        if P.c2 < 0 or (P.c2 == 0 and P.c1 <= 0):
            raise TailNotCertified(f"summand valuation bound {P} does not grow")
        vertex = -P.c1 / (2 * P.c2) if P.c2 else Fraction(self.n_start)
        n = max(self.n_start, math.ceil(vertex))
        while P(n) + C <= order_q:
            n += 1
        cert = n - 1
        if self.n_max_override is not None:
            if self.n_max_override < cert:
                raise TailNotCertified(
                    f"n_max={self.n_max_override} too small; order {order_q} needs {cert}")
            cert = self.n_max_override
        return cert

    def val_lb(self) -> Fraction:
        P, C = self._bound()
        if self.n_stop is not None:
            return min((self.term(n).val_lb() for n in range(self.n_start, self.n_stop + 1)),
                       default=Fraction(10 ** 12))
        # exact on the head, bound on the tail
        vertex = -P.c1 / (2 * P.c2) if P.c2 else Fraction(self.n_start)
        hi = max(self.n_start, math.ceil(vertex)) + 1
        head = [self.term(n).val_lb() for n in range(self.n_start, hi + 1)]
        return min(head + [P(hi + 1) + C])

    def scale(self) -> int:
        ds = []
        P = self._poly()
        period = 2 * lcm(P.c0.denominator, P.c1.denominator, P.c2.denominator)
        for n in range(self.n_start, self.n_start + period):
            ds.append(P(n).denominator)
        for p in list(self.numer) + list(self.denom):
            ds += p.denoms()
        for e in self.extras:
            for _, m0, m1 in e:
                ds += [m0.q_exp.denominator, m1.q_exp.denominator]
        return lcm(*ds)

    def series(self, order_s: int, d: int) -> QSeries:
        order_q = Fraction(order_s, d)
        top = self.n_max(order_q)
        self.last_n_max = top
        out = QSeries.zero(order_s, d)
        for n in range(self.n_start, top + 1):
            t = self.term(n)
            if t.is_zero() or t.val_lb() > order_q:
                continue
            out = out + t.series(order_s, d)
        return out


# ---------------------------------------------------------------------------
# theta sums
# ---------------------------------------------------------------------------

class BilateralSum(Node):
    """``sum_{j in Z} coeff(j)`` where the j-th term is ``sign(j) a**(e1*j) q**Q(j)``.

    ``Q`` has positive leading coefficient, so the window of contributing ``j``
    is a finite interval found from the vertex outward (convexity makes the
    stopping rule exact).
    """

    def __init__(self, term_fn: Callable[[int], SignedMonomial], exponent: Quad):
        if exponent.c2 <= 0:
            raise ValueError("bilateral exponent must have positive leading coefficient")
        self.term_fn = term_fn
        self.exponent = exponent

    def _vertex(self) -> int:
        return math.floor(-self.exponent.c1 / (2 * self.exponent.c2))

    def window(self, order_q: Fraction) -> range:
        E = self.exponent
        v = self._vertex()
        lo, hi = v, v + 1
        while E(lo) <= order_q:
            lo -= 1
        while E(hi) <= order_q:
            hi += 1
        return range(lo + 1, hi)

    def val_lb(self) -> Fraction:
        v = self._vertex()
        return min(self.exponent(v), self.exponent(v + 1))

    def valuation(self) -> Fraction:
        E = self.exponent
        level = self.val_lb()
        for _ in range(64):
            acc: dict = {}
            for j in self.window(level):
                if E(j) == level:
                    m = self.term_fn(j)
                    acc[m.a_exp] = acc.get(m.a_exp, 0) + m.sign
            if any(acc.values()):
                return level
            nxt = min(E(j) for j in self.window(level + 10 ** 6) if E(j) > level)
            level = nxt
        raise ArithmeticError("could not isolate leading term of bilateral sum")

    def scale(self) -> int:
        E = self.exponent
        period = 2 * lcm(E.c0.denominator, E.c1.denominator, E.c2.denominator)
        return lcm(*(E(j).denominator for j in range(period)))

    def series(self, order_s: int, d: int) -> QSeries:
        terms: dict = {}
        for j in self.window(Fraction(order_s, d)):
            m = self.term_fn(j)
            v = m.scaled_exp(d)
            c = terms.setdefault(v, {})
            c[m.a_exp] = c.get(m.a_exp, 0) + m.sign
        return QSeries.from_dict(terms, order_s, d)

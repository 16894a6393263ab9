"""Exact truncated series over Laurent polynomials in one symbol ``a``.

A :class:`QSeries` lives in the variable ``t = q**(1/scale)`` and stores a
dense window of coefficients for scaled exponents ``v_min .. order``.  Each
coefficient is a :class:`LaurentPoly` in ``a`` with Python integer
coefficients, so nothing here ever touches floating point.

Kernels work on plain ``dict`` coefficients (exponent -> int) for speed; the
public types wrap them without copying and are never mutated afterwards.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import AExponentOverflow, EmptyOverlap, NotAUnit, OutOfRange

__all__ = [
    "LaurentPoly",
    "SignedMonomial",
    "QSeries",
    "CycloSeries",
    "AgreementReport",
    "A_EXPONENT_CAP_FACTOR",
    "cyclotomic_poly",
    "qs_add",
    "qs_mul",
    "qs_invert",
    "qs_substitute_a",
    "qs_cyclotomic_reduce",
    "qs_agree",
    "qs_coefficient",
]

# |a-exponent| allowed in any coefficient is FACTOR * order + SLACK.
A_EXPONENT_CAP_FACTOR = 4
A_EXPONENT_CAP_SLACK = 16


# ---------------------------------------------------------------------------
# dict kernels
# ---------------------------------------------------------------------------

def _padd_into(acc: dict, p: Mapping[int, int], c: int = 1, shift: int = 0) -> None:
    for e, v in p.items():
        e += shift
        s = acc.get(e, 0) + c * v
        if s:
            acc[e] = s
        else:
            acc.pop(e, None)


def _pmul(p: Mapping[int, int], r: Mapping[int, int]) -> dict:
    if not p or not r:
        return {}
    if len(p) == 1:
        (e0, c0), = p.items()
        return {e0 + e: c0 * c for e, c in r.items()}
    if len(r) == 1:
        (e0, c0), = r.items()
        return {e0 + e: c0 * c for e, c in p.items()}
    acc: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in r.items():
            k = e1 + e2
            acc[k] = acc.get(k, 0) + c1 * c2
    return {e: c for e, c in acc.items() if c}


def _strip(coeffs: list, v_min: int) -> tuple[list, int]:
    i = 0
    while i < len(coeffs) and not coeffs[i]:
        i += 1
    return coeffs[i:], v_min + i


# ---------------------------------------------------------------------------
# LaurentPoly
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Sparse Laurent polynomial ``sum c_e a**e`` with integer coefficients."""

    __slots__ = ("_t",)

    def __init__(self, terms: Union[Mapping[int, int], int, None] = None):
        if terms is None:
            self._t = {}
        elif isinstance(terms, int):
            self._t = {0: terms} if terms else {}
        else:
            self._t = {int(e): int(c) for e, c in terms.items() if c}

    @classmethod
    def _wrap(cls, d: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._t = d
        return obj

    @classmethod
    def monomial(cls, c: int = 1, e: int = 0) -> "LaurentPoly":
        return cls._wrap({e: c} if c else {})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_unit(self) -> bool:
        """True for ``+-a**e``, the only units of Z[a, 1/a]."""
        return len(self._t) == 1 and abs(next(iter(self._t.values()))) == 1

    def exponents(self) -> list[int]:
        return sorted(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        return hash(frozenset(self._t.items()))

    def __add__(self, other) -> "LaurentPoly":
        other = _as_lp(other)
        acc = dict(self._t)
        _padd_into(acc, other._t)
        return LaurentPoly._wrap(acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({e: -c for e, c in self._t.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_as_lp(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _as_lp(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        return LaurentPoly._wrap(_pmul(self._t, _as_lp(other)._t))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit():
                raise NotAUnit(f"{self} is not invertible")
            (e, c), = self._t.items()
            return LaurentPoly._wrap({e * n: c ** (-n)})
        out = LaurentPoly(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, e: int) -> "LaurentPoly":
        """Multiply by ``a**e``."""
        return LaurentPoly._wrap({k + e: c for k, c in self._t.items()})

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Replace ``a`` by ``a**k``."""
        acc: dict = {}
        for e, c in self._t.items():
            acc[e * k] = acc.get(e * k, 0) + c
        return LaurentPoly._wrap({e: c for e, c in acc.items() if c})

    def max_abs_exponent(self) -> int:
        return max((abs(e) for e in self._t), default=0)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.format()})"

    def format(self, symbol: str = "a") -> str:
        if not self._t:
            return "0"
        parts = []
        for e in sorted(self._t):
            parts.append(_format_term(self._t[e], symbol, e, first=not parts))
        return "".join(parts)


def _as_lp(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly(x)
    if isinstance(x, Mapping):
        return LaurentPoly(x)
    raise TypeError(f"cannot use {type(x).__name__} as a LaurentPoly")


def _format_term(c: int, sym: str, e, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    if e == 0:
        body = str(mag)
    else:
        pw = sym if e == 1 else f"{sym}^{e}" if not isinstance(e, Fraction) or e.denominator == 1 else f"{sym}^({e})"
        body = pw if mag == 1 else f"{mag}*{pw}"
    if first:
        return sign + body
    return f" {sign} {body}"


# ---------------------------------------------------------------------------
# SignedMonomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedMonomial:
    """``sign * a**a_exp * q**q_exp`` with ``q_exp`` rational."""

    sign: int = 1
    a_exp: int = 0
    q_exp: Fraction = Fraction(0)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "a_exp", int(self.a_exp))
        object.__setattr__(self, "q_exp", Fraction(self.q_exp))

    @classmethod
    def q(cls, p=1, sign: int = 1) -> "SignedMonomial":
        return cls(sign, 0, Fraction(p))

    @classmethod
    def a(cls, e: int = 1, p=0, sign: int = 1) -> "SignedMonomial":
        return cls(sign, e, Fraction(p))

    @property
    def is_pure_q(self) -> bool:
        return self.a_exp == 0

    def __mul__(self, other: "SignedMonomial") -> "SignedMonomial":
        return SignedMonomial(self.sign * other.sign, self.a_exp + other.a_exp,
                              self.q_exp + other.q_exp)

    def __truediv__(self, other: "SignedMonomial") -> "SignedMonomial":
        return self * other.inv()

    def __neg__(self) -> "SignedMonomial":
        return SignedMonomial(-self.sign, self.a_exp, self.q_exp)

    def __pow__(self, k: int) -> "SignedMonomial":
        k = int(k)
        return SignedMonomial(self.sign ** (k % 2), self.a_exp * k, self.q_exp * k)

    def inv(self) -> "SignedMonomial":
        return SignedMonomial(self.sign, -self.a_exp, -self.q_exp)

    def subs(self, value: "SignedMonomial") -> "SignedMonomial":
        """Replace the symbol ``a`` by the monomial ``value``."""
        return SignedMonomial(self.sign * value.sign ** (self.a_exp % 2),
                              value.a_exp * self.a_exp,
                              self.q_exp + self.a_exp * value.q_exp)

    def scaled_exp(self, scale: int) -> int:
        v = self.q_exp * scale
        if v.denominator != 1:
            raise ValueError(f"q-exponent {self.q_exp} not representable at scale {scale}")
        return int(v)

    def __str__(self) -> str:
        parts = []
        if self.a_exp:
            parts.append("a" if self.a_exp == 1 else f"a^{self.a_exp}")
        if self.q_exp:
            p = self.q_exp
            parts.append("q" if p == 1 else f"q^{p.numerator}" if p.denominator == 1
                         else f"q^{p.numerator}/{p.denominator}")
        body = "*".join(parts) if parts else "1"
        return ("-" if self.sign < 0 else "") + body


# ---------------------------------------------------------------------------
# QSeries
# ---------------------------------------------------------------------------

CoeffLike = Union[LaurentPoly, int, Mapping[int, int]]


def _raw(c: CoeffLike) -> dict:
    if isinstance(c, LaurentPoly):
        return c._t
    if isinstance(c, int):
        return {0: c} if c else {}
    return {int(e): int(v) for e, v in c.items() if v}


class QSeries:
    """Truncated series ``sum_{v_min <= v <= order} c_v t**v + O(t**(order+1))``.

    ``t = q**(1/scale)``.  Leading zero coefficients are stripped, so
    ``v_min`` is the true valuation of the known part (or ``order + 1`` when
    the known part vanishes).
    """

    __slots__ = ("scale", "v_min", "order", "_c")

    def __init__(self, coeffs: Sequence[CoeffLike] = (), v_min: int = 0,
                 order: int | None = None, scale: int = 1):
        if scale < 1:
            raise ValueError("scale must be a positive integer")
        raw = [_raw(c) for c in coeffs]
        if order is None:
            order = v_min + len(raw) - 1
        keep = max(0, order - v_min + 1)
        raw = raw[:keep]
        raw += [{}] * (keep - len(raw))
        self._set(raw, v_min, order, scale)

    def _set(self, raw: list, v_min: int, order: int, scale: int) -> None:
        raw, v_min = _strip(raw, v_min)
        if not raw:
            v_min = order + 1
        self.scale = scale
        self.v_min = v_min
        self.order = order
        self._c = raw

    @classmethod
    def _make(cls, raw: list, v_min: int, order: int, scale: int) -> "QSeries":
        obj = cls.__new__(cls)
        keep = max(0, order - v_min + 1)
        if len(raw) > keep:
            raw = raw[:keep]
        elif len(raw) < keep:
            raw = raw + [{}] * (keep - len(raw))
        obj._set(raw, v_min, order, scale)
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, order: int, scale: int = 1) -> "QSeries":
        return cls._make([], order + 1, order, scale)

    @classmethod
    def one(cls, order: int, scale: int = 1) -> "QSeries":
        return cls.monomial(1, 0, 0, order, scale)

    @classmethod
    def monomial(cls, c: int, a_exp: int, v: int, order: int, scale: int = 1) -> "QSeries":
        """``c * a**a_exp * t**v`` truncated at ``order``."""
        if v > order:
            return cls.zero(order, scale)
        return cls._make([{a_exp: c}], v, order, scale)

    @classmethod
    def from_dict(cls, terms: Mapping[int, CoeffLike], order: int, scale: int = 1) -> "QSeries":
        """Build from ``{scaled exponent: coefficient}``; terms above ``order`` are dropped."""
        keys = [k for k in terms if k <= order]
        if not keys:
            return cls.zero(order, scale)
        lo = min(keys)
        raw = [{} for _ in range(order - lo + 1)]
        for k in keys:
            raw[k - lo] = dict(_raw(terms[k]))
        return cls._make(raw, lo, order, scale)

    @classmethod
    def from_monomial(cls, m: SignedMonomial, order: int, scale: int) -> "QSeries":
        return cls.monomial(m.sign, m.a_exp, m.scaled_exp(scale), order, scale)

    # -- accessors ----------------------------------------------------------
    @property
    def coeffs(self) -> tuple[LaurentPoly, ...]:
        return tuple(LaurentPoly._wrap(c) for c in self._c)

    @property
    def q_order(self) -> Fraction:
        """Truncation order measured in powers of ``q``."""
        return Fraction(self.order, self.scale)

    def is_known_zero(self) -> bool:
        return not self._c

    def coefficient(self, k: int) -> LaurentPoly:
        """Exact coefficient of ``t**k``; ``OutOfRange`` past the guaranteed window."""
        if k > self.order:
            raise OutOfRange(f"exponent {k} beyond truncation order {self.order}")
        if k < self.v_min:
            return LaurentPoly()
        return LaurentPoly._wrap(self._c[k - self.v_min])

    def _raw_at(self, k: int) -> dict:
        i = k - self.v_min
        if 0 <= i < len(self._c):
            return self._c[i]
        return {}

    def items(self) -> Iterable[tuple[int, LaurentPoly]]:
        for i, c in enumerate(self._c):
            if c:
                yield self.v_min + i, LaurentPoly._wrap(c)

    def max_abs_a_exponent(self) -> int:
        return max((abs(e) for c in self._c for e in c), default=0)

    def integer_coefficients(self, start: int = 0) -> list[int]:
        """Coefficients of ``t**start .. t**order`` when every one is a plain integer."""
        out = []
        for k in range(start, self.order + 1):
            c = self._raw_at(k)
            if any(e != 0 for e in c):
                raise ValueError(f"coefficient of t^{k} depends on a: {LaurentPoly._wrap(c)}")
            out.append(c.get(0, 0))
        return out

    # -- structural ops -----------------------------------------------------
    def truncate(self, order: int) -> "QSeries":
        if order >= self.order:
            return self
        return QSeries._make(self._c, self.v_min, order, self.scale)

    def rescale(self, scale: int) -> "QSeries":
        """Re-express in ``q**(1/scale)``; ``scale`` must be a multiple of the current one."""
        if scale == self.scale:
            return self
        if scale % self.scale:
            raise ValueError(f"cannot rescale from {self.scale} to {scale}")
        f = scale // self.scale
        order = self.order * f + (f - 1)
        raw: list = [{} for _ in range(len(self._c) * f)]
        for i, c in enumerate(self._c):
            raw[i * f] = c
        return QSeries._make(raw, self.v_min * f, order, scale)

    def shift(self, v: int) -> "QSeries":
        """Multiply by ``t**v`` (order shifts too)."""
        return QSeries._make(self._c, self.v_min + v, self.order + v, self.scale)

    def scale_by(self, c: int, a_exp: int = 0) -> "QSeries":
        """Multiply by the constant monomial ``c * a**a_exp``."""
        if c == 0:
            return QSeries.zero(self.order, self.scale)
        raw = [{e + a_exp: c * x for e, x in d.items()} for d in self._c]
        return QSeries._make(raw, self.v_min, self.order, self.scale)

    def times_monomial(self, m: SignedMonomial) -> "QSeries":
        s = _common_scale(self.scale, m.q_exp.denominator)
        x = self.rescale(s)
        return x.scale_by(m.sign, m.a_exp).shift(m.scaled_exp(s))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "QSeries":
        return qs_add(self, _coerce(other, self))

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return self.scale_by(-1)

    def __sub__(self, other) -> "QSeries":
        return qs_add(self, -_coerce(other, self))

    def __rsub__(self, other) -> "QSeries":
        return qs_add(_coerce(other, self), -self)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, int):
            return self.scale_by(other)
        if isinstance(other, LaurentPoly):
            raw = [_pmul(d, other._t) for d in self._c]
            return QSeries._make(raw, self.v_min, self.order, self.scale)
        return qs_mul(self, other)

    __rmul__ = __mul__

    def invert(self) -> "QSeries":
        return qs_invert(self)

    def mul_binomial(self, c: int, a_exp: int, s: int) -> "QSeries":
        """Multiply by ``1 + c*a**a_exp*t**s`` (an exact binomial).

        A negative ``s`` lowers the guaranteed order by ``|s|``.
        """
        if c == 0:
            return self
        order = self.order + min(0, s)
        lo = min(self.v_min, self.v_min + s)
        n = order - lo + 1
        if n <= 0:
            return QSeries.zero(order, self.scale)
        raw = [None] * n
        base = self.v_min - lo
        for i, d in enumerate(self._c):
            j = base + i
            if j < n:
                raw[j] = dict(d)
        sbase = self.v_min + s - lo
        for i, d in enumerate(self._c):
            if not d:
                continue
            j = sbase + i
            if j >= n:
                break
            if j < 0:
                continue
            tgt = raw[j]
            if tgt is None:
                raw[j] = {e + a_exp: c * x for e, x in d.items()}
            else:
                _padd_into(tgt, d, c, a_exp)
        raw = [r if r is not None else {} for r in raw]
        return QSeries._make(raw, lo, order, self.scale)

    def div_binomial(self, c: int, a_exp: int, s: int) -> "QSeries":
        """Divide by ``1 - c*a**a_exp*t**s`` for ``s > 0`` (order preserved)."""
        if s <= 0:
            raise NotAUnit("binomial with non-positive exponent has no unit constant term")
        if not self._c:
            return self
        raw = [dict(d) for d in self._c]
        for i in range(s, len(raw)):
            prev = raw[i - s]
            if prev:
                _padd_into(raw[i], prev, c, a_exp)
        return QSeries._make(raw, self.v_min, self.order, self.scale)

    # -- conversions --------------------------------------------------------
    def substitute_a(self, m: SignedMonomial, a_span: int | None = None) -> "QSeries":
        return qs_substitute_a(self, m, a_span)

    def cyclotomic_reduce(self, n: int) -> "CycloSeries":
        return qs_cyclotomic_reduce(self, n)

    def agree(self, other: "QSeries") -> "AgreementReport":
        return qs_agree(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.scale, self.v_min, self.order, self._c) == (
            other.scale, other.v_min, other.order, other._c)

    def __hash__(self):
        return hash((self.scale, self.v_min, self.order, len(self._c)))

    def __repr__(self) -> str:
        return f"QSeries({self.format()}, scale={self.scale})"

    def format(self, var: str = "q", symbol: str = "a", show_order: bool = True) -> str:
        """Deterministic text rendering in increasing exponent order."""
        pieces: list[str] = []
        for v, c in self.items():
            pw = Fraction(v, self.scale)
            pieces.extend(_render_term(c, pw, var, symbol, first=not pieces))
        text = "".join(pieces) if pieces else "0"
        if show_order:
            text += f" + O({_render_power(var, Fraction(self.order + 1, self.scale))})"
        return text

    def to_json(self) -> dict:
        return {
            "scale": self.scale,
            "v_min": self.v_min,
            "order": self.order,
            "terms": [
                {"exp": v, "coeff": [[e, c._t[e]] for e in sorted(c._t)]}
                for v, c in self.items()
            ],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _render_power(var: str, p: Fraction) -> str:
    if p == 0:
        return "1"
    if p == 1:
        return var
    if p.denominator == 1:
        return f"{var}^{p.numerator}"
    return f"{var}^({p.numerator}/{p.denominator})"


def _render_term(c: LaurentPoly, pw: Fraction, var: str, sym: str, first: bool) -> list[str]:
    t = c._t
    if len(t) == 1:
        (e, k), = t.items()
        sign = "-" if k < 0 else "+"
        mag = abs(k)
        factors = []
        if mag != 1 or (e == 0 and pw == 0):
            factors.append(str(mag))
        if e:
            factors.append(sym if e == 1 else f"{sym}^{e}")
        if pw:
            factors.append(_render_power(var, pw))
        body = "*".join(factors)
        if first:
            return [("-" if k < 0 else "") + body]
        return [f" {sign} {body}"]
    body = f"({c.format(sym)})"
    if pw:
        body += "*" + _render_power(var, pw)
    return [body if first else f" + {body}"]


def _common_scale(*ds: int) -> int:
    out = 1
    for d in ds:
        out = out * d // math.gcd(out, d)
    return out


def _coerce(x, like: QSeries) -> QSeries:
    if isinstance(x, QSeries):
        return x
    if isinstance(x, (int, LaurentPoly)):
        return _const_series(x, like)
    raise TypeError(f"cannot combine QSeries with {type(x).__name__}")


def _const_series(c, like: QSeries) -> QSeries:
    # a constant is exact; give it the order of its partner
    d = _raw(c)
    order = max(like.order, 0)
    return QSeries._make([dict(d)], 0, order, like.scale)


def _align(x: QSeries, y: QSeries) -> tuple[QSeries, QSeries]:
    s = _common_scale(x.scale, y.scale)
    return x.rescale(s), y.rescale(s)


def _check_cap(x: QSeries) -> QSeries:
    cap = A_EXPONENT_CAP_FACTOR * max(x.order, 0) + A_EXPONENT_CAP_SLACK
    m = x.max_abs_a_exponent()
    if m > cap:
        raise AExponentOverflow(
            f"|a-exponent| {m} exceeds cap {cap} at order {x.order}; likely a builder bug")
    return x


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def qs_add(x: QSeries, y: QSeries) -> QSeries:
    """Coefficientwise sum at the lcm scale; order is the smaller of the two."""
    x, y = _align(x, y)
    order = min(x.order, y.order)
    lo = min(x.v_min, y.v_min)
    if lo > order:
        return QSeries.zero(order, x.scale)
    n = order - lo + 1
    raw = [{} for _ in range(n)]
    for src in (x, y):
        off = src.v_min - lo
        for i, d in enumerate(src._c):
            j = off + i
            if j >= n:
                break
            if d:
                if raw[j]:
                    _padd_into(raw[j], d)
                else:
                    raw[j] = dict(d)
    return QSeries._make(raw, lo, order, x.scale)


def qs_mul(x: QSeries, y: QSeries) -> QSeries:
    """Truncated Cauchy product.

    ``order = min(order(x) + v_min(y), order(y) + v_min(x))`` and
    ``v_min = v_min(x) + v_min(y)``.
    """
    x, y = _align(x, y)
    order = min(x.order + y.v_min, y.order + x.v_min)
    lo = x.v_min + y.v_min
    n = order - lo + 1
    if n <= 0 or not x._c or not y._c:
        return QSeries.zero(order, x.scale)
    acc = [None] * n
    yc = y._c
    for i, ci in enumerate(x._c):
        if i >= n:
            break
        if not ci:
            continue
        lim = min(len(yc), n - i)
        single = len(ci) == 1
        if single:
            (e1, c1), = ci.items()
        for j in range(lim):
            cj = yc[j]
            if not cj:
                continue
            k = i + j
            tgt = acc[k]
            if tgt is None:
                tgt = acc[k] = {}
            if single:
                for e2, c2 in cj.items():
                    e = e1 + e2
                    tgt[e] = tgt.get(e, 0) + c1 * c2
            else:
                for e1_, c1_ in ci.items():
                    for e2, c2 in cj.items():
                        e = e1_ + e2
                        tgt[e] = tgt.get(e, 0) + c1_ * c2
    raw = [{e: c for e, c in d.items() if c} if d else {} for d in acc]
    return _check_cap(QSeries._make(raw, lo, order, x.scale))


def qs_invert(x: QSeries) -> QSeries:
    """Multiplicative inverse of a series whose lowest coefficient is ``+-a**e``.

    ``v_min(y) = -v_min(x)`` and ``order(y) = order(x) - 2*v_min(x)``.
    """
    if not x._c:
        raise NotAUnit("series has no known nonzero coefficient")
    lead = x._c[0]
    if not (len(lead) == 1 and abs(next(iter(lead.values()))) == 1):
        raise NotAUnit(f"lowest coefficient {LaurentPoly._wrap(lead)} is not +-a^e")
    (le, lc), = lead.items()
    v = x.v_min
    order = x.order - 2 * v
    n = order + v + 1  # number of coefficients from -v .. order
    if n <= 0:
        return QSeries.zero(order, x.scale)
    xc = x._c
    y: list = [None] * n
    y[0] = {-le: lc}
    for k in range(1, n):
        acc: dict = {}
        for i in range(1, min(k, len(xc) - 1) + 1):
            xi = xc[i]
            yk = y[k - i]
            if not xi or not yk:
                continue
            for e1, c1 in xi.items():
                for e2, c2 in yk.items():
                    e = e1 + e2
                    acc[e] = acc.get(e, 0) + c1 * c2
        # y_k = -lead^{-1} * acc
        y[k] = {e - le: -lc * c for e, c in acc.items() if c}
    return _check_cap(QSeries._make(y, -v, order, x.scale))


def qs_substitute_a(x: QSeries, m: SignedMonomial, a_span: int | None = None) -> QSeries:
    """Replace ``a`` by the monomial ``m`` and merge into the q-expansion.

    With ``m.q_exp == 0`` the order is preserved.  Otherwise unseen terms of
    ``x`` above its order may drop into the window: those carrying a-exponents
    of sign opposite to ``m.q_exp``.  ``a_span`` bounds ``|a-exponent|`` of the
    unseen tail (default: the largest present); the order is lowered by
    ``a_span * |m.q_exp|`` accordingly.
    """
    d = _common_scale(x.scale, m.q_exp.denominator)
    x = x.rescale(d)
    p = m.scaled_exp(d)
    if p == 0:
        reduction = 0
    else:
        if a_span is None:
            exps = [e for c in x._c for e in c]
            if p > 0:
                a_span = max([-e for e in exps if e < 0], default=0)
            else:
                a_span = max([e for e in exps if e > 0], default=0)
        reduction = a_span * abs(p)
    order = x.order - reduction
    acc: dict = {}
    for v, c in x.items():
        for e, k in c._t.items():
            vv = v + e * p
            if vv > order:
                continue
            sign = m.sign ** (e % 2)
            tgt = acc.setdefault(vv, {})
            ee = e * m.a_exp
            s = tgt.get(ee, 0) + sign * k
            if s:
                tgt[ee] = s
            else:
                tgt.pop(ee, None)
    return QSeries.from_dict(acc, order, d)


def qs_agree(x: QSeries, y: QSeries) -> "AgreementReport":
    """Compare up to the common guaranteed order."""
    x, y = _align(x, y)
    order = min(x.order, y.order)
    lo = min(x.v_min, y.v_min)
    if order < lo and (x._c or y._c):
        raise EmptyOverlap("no common guaranteed range")
    for k in range(lo, order + 1):
        a, b = x._raw_at(k), y._raw_at(k)
        if a != b:
            return AgreementReport(False, order, x.scale, k,
                                   LaurentPoly._wrap(a), LaurentPoly._wrap(b))
    return AgreementReport(True, order, x.scale)


def qs_coefficient(x: QSeries, k: int) -> LaurentPoly:
    return x.coefficient(k)


@dataclass(frozen=True)
class AgreementReport:
    """Outcome of comparing two truncated series."""

    passed: bool
    order: int
    scale: int
    first_mismatch: int | None = None
    left: object = None
    right: object = None

    @property
    def q_order(self) -> Fraction:
        return Fraction(self.order, self.scale)

    def __bool__(self) -> bool:
        return self.passed

    def describe(self) -> str:
        if self.passed:
            return f"agree through t^{self.order} (scale {self.scale})"
        return (f"differ at t^{self.first_mismatch} (scale {self.scale}): "
                f"{_fmt_coeff(self.left)} vs {_fmt_coeff(self.right)}")


def _fmt_coeff(c) -> str:
    if isinstance(c, LaurentPoly):
        return c.format()
    if isinstance(c, tuple):
        return "[" + ", ".join(map(str, c)) + "]"
    return str(c)


# ---------------------------------------------------------------------------
# cyclotomic reduction
# ---------------------------------------------------------------------------

_CYCLO_CACHE: dict[int, tuple[int, ...]] = {}


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # ascending coefficient lists, den monic
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j, b in enumerate(den):
                num[i - dd + j] -= c * b
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _poly_divexact(p, list(cyclotomic_poly(d)))
    _CYCLO_CACHE[n] = tuple(p)
    return _CYCLO_CACHE[n]


def _cyclo_residue(c: Mapping[int, int], n: int) -> tuple[int, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    vec = [0] * max(n, 1)
    for e, k in c.items():
        vec[e % n] += k
    for i in range(len(vec) - 1, deg - 1, -1):
        k = vec[i]
        if k:
            vec[i] = 0
            for j in range(deg):
                vec[i - deg + j] -= k * phi[j]
    return tuple(vec[:deg])


def _cyclo_mul(u: Sequence[int], w: Sequence[int], n: int) -> tuple[int, ...]:
    prod: dict = {}
    for i, x in enumerate(u):
        if x:
            for j, y in enumerate(w):
                if y:
                    prod[i + j] = prod.get(i + j, 0) + x * y
    return _cyclo_residue(prod, n)


class CycloSeries:
    """Truncated series whose coefficients live in Z[a]/(Phi_n(a))."""

    __slots__ = ("n", "scale", "v_min", "order", "coeffs")

    def __init__(self, n: int, coeffs: Sequence[Sequence[int]], v_min: int, order: int,
                 scale: int = 1):
        width = len(cyclotomic_poly(n)) - 1
        cs = [tuple(int(x) for x in c) for c in coeffs]
        for c in cs:
            if len(c) != width:
                raise ValueError(f"coefficient length {len(c)} != phi({n}) = {width}")
        keep = max(0, order - v_min + 1)
        cs = cs[:keep] + [(0,) * width] * (keep - len(cs))
        i = 0
        while i < len(cs) and not any(cs[i]):
            i += 1
        self.n = n
        self.scale = scale
        self.order = order
        self.v_min = v_min + i if i < len(cs) else order + 1
        self.coeffs = tuple(cs[i:])

    @property
    def width(self) -> int:
        return len(cyclotomic_poly(self.n)) - 1

    def coefficient(self, k: int) -> tuple[int, ...]:
        if k > self.order:
            raise OutOfRange(f"exponent {k} beyond truncation order {self.order}")
        i = k - self.v_min
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return (0,) * self.width

    def rescale(self, scale: int) -> "CycloSeries":
        if scale == self.scale:
            return self
        if scale % self.scale:
            raise ValueError(f"cannot rescale from {self.scale} to {scale}")
        f = scale // self.scale
        z = (0,) * self.width
        cs = []
        for c in self.coeffs:
            cs.append(c)
            cs.extend([z] * (f - 1))
        return CycloSeries(self.n, cs, self.v_min * f, self.order * f + f - 1, scale)

    def _aligned(self, other: "CycloSeries"):
        if other.n != self.n:
            raise ValueError("cyclotomic orders differ")
        s = _common_scale(self.scale, other.scale)
        return self.rescale(s), other.rescale(s)

    def __add__(self, other: "CycloSeries") -> "CycloSeries":
        x, y = self._aligned(other)
        order = min(x.order, y.order)
        lo = min(x.v_min, y.v_min)
        cs = [tuple(a + b for a, b in zip(x.coefficient(k), y.coefficient(k)))
              for k in range(lo, order + 1)]
        return CycloSeries(x.n, cs, lo, order, x.scale)

    def __mul__(self, other: "CycloSeries") -> "CycloSeries":
        x, y = self._aligned(other)
        order = min(x.order + y.v_min, y.order + x.v_min)
        lo = x.v_min + y.v_min
        cs = []
        for k in range(lo, order + 1):
            acc = [0] * x.width
            for i in range(x.v_min, k - y.v_min + 1):
                if i > x.order:
                    break
                p = _cyclo_mul(x.coefficient(i), y.coefficient(k - i), x.n)
                acc = [u + w for u, w in zip(acc, p)]
            cs.append(tuple(acc))
        return CycloSeries(x.n, cs, lo, order, x.scale)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycloSeries):
            return NotImplemented
        return (self.n, self.scale, self.v_min, self.order, self.coeffs) == (
            other.n, other.scale, other.v_min, other.order, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.scale, self.v_min, self.order, self.coeffs))

    def agree(self, other: "CycloSeries") -> AgreementReport:
        x, y = self._aligned(other)
        order = min(x.order, y.order)
        lo = min(x.v_min, y.v_min)
        for k in range(lo, order + 1):
            a, b = x.coefficient(k), y.coefficient(k)
            if a != b:
                return AgreementReport(False, order, x.scale, k, a, b)
        return AgreementReport(True, order, x.scale)

    def __repr__(self) -> str:
        body = ", ".join(f"t^{self.v_min + i}:{c}" for i, c in enumerate(self.coeffs) if any(c))
        return f"CycloSeries(n={self.n}, {{{body}}}, order={self.order}, scale={self.scale})"


def qs_cyclotomic_reduce(x: QSeries, n: int) -> CycloSeries:
    """Reduce every coefficient modulo the n-th cyclotomic polynomial in ``a``.

    Negative powers are first rewritten through ``a**n == 1``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    cs = [_cyclo_residue(c, n) for c in x._c]
    v_min = x.v_min if x._c else x.order + 1
    return CycloSeries(n, cs, v_min, x.order, x.scale)

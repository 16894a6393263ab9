"""The eight partition counting functions and their generating functions.

Each counting function is a :class:`ConstraintProfile`: residue-class rules
(which classes may appear, which must be distinct), an optional staircase
rule (a progression of multiples of ``k`` that must appear gap-free up to its
largest member), and bound rules comparing the largest part of a class with
that largest staircase member ``L``.

When no staircase member occurs, ``L`` is taken to be 0 in every bound.  The
one extra requirement needed to match the generating functions is that the
G-side staircase be nonempty.

Counting is brute force: every multiset of allowed parts of weight at most
``n_max`` is generated once and filtered by the full predicate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadParams
from .identities import check_kr
from .series import qs_agree

THEOREMS = ("AB", "CD", "EF", "GH")
SERIES_TAG = {"AB": "R1RK1", "CD": "R2RK1", "EF": "R3RK1", "GH": "RR22RK2"}



@dataclass(frozen=True)
class ClassRule:
    """Parts ``p`` with ``p % modulus in residues``; ``distinct`` forbids repeats."""

    modulus: int
    residues: frozenset
    distinct: bool
    forbid: frozenset = frozenset()    # individual parts that may not occur
    require: frozenset = frozenset()   # individual parts that must occur

    def contains(self, p: int) -> bool:
        return p % self.modulus in self.residues


@dataclass(frozen=True)
class StaircaseRule:
    """Multiples ``k*j`` with ``j`` of the given parity, from the smallest up to
    the largest occurring one, must all occur."""

    k: int
    odd: bool
    nonempty: bool = False

    def member(self, p: int) -> bool:
        return p % self.k == 0 and (p // self.k) % 2 == (1 if self.odd else 0)

    @property
    def first(self) -> int:
        return self.k if self.odd else 2 * self.k


@dataclass(frozen=True)
class BoundRule:
    """``max(class) < factor*L + offset`` (``strict``) or ``<=``; vacuous if the class is empty."""

    modulus: int
    residues: frozenset
    factor: Fraction
    offset: Fraction
    strict: bool

    def ok(self, largest: int, L: int) -> bool:
        lim = self.factor * L + self.offset
        return largest < lim if self.strict else largest <= lim


@dataclass(frozen=True)
class ConstraintProfile:
    tag: str
    k: int
    r: int
    classes: tuple[ClassRule, ...]
    staircase: StaircaseRule | None = None
    bounds: tuple[BoundRule, ...] = ()
    notes: tuple[str, ...] = ()

    def allowed(self, p: int) -> ClassRule | None:
        for c in self.classes:
            if c.contains(p):
                return c
        return None

    def parts(self, n_max: int) -> list[tuple[int, bool]]:
        """Allowed parts up to ``n_max`` with their distinctness flag."""
        out = []
        for p in range(1, n_max + 1):
            c = self.allowed(p)
            if c is not None and p not in c.forbid:
                out.append((p, c.distinct))
        return out

    def accepts(self, parts: Sequence[int]) -> bool:
        """Single pass over the parts in ascending order."""
        seen = set()
        largest: dict = {}
        stair = set()
        prev = None
        for p in parts:
            c = self.allowed(p)
            if c is None or p in c.forbid:
                return False
            if c.distinct and p == prev:
                return False
            prev = p
            seen.add(p)
            if self.staircase and self.staircase.member(p):
                stair.add(p)
            for i, b in enumerate(self.bounds):
                if p % b.modulus in b.residues:
                    largest[i] = p
        for c in self.classes:
            if not c.require <= seen:
                return False
        L = 0
        if self.staircase:
            s = self.staircase
            L = max(stair, default=0)
            if s.nonempty and not stair:
                return False
            if L and any(j not in stair for j in range(s.first, L + 1, 2 * s.k)):
                return False
        return all(b.ok(largest[i], L) for i, b in enumerate(self.bounds) if i in largest)


def _fs(*xs: int) -> frozenset:
    return frozenset(xs)


def profile(tag: str, k: int, r: int) -> ConstraintProfile:
    check_kr(k, r)
    F = Fraction
    if tag == "A":
        return ConstraintProfile("A", k, r, (
            ClassRule(k, _fs(r), True), ClassRule(k, _fs(k - r), True), ClassRule(k, _fs(0), False)),
            StaircaseRule(k, odd=True),
            (BoundRule(2 * k, _fs(0), F(1), F(k), False),
             BoundRule(k, _fs(r), F(1, 2), F(0), True),
             BoundRule(k, _fs(k - r), F(1, 2), F(k, 2), True)))
    if tag == "B":
        return ConstraintProfile("B", k, r, (
            ClassRule(3 * k, _fs(k + r, 2 * k - r), True), ClassRule(3 * k, _fs(k, 2 * k), False)))
    if tag == "C":
        return ConstraintProfile("C", k, r, (
            ClassRule(2 * k, _fs(k + r), True), ClassRule(2 * k, _fs(k - r), True),
            ClassRule(4 * k, _fs(0, k, 3 * k), False)),
            StaircaseRule(k, odd=True),
            (BoundRule(4 * k, _fs(0), F(2), F(2 * k), False),
             BoundRule(2 * k, _fs(k + r), F(1), F(k), True),
             BoundRule(2 * k, _fs(k - r), F(1), F(0), True)))
    if tag == "D":
        return ConstraintProfile("D", k, r, (
            ClassRule(4 * k, _fs(2 * k + r, 2 * k - r), True), ClassRule(2 * k, _fs(k), False)))
    if tag == "E":
        return ConstraintProfile("E", k, r, (
            ClassRule(k, _fs(r), True), ClassRule(k, _fs(k - r), True), ClassRule(k, _fs(0), False)),
            StaircaseRule(k, odd=False),
            (BoundRule(2 * k, _fs(k), F(1), F(k), False),
             BoundRule(k, _fs(r), F(1, 2), F(k, 2), True),
             BoundRule(k, _fs(k - r), F(1, 2), F(0), True)),
            ("with no even multiple of k present, L = 0: the parts r and k, k, ... remain allowed",))
    if tag == "F":
        return ConstraintProfile("F", k, r, (
            ClassRule(3 * k, _fs(r, 3 * k - r), True), ClassRule(3 * k, _fs(k, 2 * k), False)))
    if tag == "G":
        return ConstraintProfile("G", k, r, (
            ClassRule(2 * k, _fs(k + r), True), ClassRule(2 * k, _fs(k - r), True),
            ClassRule(4 * k, _fs(0, k, 3 * k), False)),
            StaircaseRule(k, odd=True, nonempty=True),
            (BoundRule(4 * k, _fs(0), F(2), F(0), True),
             BoundRule(2 * k, _fs(k + r), F(1), F(0), True),
             BoundRule(2 * k, _fs(k - r), F(1), F(-2 * k), True)),
            ("the staircase must be nonempty (G(0) = 0, matching the leading q^k)",))
    if tag == "H":
        return ConstraintProfile("H", k, r, (
            ClassRule(4 * k, _fs(r, 4 * k - r), True, forbid=_fs(r)),
            ClassRule(2 * k, _fs(k), False, require=_fs(k))))
    raise BadParams(f"unknown profile {tag!r}")


def sides(theorem: str) -> tuple[str, str]:
    if theorem not in THEOREMS:
        raise BadParams(f"unknown theorem {theorem!r}; expected one of {', '.join(THEOREMS)}")
    return theorem[0], theorem[1]


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _multisets(parts: list[tuple[int, bool]], n_max: int):
    """Yield every multiset (ascending tuple) of the given parts with weight <= n_max."""
    stack: list[int] = []

    def rec(i: int, room: int):
        yield tuple(stack)
        for j in range(i, len(parts)):
            p, distinct = parts[j]
            if p > room:
                break
            stack.append(p)
            yield from rec(j + 1 if distinct else j, room - p)
            stack.pop()

    yield from rec(0, n_max)


def enumerate_counts(prof: ConstraintProfile, n_max: int) -> list[int]:
    """Counts for every weight ``0..n_max`` (parts ascending, full predicate)."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    out = [0] * (n_max + 1)
    for ms in _multisets(prof.parts(n_max), n_max):
        if prof.accepts(ms):
            out[sum(ms)] += 1
    return out


def enumerate_count(prof: ConstraintProfile, n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return enumerate_counts(prof, n)[n]


def enumerate_counts_by_class(prof: ConstraintProfile, n_max: int) -> list[int]:
    """Second strategy for profiles without staircase or bounds: enumerate each
    residue class separately, then combine the per-class tallies."""
    if prof.staircase is not None or prof.bounds:
        raise ValueError("class-by-class counting only applies to unbounded profiles")
    total = [1] + [0] * n_max
    for c in prof.classes:
        parts = [(p, c.distinct) for p in range(1, n_max + 1) if c.contains(p) and p not in c.forbid]
        tally = [0] * (n_max + 1)
        for ms in _multisets(parts, n_max):
            if c.require <= set(ms):
                tally[sum(ms)] += 1
        total = [sum(total[i] * tally[n - i] for i in range(n + 1)) for n in range(n_max + 1)]
    return total


def staircase(k: int, n: int, odd: bool) -> list[int]:
    """``k, 3k, ..., (2n-1)k`` (odd) or ``2k, 4k, ..., 2nk`` (even)."""
    return [k * (2 * j + (1 if odd else 2)) for j in range(n)]


# ---------------------------------------------------------------------------
# generating functions and the triple check
# ---------------------------------------------------------------------------

def gf_counts(theorem: str, k: int, r: int, N: int) -> list[int]:
    """Coefficients of ``q^0..q^N`` of the theorem's series; both sides are
    expanded and must agree."""
    from .catalog import IdentityParams, build_sides

    sides(theorem)
    check_kr(k, r)
    lhs, rhs = build_sides(SERIES_TAG[theorem], IdentityParams(k=k, r=r), N)
    rep = qs_agree(lhs, rhs)
    if not rep.passed:
        raise ArithmeticError(f"{SERIES_TAG[theorem]} sides disagree: {rep.describe()}")
    return lhs.integer_coefficients()[: N + 1]


@dataclass(frozen=True)
class PartitionRow:
    n: int
    left: int
    right: int
    gf: int

    @property
    def equal(self) -> bool:
        return self.left == self.right == self.gf


@dataclass
class PartitionReport:
    theorem: str
    k: int
    r: int
    n_max: int
    rows: list[PartitionRow] = field(default_factory=list)
    zero_row: PartitionRow | None = None
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.equal for r in self.rows)

    def mismatches(self) -> list[PartitionRow]:
        return [r for r in self.rows if not r.equal]

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem, "k": self.k, "r": self.r, "n_max": self.n_max,
            "pass": self.passed,
            "rows": [{"n": r.n, "left_count": r.left, "right_count": r.right, "gf_count": r.gf,
                      "equal": r.equal} for r in self.rows],
            "n0": None if self.zero_row is None else {
                "left_count": self.zero_row.left, "right_count": self.zero_row.right,
                "gf_count": self.zero_row.gf, "equal": self.zero_row.equal},
            "notes": list(self.notes),
        }


def check_partition_theorem(theorem: str, k: int, r: int, n_max: int) -> PartitionReport:
    """Left enumeration, right enumeration and GF coefficient for ``1 <= n <= n_max``;
    ``n = 0`` is reported separately."""
    lt, rt = sides(theorem)
    check_kr(k, r)
    if n_max < 0:
        raise BadParams("n_max must be nonnegative")
    lp, rp = profile(lt, k, r), profile(rt, k, r)
    left = enumerate_counts(lp, n_max)
    right = enumerate_counts(rp, n_max)
    gf = gf_counts(theorem, k, r, n_max)
    rows = [PartitionRow(n, left[n], right[n], gf[n]) for n in range(1, n_max + 1)]
    return PartitionReport(theorem, k, r, n_max, rows, PartitionRow(0, left[0], right[0], gf[0]),
                           lp.notes + rp.notes)


def all_grids() -> Iterable[tuple[int, int]]:
    return ((3, 1), (4, 1), (5, 1), (5, 2), (7, 2), (7, 3))

"""Registry of every identity with a uniform verification interface.

Entries are looked up by tag (``"R1"``, ``"TGEN5"``, ...).  ``verify`` builds
both sides at a common scale, compares them exactly over the certified
window, and returns a :class:`VerificationReport`.  Special-case rows
(``TableRow``) pin the free parameter to a monomial or a root of unity; roots
of unity are handled by reducing both sides modulo a cyclotomic polynomial.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import identities
from .errors import BadParams
from .identities import Ctx
from .series import AgreementReport, QSeries, SignedMonomial, qs_agree, qs_cyclotomic_reduce
from .terms import lcm

M = SignedMonomial

SYMBOLIC_ORDER = 60
MONOMIAL_ORDER = 120


def default_order(symbolic: bool = True) -> int:
    """The default q-order; ``QRR_DEFAULT_ORDER`` overrides both defaults."""
    env = os.environ.get("QRR_DEFAULT_ORDER")
    if env:
        try:
            v = int(env)
        except ValueError:
            raise BadParams(f"QRR_DEFAULT_ORDER must be an integer, got {env!r}") from None
        if v < 0:
            raise BadParams("QRR_DEFAULT_ORDER must be nonnegative")
        return v
    return SYMBOLIC_ORDER if symbolic else MONOMIAL_ORDER


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AMode:
    """How the free parameter is fixed: left symbolic, a monomial, or a root of unity.

    ``cyclotomic(n, power)`` stands for ``exp(2 pi i power / n)``: the sides are
    built with ``a -> a**power`` and reduced modulo ``Phi_n(a)``.
    """

    kind: str = "symbolic"
    value: SignedMonomial | None = None
    n: int | None = None
    power: int | None = None

    @classmethod
    def symbolic(cls) -> "AMode":
        return cls()

    @classmethod
    def monomial(cls, m: SignedMonomial) -> "AMode":
        return cls("monomial", value=m)

    @classmethod
    def cyclotomic(cls, n: int, power: int = 1) -> "AMode":
        if n < 1 or not (0 < power < n) or _gcd(power, n) != 1:
            raise BadParams(f"cyclotomic({n}, {power}) is not a primitive root of unity")
        return cls("cyclotomic", n=n, power=power)

    def symbol_value(self) -> SignedMonomial:
        if self.kind == "monomial":
            return self.value
        if self.kind == "cyclotomic":
            return M.a(self.power)
        return M.a(1)

    def label(self) -> str:
        if self.kind == "monomial":
            return str(self.value)
        if self.kind == "cyclotomic":
            return ROOT_NAMES.get((self.n, self.power), f"exp(2pi i*{self.power}/{self.n})")
        return "symbolic"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


ROOT_NAMES = {(4, 1): "i", (4, 3): "-i", (3, 1): "w3", (3, 2): "w3^2", (6, 1): "w6", (6, 5): "-w3"}


@dataclass(frozen=True)
class IdentityParams:
    m: int | None = None
    x_sub: SignedMonomial = M.q(1)
    a_mode: AMode = AMode()
    k: int | None = None
    r: int | None = None
    n_max_override: int | None = None
    aux: tuple = ()  # (name, SignedMonomial) pairs, e.g. (("c", q),)

    def describe(self) -> dict:
        out: dict = {"x": str(self.x_sub), "a": self.a_mode.label()}
        for f in ("m", "k", "r", "n_max_override"):
            v = getattr(self, f)
            if v is not None:
                out[f] = v
        if self.aux:
            out["aux"] = {k: str(v) for k, v in self.aux}
        return out

    def with_(self, **kw) -> "IdentityParams":
        from dataclasses import replace

        return replace(self, **kw)


@dataclass(frozen=True)
class IdentityEntry:
    tag: str
    title: str
    schema: tuple[str, ...]
    defaults: IdentityParams
    has_symbol: bool = True

    @property
    def kind(self) -> str:
        return "identity"


@dataclass(frozen=True)
class TableRow:
    table: int | str  # 1, 2, 3 or "post"
    row: int
    tag: str
    a_mode: AMode
    x_sub: SignedMonomial

    @property
    def kind(self) -> str:
        return "table_row"

    @property
    def label(self) -> str:
        t = f"T{self.table}" if isinstance(self.table, int) else self.table
        return f"{t}.{self.row}"

    def params(self) -> IdentityParams:
        return IdentityParams(x_sub=self.x_sub, a_mode=self.a_mode)


@dataclass(frozen=True)
class VerificationReport:
    tag: str
    params: dict
    order_certified: int
    scale: int
    passed: bool
    millis: float
    discrepancy: dict | None = None
    label: str | None = None
    note: str = ""
    checks: tuple = ()

    def to_json(self) -> dict:
        d = {"tag": self.tag, "params": self.params, "order_certified": self.order_certified,
             "scale": self.scale, "pass": self.passed, "millis": round(self.millis, 1)}
        if self.label:
            d["label"] = self.label
        if self.discrepancy:
            d["discrepancy"] = self.discrepancy
        if self.note:
            d["note"] = self.note
        return d

    def line(self) -> str:
        head = f"{self.label or self.tag:14s} {'PASS' if self.passed else 'FAIL'}"
        q_order = Fraction(self.order_certified, self.scale)
        body = f" through q^{q_order} (t^{self.order_certified}, scale {self.scale})"
        if self.discrepancy:
            d = self.discrepancy
            body += f"; first mismatch at t^{d['exponent']} [{d['check']}]: {d['lhs']} vs {d['rhs']}"
        return head + body + f"  [{self.millis:.0f} ms]"


# ---------------------------------------------------------------------------
# the registry
# ---------------------------------------------------------------------------

_Q = M.q(1)
_SYM = ("x", "a")

_ENTRIES: tuple[IdentityEntry, ...] = (
    IdentityEntry("R1", "first lost-notebook identity, f(ax^3, x^3/a)/f(-x^2)", _SYM, IdentityParams()),
    IdentityEntry("R2", "second lost-notebook identity, f(ax^2, x^2/a)/psi(-x)", _SYM, IdentityParams()),
    IdentityEntry("R1_PARTNER", "partner of R1, f(a, x^6/a)/f(-x^2)", _SYM, IdentityParams()),
    IdentityEntry("RR22P", "partner of R2, (1+a) sum = f(a, x^4/a)/psi(-x)", _SYM, IdentityParams()),
    IdentityEntry("R1_PARTNER_SS", "f(a, x^2/a)/phi(-x)", _SYM, IdentityParams()),
    IdentityEntry("FT_A", "false theta family, sum (-1)^n x^(n^2+n)(a^-n + a^(n+1))", _SYM, IdentityParams()),
    IdentityEntry("FT_B", "false theta family, 1 + (a-1) sum = sum x^(n^2)(-1)^n(a^n + ...)", _SYM,
                  IdentityParams()),
    IdentityEntry("RR_2VAR", "two-variable Rogers-Ramanujan generalization", _SYM, IdentityParams()),
    IdentityEntry("RR_FIRST", "first Rogers-Ramanujan identity", ("x",), IdentityParams(), False),
    IdentityEntry("RR_SECOND", "second Rogers-Ramanujan identity", ("x",), IdentityParams(), False),
    IdentityEntry("AQB", "q-analog of Bailey's 2F1(1/2) sum (b symbolic, c = q by default)",
                  ("x", "a", "b", "c"), IdentityParams()),
    IdentityEntry("AQG", "q-analog of Gauss's 2F1(1/2) sum (a symbolic, b = -q by default)",
                  ("x", "a", "b"), IdentityParams()),
    IdentityEntry("R2EQ2B", "three-way identity from the limiting Bailey lemma with ABBP", _SYM,
                  IdentityParams()),
    IdentityEntry("RR2CEQ2C", "limiting Bailey lemma with NewBP, a -> a/x", _SYM, IdentityParams()),
    IdentityEntry("TGEN1", "m-dissection family built on R1", ("x", "a", "m"), IdentityParams(m=2)),
    IdentityEntry("TGEN2", "m-dissection family built on R1_PARTNER", ("x", "a", "m"), IdentityParams(m=2)),
    IdentityEntry("TGEN3", "m-dissection family built on R2", ("x", "a", "m"), IdentityParams(m=2)),
    IdentityEntry("TGEN4", "m-dissection family built on R1_PARTNER_SS", ("x", "a", "m"), IdentityParams(m=2)),
    IdentityEntry("TGEN5", "m-dissection family built on RR22P", ("x", "a", "m"), IdentityParams(m=2)),
    IdentityEntry("T2GEN", "quintuple-product consequence of R1 (cross-multiplied by 1-z-1/z)", _SYM,
                  IdentityParams()),
    IdentityEntry("T3GEN", "quintuple-product consequence of R1_PARTNER", _SYM, IdentityParams()),
    IdentityEntry("R1RK1", "A(n)=B(n) series: R1 at x=q^(k/2), a=q^(r-k/2)", ("k", "r"),
                  IdentityParams(k=3, r=1), False),
    IdentityEntry("R2RK1", "C(n)=D(n) series: R2 at x=q^k, a=q^r", ("k", "r"), IdentityParams(k=3, r=1), False),
    IdentityEntry("R3RK1", "E(n)=F(n) series: R1_PARTNER at x=q^(k/2), a=q^r", ("k", "r"),
                  IdentityParams(k=3, r=1), False),
    IdentityEntry("RR22RK2", "G(n)=H(n) series: RR22P over (1+a) at x=q^k, a=q^r", ("k", "r"),
                  IdentityParams(k=3, r=1), False),
    IdentityEntry("REMARK_SECOND", "the remark's displayed identity (TGEN5 at m = 2)", ("x", "a"),
                  IdentityParams(m=2)),
)

_BY_TAG = {e.tag: e for e in _ENTRIES}
TAGS: tuple[str, ...] = tuple(e.tag for e in _ENTRIES)
ALIASES = {"REMARK_SECOND": ("TGEN5", 2)}

_h = Fraction(1, 2)
_AM, _AC = AMode.monomial, AMode.cyclotomic

TABLE_ROWS: tuple[TableRow, ...] = tuple(
    TableRow(t, i + 1, tag, a, x) for t, tag, rows in (
        (1, "R1", [(_AC(4, 1), M.q(_h)), (_AM(M(-1)), _Q), (_AC(3, 1), _Q), (_AM(_Q), _Q),
                   (_AM(-M.q(_h)), M.q(3 * _h)), (_AM(-_Q), M.q(2))]),
        (2, "R2", [(_AM(M(-1)), _Q), (_AC(3, 1), _Q), (_AC(6, 1), _Q), (_AM(M.q(_h)), M.q(2)),
                   (_AM(-_Q), M.q(3))]),
        (3, "R1_PARTNER", [(_AM(M(-1)), M.q(_h)), (_AC(6, 5), M.q(_h)), (_AC(4, 3), M.q(_h)),
                           (_AM(_Q), _Q), (_AM(-_Q), M.q(3 * _h)), (_AM(-M.q(2)), M.q(3 * _h)),
                           (_AM(_Q), M.q(2)), (_AM(-_Q), M.q(2))]),
    ) for i, (a, x) in enumerate(rows))

POST_TABLE_ROWS: tuple[TableRow, ...] = (
    TableRow("post", 1, "R1_PARTNER_SS", _AM(_Q), M.q(2)),
    TableRow("post", 2, "FT_A", _AM(_Q), M.q(2)),
)


def catalog_list() -> list:
    """All identity entries followed by all table rows, in declaration order."""
    return list(_ENTRIES) + list(TABLE_ROWS)


def entry(tag: str) -> IdentityEntry:
    try:
        return _BY_TAG[tag]
    except KeyError:
        raise BadParams(f"unknown identity tag {tag!r}") from None


def table_row(table: int, row: int) -> TableRow:
    for t in TABLE_ROWS:
        if t.table == table and t.row == row:
            return t
    raise BadParams(f"no row {row} in table {table}")


# ---------------------------------------------------------------------------
# building and verifying
# ---------------------------------------------------------------------------

def _ctx(tag: str, p: IdentityParams) -> Ctx:
    e = entry(tag)
    x = p.x_sub
    if x.sign != 1 or x.a_exp != 0 or x.q_exp <= 0:
        raise BadParams(f"x must be a positive power of q, got {x}")
    if p.a_mode.kind != "symbolic" and not e.has_symbol:
        raise BadParams(f"{tag} has no free parameter to specialize")
    m = p.m if p.m is not None else (e.defaults.m or 1)
    if m < 1:
        raise BadParams("m must be a positive integer")
    k = p.k if p.k is not None else (e.defaults.k or 0)
    r = p.r if p.r is not None else (e.defaults.r or 0)
    if "k" in e.schema:
        identities.check_kr(k, r)
    aux = dict(p.aux)
    unknown = set(aux) - set(e.schema)
    if unknown:
        raise BadParams(f"{tag} does not take parameter(s) {sorted(unknown)}")
    return Ctx(x, p.a_mode.symbol_value(), m=m, k=k, r=r, aux=aux, n_max=p.n_max_override)


def build_nodes(tag: str, p: IdentityParams | None = None) -> identities.Sides:
    p = p or entry(tag).defaults
    return identities.BUILDERS[tag](_ctx(tag, p))


def _series(nodes: Sequence, order) -> list[QSeries]:
    d = lcm(*(n.scale() for n in nodes))
    return [n.at(Fraction(order), d) for n in nodes]


def build_sides(tag: str, p: IdentityParams | None = None, N=None) -> tuple[QSeries, QSeries]:
    """Both sides expanded through ``q**N`` at a common scale.

    Roots of unity (``a_mode`` cyclotomic) are *not* reduced here; the series
    carry ``a**power`` and :func:`verify` reduces them.
    """
    p = p or entry(tag).defaults
    if N is None:
        N = default_order(p.a_mode.kind != "monomial")
    s = build_nodes(tag, p)
    lhs, rhs = _series([s.lhs, s.rhs], N)
    return lhs, rhs


def _compare(series: list, a_mode: AMode, names: list[str]):
    if a_mode.kind == "cyclotomic":
        series = [qs_cyclotomic_reduce(x, a_mode.n) for x in series]
    reports: list[tuple[str, AgreementReport]] = []
    for name, other in zip(names[1:], series[1:]):
        rep = series[0].agree(other) if hasattr(series[0], "agree") else qs_agree(series[0], other)
        reports.append((name, rep))
    return reports


def _fmt(c) -> str:
    if isinstance(c, tuple):
        return "[" + ", ".join(map(str, c)) + "]"
    if hasattr(c, "format"):
        return c.format()
    return str(c)


def verify(tag: str, p: IdentityParams | None = None, N=None, label: str | None = None) -> VerificationReport:
    t0 = time.perf_counter()
    p = p or entry(tag).defaults
    if N is None:
        N = default_order(p.a_mode.kind != "monomial")
    if N < 0:
        raise BadParams("order must be nonnegative")
    s = build_nodes(tag, p)
    nodes = [s.lhs, s.rhs] + list(s.middle.values())
    names = ["lhs", "rhs"] + list(s.middle)
    series = _series(nodes, N)
    reports = _compare(series, p.a_mode, names)
    passed = all(r.passed for _, r in reports)
    order = min(r.order for _, r in reports)
    scale = reports[0][1].scale
    disc = None
    for name, r in reports:
        if not r.passed:
            disc = {"check": f"lhs vs {name}", "exponent": r.first_mismatch,
                    "q_exponent": str(Fraction(r.first_mismatch, r.scale)),
                    "lhs": _fmt(r.left), "rhs": _fmt(r.right)}
            break
    ms = (time.perf_counter() - t0) * 1000
    return VerificationReport(tag, p.describe(), order, scale, passed, ms, disc, label, s.note,
                              tuple(n for n, _ in reports))


def verify_table_row(table, row: int, N=None) -> VerificationReport:
    t = table_row(table, row) if table != "post" else POST_TABLE_ROWS[row - 1]
    return verify_row(t, N)


def verify_row(t: TableRow, N=None) -> VerificationReport:
    return verify(t.tag, t.params(), N, label=t.label)


# ---------------------------------------------------------------------------
# auxiliary-parameter grids
# ---------------------------------------------------------------------------

GRID = (M.q(1), -M.q(1), M.q(2), -M.q(2), M.q(3))


def aux_grid() -> list[tuple[str, IdentityParams]]:
    """AQB and AQG with one parameter symbolic and the other on the grid,
    plus both-monomial combinations (the free symbol is then fixed too)."""
    out = []
    for g in GRID:
        out.append(("AQB", IdentityParams(aux=(("c", g),))))
        out.append(("AQB", IdentityParams(aux=(("b", g),))))
        out.append(("AQG", IdentityParams(aux=(("b", g),))))
    for b in GRID:
        for c in GRID:
            out.append(("AQB", IdentityParams(aux=(("b", b), ("c", c)))))
    for b in GRID:
        for a in GRID:
            out.append(("AQG", IdentityParams(a_mode=AMode.monomial(a), aux=(("b", b),))))
    return out


# ---------------------------------------------------------------------------
# batch runs
# ---------------------------------------------------------------------------

@dataclass
class Summary:
    reports: list[VerificationReport] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.reports)

    @property
    def failed(self) -> int:
        return len(self.reports) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list[VerificationReport]:
        return [r for r in self.reports if not r.passed]


def _job(spec):
    kind, arg, N = spec
    if kind == "tag":
        return verify(arg, None, N)
    if kind == "row":
        return verify_row(arg, N)
    tag, p = arg
    return verify(tag, p, N)


def plan(N=None, include_post=True, include_grid=False) -> list:
    jobs: list = [("tag", e.tag, N) for e in _ENTRIES]
    rows = list(TABLE_ROWS) + (list(POST_TABLE_ROWS) if include_post else [])
    jobs += [("row", t, N) for t in rows]
    if include_grid:
        jobs += [("grid", g, N) for g in aux_grid()]
    return jobs


def run_jobs(jobs: Iterable, n_jobs: int = 1) -> Summary:
    jobs = list(jobs)
    if n_jobs <= 1 or len(jobs) <= 1:
        return Summary([_job(j) for j in jobs])
    with ProcessPoolExecutor(max_workers=n_jobs) as ex:
        # map preserves submission order regardless of completion order
        return Summary(list(ex.map(_job, jobs)))


def verify_all(N=None, jobs: int = 1, include_post: bool = True, include_grid: bool = False) -> Summary:
    """Every tag at its defaults, then every table row (and the two post-table
    specializations); reports come back in declaration order."""
    return run_jobs(plan(N, include_post, include_grid), jobs)

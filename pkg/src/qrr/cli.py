"""Command-line front end: ``qrr expand | verify | partitions | catalog``.

Exit codes: 0 everything passed, 1 a mathematical mismatch, 2 a usage or
parameter error.
"""

from __future__ import annotations

import argparse
import io
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import catalog, partitions
from .catalog import AMode, IdentityParams
from .errors import QSeriesError
from .qfunctions import (PochSpec, ThetaSpec, euler_f, phi_builder, pochhammer, psi_builder,
                         theta_sum)
from .series import QSeries, SignedMonomial

M = SignedMonomial
SCHEMA = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# value grammar
# ---------------------------------------------------------------------------

ROOTS = {"i": (4, 1), "-i": (4, 3), "w3": (3, 1), "w6": (6, 1), "-w3": (6, 5)}
_FACTOR = re.compile(r"^(a|q)(?:\^(?:\{([^}]*)\}|\(([^)]*)\)|(-?\d+(?:/\d+)?)))?$")


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s.replace(" ", ""))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad exponent {s!r}") from None


def parse_monomial(text: str) -> SignedMonomial:
    """``[+-] factor (* factor)*`` with factors ``1``, ``q``, ``q^e``, ``a``, ``a^e``.

    Exponents may be integers or rationals: ``q^3/2``, ``q^{3/2}``, ``q^(-1)``.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty value")
    sign = 1
    while s and s[0] in "+-":
        if s[0] == "-":
            sign = -sign
        s = s[1:]
    out = M(sign)
    for f in s.split("*"):
        if f == "1":
            continue
        m = _FACTOR.match(f)
        if not m:
            raise UsageError(f"cannot parse {text!r} (expected e.g. q, -q^2, q^3/2, a*q)")
        e = _frac(next((g for g in m.groups()[1:] if g is not None), "1"))
        if m.group(1) == "q":
            out = out * M.q(e)
        else:
            if e.denominator != 1:
                raise UsageError("a-exponents must be integers")
            out = out * M.a(int(e))
    return out


def parse_a(text: str) -> AMode:
    t = text.strip()
    if t in ROOTS:
        return AMode.cyclotomic(*ROOTS[t])
    if t in ("a", "z", "sym", "symbolic"):
        return AMode.symbolic()
    return AMode.monomial(parse_monomial(t))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _order(args, symbolic: bool = True):
    if args.order is not None:
        if args.order < 0:
            raise UsageError("--order must be nonnegative")
        return args.order
    return catalog.default_order(symbolic)


def _params(args, tag: str | None = None) -> IdentityParams:
    kw: dict = {}
    if getattr(args, "m", None) is not None:
        kw["m"] = args.m
    if getattr(args, "k", None) is not None:
        kw["k"] = args.k
    if getattr(args, "r", None) is not None:
        kw["r"] = args.r
    if getattr(args, "x", None):
        kw["x_sub"] = parse_monomial(args.x)
    if getattr(args, "a", None):
        kw["a_mode"] = parse_a(args.a)
    if getattr(args, "n_max_override", None) is not None:
        kw["n_max_override"] = args.n_max_override
    aux = []
    for name in ("b", "c"):
        v = getattr(args, name, None)
        if v:
            aux.append((name, parse_monomial(v)))
    if aux:
        kw["aux"] = tuple(aux)
    if tag is not None:
        e = catalog.entry(tag)
        if "k" in e.schema and ("k" not in kw or "r" not in kw):
            raise UsageError(f"{tag} needs --k and --r")
        return e.defaults.with_(**kw)
    return IdentityParams(**kw)


# ---------------------------------------------------------------------------
# expand
# ---------------------------------------------------------------------------

EXPR_HELP = ("euler_f, theta (--a A --b B), psi/phi (--a X), poch (--a BASE --b MODULUS [--n N]), "
             "TAG.lhs / TAG.rhs for any catalog tag, gf:AB|CD|EF|GH (--k --r)")


def _build_expr(args) -> QSeries:
    name = args.expr
    N = _order(args, symbolic=False)
    if name == "euler_f":
        return euler_f(_frac(args.s) if args.s else 1, N)
    if name == "theta":
        if not (args.a and args.b):
            raise UsageError("theta needs --a and --b")
        return theta_sum(ThetaSpec(parse_monomial(args.a), parse_monomial(args.b)), N)
    if name in ("psi", "phi"):
        x = parse_monomial(args.a) if args.a else M.q(1)
        return (psi_builder if name == "psi" else phi_builder)(x, N)
    if name == "poch":
        if not (args.a and args.b):
            raise UsageError("poch needs --a BASE and --b MODULUS")
        return pochhammer(PochSpec(parse_monomial(args.a), parse_monomial(args.b), args.n), N)
    if name.startswith("gf:"):
        th = name[3:]
        if args.k is None or args.r is None:
            raise UsageError("gf needs --k and --r")
        tag = partitions.SERIES_TAG.get(th)
        if tag is None:
            raise UsageError(f"unknown theorem {th!r}")
        lhs, _ = catalog.build_sides(tag, IdentityParams(k=args.k, r=args.r), N)
        return lhs
    if "." in name:
        tag, side = name.rsplit(".", 1)
        if tag not in catalog.TAGS or side not in ("lhs", "rhs"):
            raise UsageError(f"unknown expression {name!r}; expected {EXPR_HELP}")
        p = _params(args, tag)
        if p.a_mode.kind == "cyclotomic":
            raise UsageError("expand renders plain series; use verify for roots of unity")
        lhs, rhs = catalog.build_sides(tag, p, N)
        return lhs if side == "lhs" else rhs
    raise UsageError(f"unknown expression {name!r}; expected {EXPR_HELP}")


def cmd_expand(args) -> int:
    s = _build_expr(args)
    if args.format == "json":
        text = _json({"schema": SCHEMA, "expr": args.expr, "series": s.to_json()})
    elif args.format == "csv":
        buf = io.StringIO()
        buf.write("scaled_exponent,scale,a_exponent,coefficient\n")
        for k, c in s.items():
            for e, v in sorted(c.terms.items()):
                buf.write(f"{k},{s.scale},{e},{v}\n")
        text = buf.getvalue()
    else:
        text = s.format(show_order=args.show_order_term) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _report_json(r, timing: bool) -> dict:
    d = r.to_json()
    if not timing:
        d.pop("millis", None)
    return d


def cmd_verify(args) -> int:
    if args.order is not None and args.order < 0:
        raise UsageError("--order must be nonnegative")
    if sum(bool(x) for x in (args.id, args.all, args.table is not None)) != 1:
        raise UsageError("give exactly one of --id TAG, --all, or --table T --row R")
    if args.all:
        summary = catalog.verify_all(args.order, jobs=args.jobs, include_grid=args.grid)
        reports = summary.reports
    elif args.table is not None:
        if args.row is None:
            raise UsageError("--table needs --row")
        name = args.table.lower()
        if name != "post" and not name.lstrip("t").isdigit():
            raise UsageError(f"unknown table {args.table!r}; use 1, 2, 3 (or T1..T3) or post")
        table = name if name == "post" else int(name.lstrip("t"))
        reports = [catalog.verify_table_row(table, args.row, args.order)]
    else:
        p = _params(args, args.id)
        reports = [catalog.verify(args.id, p, args.order)]
    ok = all(r.passed for r in reports)
    if args.format == "json":
        doc = {"schema": SCHEMA, "pass": ok, "passed": sum(r.passed for r in reports),
               "failed": sum(not r.passed for r in reports),
               "reports": [_report_json(r, not args.no_timing) for r in reports]}
        text = _json(doc)
    elif args.format == "csv":
        buf = io.StringIO()
        buf.write("index,pass,order_certified,scale,first_mismatch\n")
        for i, r in enumerate(reports):
            fm = r.discrepancy["exponent"] if r.discrepancy else -1
            buf.write(f"{i},{int(r.passed)},{r.order_certified},{r.scale},{fm}\n")
        text = buf.getvalue()
    else:
        lines = [r.line() if not args.no_timing else r.line().rsplit("  [", 1)[0] for r in reports]
        lines.append(f"{sum(r.passed for r in reports)} passed, {sum(not r.passed for r in reports)} failed")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

def cmd_partitions(args) -> int:
    if args.k is None or args.r is None:
        raise UsageError("partitions needs --k and --r")
    rep = partitions.check_partition_theorem(args.theorem, args.k, args.r, args.n_max)
    if args.format == "json":
        text = _json({"schema": SCHEMA, **rep.to_json()})
    elif args.format == "csv":
        buf = io.StringIO()
        buf.write("n,left_count,right_count,gf_count,equal\n")
        for r in rep.rows:
            buf.write(f"{r.n},{r.left},{r.right},{r.gf},{int(r.equal)}\n")
        text = buf.getvalue()
    else:
        lt, rt = partitions.sides(args.theorem)
        lines = [f"{'n':>4} {lt + '(n)':>10} {rt + '(n)':>10} {'gf':>10}  equal"]
        for r in rep.rows:
            lines.append(f"{r.n:>4} {r.left:>10} {r.right:>10} {r.gf:>10}  {'yes' if r.equal else 'NO'}")
        z = rep.zero_row
        lines.append(f"n = 0 (not claimed): {lt}(0)={z.left}, {rt}(0)={z.right}, gf={z.gf}")
        lines += [f"note: {n}" for n in rep.notes]
        lines.append("all equal" if rep.passed else f"{len(rep.mismatches())} mismatching rows")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def cmd_catalog(args) -> int:
    items = catalog.catalog_list() + list(catalog.POST_TABLE_ROWS)
    if args.format == "json":
        doc = {"schema": SCHEMA, "entries": []}
        for it in items:
            if it.kind == "identity":
                doc["entries"].append({"kind": "identity", "tag": it.tag, "title": it.title,
                                       "params": list(it.schema), "defaults": it.defaults.describe()})
            else:
                doc["entries"].append({"kind": "table_row", "label": it.label, "tag": it.tag,
                                       "a": it.a_mode.label(), "x": str(it.x_sub)})
        text = _json(doc)
    elif args.format == "csv":
        raise UsageError("catalog supports text and json")
    else:
        lines = []
        for it in items:
            if it.kind == "identity":
                lines.append(f"{it.tag:14s} [{', '.join(it.schema)}] {it.title}")
            else:
                lines.append(f"{it.label:14s} {it.tag} at a = {it.a_mode.label()}, x = {it.x_sub}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qrr", description="Exact q-series identity checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("text", "json", "csv")):
        sp.add_argument("--order", type=int, default=None, help="q-order N (default: QRR_DEFAULT_ORDER, else 60/120)")
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--out", default=None, help="write to this file instead of stdout")

    def identity_params(sp):
        sp.add_argument("--m", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--x", help="value of x, e.g. q^1/2")
        sp.add_argument("--a", help="value of a/z: monomial, or i, -i, w3, w6, -w3")
        sp.add_argument("--b", help="second parameter for theta/poch/AQB/AQG")
        sp.add_argument("--c", help="parameter c for AQB")
        sp.add_argument("--n-max-override", type=int, dest="n_max_override")

    e = sub.add_parser("expand", help="print a series")
    e.add_argument("--expr", required=True, help=EXPR_HELP)
    e.add_argument("--n", type=int, default=None, help="Pochhammer length (omit for infinite)")
    e.add_argument("--s", default=None, help="euler_f exponent s in (q^s; q^s)_inf")
    e.add_argument("--show-order-term", action="store_true", help="append the O(q^(N+1)) term")
    identity_params(e)
    common(e)
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("verify", help="verify identities")
    v.add_argument("--id")
    v.add_argument("--all", action="store_true")
    v.add_argument("--table")
    v.add_argument("--row", type=int)
    v.add_argument("--grid", action="store_true", help="with --all, also sweep the AQB/AQG grid")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--no-timing", action="store_true", help="omit wall times (byte-deterministic output)")
    identity_params(v)
    common(v)
    v.set_defaults(func=cmd_verify)

    pt = sub.add_parser("partitions", help="triple-check a partition theorem")
    pt.add_argument("--theorem", required=True, choices=partitions.THEOREMS)
    pt.add_argument("--k", type=int)
    pt.add_argument("--r", type=int)
    pt.add_argument("--n-max", type=int, default=40, dest="n_max")
    pt.add_argument("--jobs", type=int, default=1)
    common(pt)
    pt.set_defaults(func=cmd_partitions)

    c = sub.add_parser("catalog", help="list catalog entries and table rows")
    common(c, ("text", "json", "csv"))
    c.set_defaults(func=cmd_catalog)
    return p


_VALUE_FLAGS = ("--a", "--b", "--c", "--x")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """``--a -q`` would read ``-q`` as an option; rewrite it as ``--a=-q``."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_glue_negative_values(argv))
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        return args.func(args)
    except (UsageError, QSeriesError, ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

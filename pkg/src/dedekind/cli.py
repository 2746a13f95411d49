"""Command-line interface: ``dedekind <command> ...``.

Exit status is 0 on success, 1 when a check produced counterexamples and 2
on usage or argument errors.  ``--json`` wraps every result in a report
record; otherwise output is plain text.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import re
import sys
from pathlib import Path

from dedekind import __version__
from dedekind.conjectures import STATEMENTS, sweep, table1_reproduce
from dedekind.inversion import dedekind_sum, inv_closed_form, inv_count
from dedekind.invpoly import build_invpoly, cyclotomic_root_scan
from dedekind.kloosterman import FORMS, kloosterman_exact, kloosterman_float, verify_prop25
from dedekind.numroots import annulus_check, emit_plot_data, find_roots

EXIT_OK, EXIT_FOUND, EXIT_USAGE = 0, 1, 2
OUTPUT_DIR_ENV = "DEDEKIND_OUTPUT_DIR"
_INT_RE = re.compile(r"-?[0-9]+")


class _Result:
    """What a subcommand hands back: text for humans, payload for ``--json``."""

    def __init__(self, text: str, payload, counterexamples: bool = False):
        self.text = text
        self.payload = payload
        self.counterexamples = counterexamples


def decimal_int(s: str) -> int:
    if not _INT_RE.fullmatch(s):
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {s!r}")
    return int(s)


def positive_int(s: str) -> int:
    v = decimal_int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}")
    return v


def resolve_output(path: str) -> Path:
    """Relative ``--out`` paths land under ``$DEDEKIND_OUTPUT_DIR`` when set."""
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _poly_text(terms: dict[int, int]) -> str:
    parts = []
    for e, c in sorted(terms.items()):
        coef = "" if c == 1 and e else str(c)
        mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
        parts.append(coef + mono)
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_sum(args) -> _Result:
    s = dedekind_sum(args.a, args.b)
    return _Result(str(s), {"a": args.a, "b": args.b, "s": str(s)})


def cmd_inv(args) -> _Result:
    if args.method == "closed":
        if args.b < 2:
            raise ValueError("closed form needs b >= 2")
        a = args.a % args.b
        v = inv_closed_form(a, args.b) if a else 0
    else:
        v = inv_count(args.a, args.b, method=args.method)
    return _Result(str(v), {"a": args.a, "b": args.b, "method": args.method, "inv": v})


def cmd_poly(args) -> _Result:
    p = build_invpoly(args.b)
    rec = p.to_record()
    text = json.dumps(rec) if args.format == "json" else _poly_text(p.terms)
    return _Result(text, rec)


def cmd_roots(args) -> _Result:
    rep = cyclotomic_root_scan(build_invpoly(args.b), m_max=args.mmax)
    explained = set(rep.orders()) - set(rep.unexplained_orders())
    lines = [f"b={rep.b} m_max={rep.m_max} residual_degree={rep.residual_degree}"]
    for m, t in rep.found:
        tag = "explained" if m in explained else "unexplained"
        lines.append(f"m={m} multiplicity={t} {tag}")
    if rep.cap_hit:
        lines.append(f"multiplicity cap {rep.mult_cap} reached at m={list(rep.cap_hit)}")
    return _Result("\n".join(lines), rep.to_record())


def cmd_table1(args) -> _Result:
    rows = table1_reproduce(args.bmax, orders=args.orders, jobs=args.jobs)
    text = "\n".join(f"{b}: {', '.join(map(str, ms))}" for b, ms in rows)
    payload = {"b_max": args.bmax, "orders": args.orders,
               "rows": [{"b": b, "m": ms} for b, ms in rows]}
    return _Result(text, payload)


def cmd_verify(args) -> _Result:
    v = sweep(args.statement, args.bmax, b_min=args.bmin, jobs=args.jobs)
    lines = [f"{v.statement} b={v.b_range[0]}..{v.b_range[1]}: {v.status} "
             f"({len(v.counterexamples)} counterexamples)"]
    shown = v.counterexamples[: args.show]
    lines += [f"  {json.dumps(c, default=str)}" for c in v.to_record()["counterexamples"][: len(shown)]]
    if len(v.counterexamples) > len(shown):
        lines.append(f"  ... {len(v.counterexamples) - len(shown)} more (use --json for all)")
    return _Result("\n".join(lines), v.to_record(), counterexamples=not v.ok)


def cmd_kloosterman(args) -> _Result:
    z = kloosterman_float(args.a, args.b, args.m)
    payload = {"a": args.a, "b": args.b, "m": args.m, "value": [z.real, z.imag]}
    text = repr(z.real)
    if args.exact:
        r = kloosterman_exact(args.a, args.b, args.m)
        payload["exact"] = {"m": r.m, "coeffs": list(r.coeffs)}
        c0 = r.constant_term()
        if c0 is not None:
            payload["integer"] = c0
            text = str(c0)
        else:
            text += f"\nexact residue mod Phi_{r.m}: {list(r.coeffs)}"
    return _Result(text, payload)


def cmd_prop25(args) -> _Result:
    res = verify_prop25(args.b, args.k, exact=args.exact, form=args.form)
    rec = res.to_record()
    rec["form"] = args.form
    if not res.applicable:
        return _Result(f"b={args.b} k={args.k}: not applicable", rec)
    verdict = "pass" if res.passed else "FAIL"
    text = (f"b={args.b} k={args.k} case={res.case} form={args.form}: {verdict} "
            f"|lhs-rhs|={res.error:.3e} tol={res.tolerance:.1e}")
    if res.exact is not None:
        text += f" exact={'equal' if res.exact else 'different'}"
    if not res.passed:
        rec["counterexamples"] = [{"b": args.b, "k": args.k, "error": res.error}]
    return _Result(text, rec, counterexamples=not res.passed)


def cmd_numroots(args) -> _Result:
    if args.b < 3:
        raise ValueError(f"numroots needs b >= 3, got {args.b}")
    rs = find_roots(build_invpoly(args.b), tol=args.tol, max_iter=args.max_iter)
    data = emit_plot_data(rs, args.format)
    verdict = annulus_check(rs)
    payload = {
        "b": args.b,
        "degree": rs.degree,
        "converged": int(rs.converged.sum()),
        "iterations": rs.iterations,
        "best_effort": rs.best_effort,
        "max_residual": float(rs.residuals.max()),
        "annulus": verdict.to_record(),
    }
    summary = (f"b={args.b} degree={rs.degree} converged={payload['converged']} "
               f"annulus={verdict.status}" + (" best-effort" if rs.best_effort else ""))
    if args.out:
        path = resolve_output(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        payload["out"] = str(path)
        text = f"wrote {rs.degree} roots to {path}\n{summary}"
    else:
        # stdout carries the data itself; keep it clean for redirection
        text = data.decode().rstrip("\n")
        print(summary, file=sys.stderr)
        if args.json:
            payload["data"] = data.decode()
    payload["counterexamples"] = verdict.to_record()["counterexamples"]
    return _Result(text, payload, counterexamples=not verdict.ok)


# ---------------------------------------------------------------------------
# parser and driver
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dedekind",
        description="Dedekind sums, inversion numbers and the inversion polynomial f_b.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--json", action="store_true", help="emit a JSON report instead of text")
    ap.add_argument("--jobs", type=decimal_int, default=None,
                    help="worker processes for sweeps (default: all CPUs)")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("sum", help="exact Dedekind sum s(a, b)")
    p.add_argument("a", type=decimal_int)
    p.add_argument("b", type=positive_int)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("inv", help="inversion number inv(a, b)")
    p.add_argument("a", type=decimal_int)
    p.add_argument("b", type=positive_int)
    p.add_argument("--method", choices=("fast", "oracle", "closed"), default="fast")
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("poly", help="sparse coefficients of f_b")
    p.add_argument("b", type=positive_int)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("roots", help="cyclotomic roots of f_b with multiplicities")
    p.add_argument("b", type=positive_int)
    p.add_argument("--mmax", type=positive_int, default=None, help="largest order scanned (default 3b)")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("table1", help="roots not explained by the 2k/6k families")
    p.add_argument("--bmax", type=positive_int, default=424)
    p.add_argument("--orders", choices=("even", "all"), default="even")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", help="sweep one statement over a range of b")
    p.add_argument("statement", choices=STATEMENTS, metavar="STATEMENT",
                   help="one of: " + ", ".join(STATEMENTS))
    p.add_argument("--bmax", type=positive_int, default=100)
    p.add_argument("--bmin", type=positive_int, default=2)
    p.add_argument("--show", type=decimal_int, default=10, help="counterexamples printed in text mode")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kloosterman", help="Kloosterman sum K(a, b; m)")
    p.add_argument("a", type=decimal_int)
    p.add_argument("b", type=decimal_int)
    p.add_argument("m", type=positive_int)
    p.add_argument("--exact", action="store_true", help="also compute the sum exactly in Z[zeta_m]")
    p.set_defaults(func=cmd_kloosterman)

    p = sub.add_parser("prop25", help="compare f_b(zeta_2k) with its Kloosterman expression")
    p.add_argument("b", type=positive_int)
    p.add_argument("k", type=positive_int)
    p.add_argument("--form", choices=FORMS, default="unit-i")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_prop25)

    p = sub.add_parser("numroots", help="numeric roots of f_b as plot data")
    p.add_argument("b", type=positive_int)
    p.add_argument("--out", default=None, help=f"output file (relative to ${OUTPUT_DIR_ENV} if set)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=positive_int, default=1000)
    p.set_defaults(func=cmd_numroots)
    return ap


def _report(argv: list[str], status: str, payload) -> str:
    rec = {
        "tool": "dedekind",
        "version": __version__,
        "command": argv,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "status": status,
        "payload": payload,
    }
    return json.dumps(rec, indent=1, default=str)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        res = args.func(args)
    except (ValueError, ArithmeticError, RuntimeError) as e:
        msg = f"dedekind {args.command}: {e}"
        print(msg, file=sys.stderr)
        if args.json:
            print(_report(argv, "error", {"error": str(e)}))
        return EXIT_USAGE
    status = "counterexamples" if res.counterexamples else "ok"
    print(_report(argv, status, res.payload) if args.json else res.text)
    return EXIT_FOUND if res.counterexamples else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

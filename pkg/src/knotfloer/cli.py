"""Command-line front end.

Commands: `report` (invariant tables, bounds, certificates), `plotdata`
(exact breakpoint tables for the concordance function), `validate`
(structural checks of a complex file).

Exit codes: 0 success, 2 expression syntax error, 3 validation or file
error, 4 internal-consistency failure, 5 plotdata on a non-torus-sum
expression. Structured output is emitted only on success, all at once.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .bounds import (
    clasp_bounds,
    format_exact,
    genus_bounds,
    lt_signature_of_expr,
    plot_rows,
    signature_clasp_bound,
    upsilon_of_expr,
    upsilon_ratio_bound,
)
from .complexes import verify_chain_map
from .errors import (
    ConsistencyError,
    FileFormatError,
    KnotFloerError,
    ParseError,
    UnsupportedInputError,
    ValidationError,
)
from .expressions import FileRef, expr_to_string, is_torus_sum, parse_knot_expr
from .fileio import load_complex
from .invariants import (
    a_level_complex,
    compute_invariant_table,
    is_knotlike,
    tower_cycle,
)
from .involutive import mirror_iota, realize_with_iota, v0_bar_under

CYCLE_CERTIFICATE_LIMIT = 2000


def _parse_range(text: Optional[str]) -> Tuple[int, ...]:
    if not text:
        return ()
    try:
        lo, hi = text.split("..")
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"range must look like A..B, got {text!r}"
        ) from None
    if lo_i < 0 or hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return tuple(range(lo_i, hi_i + 1))


def _table_payload(table) -> Dict:
    return {
        "V": {str(s): v for s, v in sorted(table.v.items())},
        "Y": {str(n): y for n, y in sorted(table.y.items())},
        "nu_plus": table.nu_plus,
        "omega_plus": table.omega_plus,
        "tau": table.tau,
        "nu": table.nu_hat,
        "omega": table.omega_hat,
    }


def _tower_certificate(c) -> Optional[List[Dict]]:
    if len(c.gens) > CYCLE_CERTIFICATE_LIMIT:
        return None
    level = a_level_complex(c, 0)
    cyc = tower_cycle(level)
    idx = {lbl: i for i, lbl in enumerate(level.fu.labels)}
    out = []
    for label, power in cyc.terms:
        iu, jv = level.min_monomials[idx[label]]
        out.append({"gen": label, "u": iu + power, "v": jv + power})
    return out


def _build_report(args) -> Dict:
    expr = parse_knot_expr(args.expr)
    complex_, iota = realize_with_iota(expr)
    complex_.require_valid()
    if not is_knotlike(complex_):
        raise ValidationError("input complex is not knot-like")
    mirror = complex_.dual()
    mirror_io = None
    if iota is not None:
        try:
            mirror_io = mirror_iota(iota, mirror)
        except ValidationError:
            mirror_io = None

    want_involutive = args.involutive != "off"
    if args.involutive == "on" and iota is None:
        raise ValidationError(
            "--involutive on: no involution available for this input"
        )

    v_idx = _parse_range(args.v)
    y_idx = _parse_range(args.y)
    jobs = args.jobs

    def job_table():
        return compute_invariant_table(complex_, v_idx, y_idx, args.cap)

    def job_mirror_table():
        return compute_invariant_table(mirror, v_idx, y_idx, args.cap)

    def job_involutive():
        if not (want_involutive and iota is not None):
            return None
        return v0_bar_under(complex_, iota)

    def job_mirror_involutive():
        if not (want_involutive and mirror_io is not None):
            return None
        return v0_bar_under(mirror, mirror_io)

    def job_upsilon():
        if not is_torus_sum(expr):
            return None
        return upsilon_of_expr(expr)

    def job_signature():
        if not is_torus_sum(expr):
            return None
        return lt_signature_of_expr(expr)

    workers = [
        ("table", job_table),
        ("mirror_table", job_mirror_table),
        ("involutive", job_involutive),
        ("mirror_involutive", job_mirror_involutive),
        ("upsilon", job_upsilon),
        ("signature", job_signature),
    ]
    results: Dict[str, object] = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {name: pool.submit(fn) for name, fn in workers}
            for name, fut in futures.items():
                results[name] = fut.result()
    else:
        for name, fn in workers:
            results[name] = fn()

    table = results["table"]
    mtable = results["mirror_table"]
    involutive = results["involutive"]
    m_involutive = results["mirror_involutive"]
    upsilon = results["upsilon"]
    signature = results["signature"]

    # Cross-checks between independently computed quantities.
    problems: List[str] = []
    if table.tau != -mtable.tau:
        problems.append(f"tau mirror asymmetry: {table.tau} vs {mtable.tau}")
    if upsilon is not None and upsilon.initial_slope() != -table.tau:
        problems.append(
            f"initial slope {upsilon.initial_slope()} != -tau = {-table.tau}"
        )
    if upsilon is not None:
        for t in upsilon.breakpoints:
            if upsilon(t) != upsilon(2 - t):
                problems.append(f"concordance function asymmetric at t = {t}")
                break
    if problems:
        raise ConsistencyError("; ".join(problems))

    upsilon_payload = None
    ratio = None
    if upsilon is not None:
        ratio = upsilon_ratio_bound(upsilon)
        upsilon_payload = {
            "points": [
                [format_exact(t), format_exact(v)]
                for t, v in zip(upsilon.breakpoints, upsilon.values)
            ],
            "value_at_1": format_exact(upsilon(1)),
            "initial_slope": format_exact(upsilon.initial_slope()),
            "ratio_clasp_bound": format_exact(ratio),
        }
    signature_payload = None
    sig_triple = None
    if signature is not None:
        hi, lo, bound = signature_clasp_bound(signature)
        sig_triple = (hi, lo, bound)
        signature_payload = {
            "jumps": [[format_exact(x), s] for x, s in signature.jumps],
            "max": hi,
            "min": lo,
            "clasp_bound": bound,
        }

    genus = genus_bounds(
        table.v, table.y, table.nu_plus, table.omega_plus, involutive
    )
    clasp = clasp_bounds(
        {"nu_plus": table.nu_plus, "omega_plus": table.omega_plus, "y": table.y},
        {"nu_plus": mtable.nu_plus, "omega_plus": mtable.omega_plus, "y": mtable.y},
        ratio,
        sig_triple,
        involutive,
    )

    certificates = {
        "v0_tower_cycle": _tower_certificate(complex_),
        "v0_tower_cycle_mirror": _tower_certificate(mirror),
    }

    return {
        "expression": expr_to_string(expr),
        "generator_count": len(complex_.gens),
        "invariants": _table_payload(table),
        "mirror_invariants": _table_payload(mtable),
        "involutive": None
        if involutive is None
        else {"v0_bar": involutive[0], "v0_under": involutive[1]},
        "mirror_involutive": None
        if m_involutive is None
        else {"v0_bar": m_involutive[0], "v0_under": m_involutive[1]},
        "upsilon": upsilon_payload,
        "signature": signature_payload,
        "bounds": {"genus": genus, "clasp": clasp},
        "certificates": certificates,
    }


def _flatten(prefix: str, obj, rows: List[Tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], rows)
    elif isinstance(obj, (list, tuple)):
        rows.append((prefix, json.dumps(obj, sort_keys=True)))
    else:
        rows.append((prefix, json.dumps(obj)))


def _emit_report(report: Dict, fmt: str) -> None:
    if fmt in ("json", "json-like"):
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=1) + "\n")
        return
    if fmt == "csv":
        rows: List[Tuple[str, str]] = []
        _flatten("", report, rows)
        for key, value in rows:
            sys.stdout.write(f"{key},{value}\n")
        return
    inv = report["invariants"]
    minv = report["mirror_invariants"]
    print(f"knot: {report['expression']}  ({report['generator_count']} generators)")
    print(
        f"tau = {inv['tau']}   nu = {inv['nu']}   omega = {inv['omega']}   "
        f"nu+ = {inv['nu_plus']}   omega+ = {inv['omega_plus']}"
    )
    print("V:", " ".join(f"{s}:{v}" for s, v in sorted(inv["V"].items(), key=lambda kv: int(kv[0]))))
    print("Y:", " ".join(f"{n}:{y}" for n, y in sorted(inv["Y"].items(), key=lambda kv: int(kv[0]))))
    print(
        f"mirror: tau = {minv['tau']}   nu+ = {minv['nu_plus']}   "
        f"omega+ = {minv['omega_plus']}"
    )
    print("mirror V:", " ".join(f"{s}:{v}" for s, v in sorted(minv["V"].items(), key=lambda kv: int(kv[0]))))
    print("mirror Y:", " ".join(f"{n}:{y}" for n, y in sorted(minv["Y"].items(), key=lambda kv: int(kv[0]))))
    if report["involutive"]:
        print(
            f"involutive: v0_bar = {report['involutive']['v0_bar']}   "
            f"v0_under = {report['involutive']['v0_under']}"
        )
    if report["upsilon"]:
        ups = report["upsilon"]
        print(
            f"upsilon: value(1) = {ups['value_at_1']}   slope(0+) = "
            f"{ups['initial_slope']}   ratio clasp bound = {ups['ratio_clasp_bound']}"
        )
    if report["signature"]:
        sig = report["signature"]
        print(
            f"signature: max = {sig['max']}   min = {sig['min']}   "
            f"clasp bound = {sig['clasp_bound']}"
        )
    genus = report["bounds"]["genus"]
    clasp = report["bounds"]["clasp"]
    print(f"genus lower bound: {genus['max']}")
    for name in sorted(genus["sources"]):
        print(f"  {name}: {genus['sources'][name]['bound']}")
    print(f"clasp lower bound: {clasp['max']}")
    for name in sorted(clasp["sources"]):
        src = clasp["sources"][name]
        print(f"  {name}: {src['bound']}")
    print(f"  positive clasp: {clasp['positive']['max']}   negative clasp: {clasp['negative']['max']}")


def _cmd_report(args) -> int:
    report = _build_report(args)
    _emit_report(report, args.format)
    return 0


def _cmd_plotdata(args) -> int:
    expr = parse_knot_expr(args.expr)
    if not is_torus_sum(expr):
        print("plotdata requires a torus-knot sum expression", file=sys.stderr)
        return 5
    ups = upsilon_of_expr(expr)
    upto = Fraction(2) if args.full else Fraction(1)
    rows = plot_rows(ups, upto)
    out = sys.stdout
    out.write("# t\tupsilon\n")
    for t, v in rows:
        out.write(f"{format_exact(t)}\t{format_exact(v)}\n")
    out.write("# t\tupsilon_over_t\n")
    for t, v in rows:
        ratio = ups.initial_slope() if t == 0 else v / t
        out.write(f"{format_exact(t)}\t{format_exact(ratio)}\n")
    return 0


def _cmd_validate(args) -> int:
    expr = parse_knot_expr(args.expr)
    if not isinstance(expr, FileRef):
        print("validate expects a file input: --expr "
              "'@path/to/file'", file=sys.stderr)
        return 2
    complex_, iota = load_complex(expr.path)
    problems = complex_.validate()
    if not is_knotlike(complex_):
        problems.append("complex is not knot-like (localized tower rank != 1)")
    if iota is not None:
        violation = verify_chain_map(iota)
        if violation is not None:
            problems.append(f"iota: {violation}")
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 3
    print(f"ok: {len(complex_.gens)} generators"
          + (", involution verified" if iota is not None else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knotfloer",
        description="Exact concordance invariants of bigraded knot complexes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--expr", required=True, help="knot expression or '@file'")
        p.add_argument("--v", default=None, help="V-index range A..B")
        p.add_argument("--y", default=None, help="Y-index range A..B")
        p.add_argument(
            "--involutive", choices=["on", "off", "auto"], default="auto"
        )
        p.add_argument(
            "--format",
            choices=["human", "json", "json-like", "csv"],
            default="human",
        )
        p.add_argument(
            "--jobs",
            type=int,
            default=int(os.environ.get("KNOTFLOER_JOBS", "1")),
            help="parallel workers (defaults to KNOTFLOER_JOBS or 1)",
        )
        p.add_argument("--cap", type=int, default=None, help="iteration cap")

    rep = sub.add_parser("report", help="invariant tables and bound reports")
    common(rep)
    rep.set_defaults(func=_cmd_report)

    plot = sub.add_parser("plotdata", help="breakpoint tables for plotting")
    plot.add_argument("--expr", required=True)
    plot.add_argument("--full", action="store_true", help="table on [0,2]")
    plot.set_defaults(func=_cmd_plotdata)

    val = sub.add_parser("validate", help="validate a complex file")
    val.add_argument("--expr", required=True, help="'@path/to/file'")
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, FileFormatError, UnsupportedInputError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 4
    except KnotFloerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

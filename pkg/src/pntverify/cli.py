"""Command-line front end.

Subcommands map one-to-one onto the library surface: `compute` for
point values, `verify` and `crossover` for claim campaigns, `zeros` for
ordinate-table work, `table` and `audit` for the certification suites.
Settings come from ./pnt.conf (key=value lines) when present; the
PNT_ZEROS environment variable overrides any configured or flagged zero
file so batch jobs can swap tables without editing commands.

Exit codes: 0 clean, 1 violations found, 2 usage or range errors,
3 inconclusive points remain.  Identical inputs give byte-identical
JSON output (no timestamps; timings are opt-in and off here).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .backend import backend_name
from .chebyshev import chebyshev_at, mertens_at, psi1_at
from .config import (
    CONFIG_FILENAME,
    ZERO_FILE_ENV,
    ConfigProfile,
    PntError,
    load_config,
)
from .verify import (
    audit_constants,
    crossover_to_dict,
    find_crossover,
    make_claim,
    report_json,
    verify,
    verify_piecewise_table,
    violations_csv,
)
from . import zeros as zmod

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2
EXIT_INCONCLUSIVE = 3


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _want_json(args, profile: ConfigProfile) -> bool:
    return bool(getattr(args, "json", False)) or profile.output == "json"


def _desk(args, profile: ConfigProfile) -> int:
    return getattr(args, "desk_max", None) or profile.desk_max


def _segment(args, profile: ConfigProfile) -> int:
    return getattr(args, "segment_size", None) or profile.segment_size


def _threads(args, profile: ConfigProfile) -> int:
    return getattr(args, "threads", None) or profile.threads


def _zero_path(args, profile: ConfigProfile) -> str:
    env = os.environ.get(ZERO_FILE_ENV)
    path = env or getattr(args, "zero_file", None) or profile.zero_file
    if not path:
        raise PntError(
            "no zero file configured (use --zero-file, "
            f"{ZERO_FILE_ENV}, or zero_file in {CONFIG_FILENAME})"
        )
    return path


def _load_table(args, profile: ConfigProfile) -> zmod.ZeroTable:
    return zmod.load_table(_zero_path(args, profile),
                           getattr(args, "precision", None))


# ---------------------------------------------------------------------------
# Command handlers


def _cmd_compute(args, profile: ConfigProfile) -> int:
    x = args.x
    seg = _segment(args, profile)
    desk = _desk(args, profile)
    q = args.quantity
    if q in ("psi", "theta", "pi"):
        pt = chebyshev_at(x, seg, desk)
        payload = {
            "psi": {"x": pt.x, "psi": pt.psi, "err_bound": pt.err_bound},
            "theta": {"x": pt.x, "theta": pt.theta,
                      "err_bound": pt.err_bound},
            "pi": {"x": pt.x, "pi": pt.pi_count, "err_bound": 0.0},
        }[q]
        text = {
            "psi": f"psi({pt.x:g}) = {pt.psi!r}  (err <= {pt.err_bound:.3e})",
            "theta": (f"theta({pt.x:g}) = {pt.theta!r}"
                      f"  (err <= {pt.err_bound:.3e})"),
            "pi": f"pi({pt.x:g}) = {pt.pi_count}",
        }[q]
    elif q == "psi1":
        p1 = psi1_at(x, seg, desk)
        payload = {"x": p1.x, "psi1": p1.psi1, "err_bound": p1.err_bound}
        text = f"psi1({p1.x:g}) = {p1.psi1!r}  (err <= {p1.err_bound:.3e})"
    else:
        mt = mertens_at(x, seg, desk)
        payload = {
            "x": mt.x,
            "sum_logp_over_p": mt.sum_logp_over_p,
            "sum_recip": mt.sum_recip,
            "log_prod": mt.log_prod,
            "err_bound": mt.err_bound,
        }
        text = (
            f"sum log p/p ({mt.x:g}) = {mt.sum_logp_over_p!r}\n"
            f"sum 1/p     ({mt.x:g}) = {mt.sum_recip!r}\n"
            f"log prod    ({mt.x:g}) = {mt.log_prod!r}\n"
            f"err <= {mt.err_bound:.3e}"
        )
    if _want_json(args, profile):
        _emit(payload)
    else:
        print(text)
    return EXIT_OK


def _cmd_verify(args, profile: ConfigProfile) -> int:
    claim = make_claim(args.bound_id, args.lo, args.hi)
    report = verify(
        claim,
        segment_size=_segment(args, profile),
        desk_max=_desk(args, profile),
        threads=_threads(args, profile),
    )
    blob = report_json(report)
    if args.report:
        Path(args.report).write_text(blob)
    if args.csv:
        Path(args.csv).write_text(violations_csv(report))
    if _want_json(args, profile):
        sys.stdout.write(blob)
    elif profile.output == "csv" and not getattr(args, "json", False):
        sys.stdout.write(violations_csv(report))
    else:
        lo, hi = report.claim.check_range
        cert = "yes" if report.certified else "no"
        lf = ("none" if report.last_failure is None
              else repr(report.last_failure))
        print(f"bound: {report.claim.bound_id}  lhs {report.claim.lhs_kind}")
        print(f"claim holds for x >= {report.claim.claimed_from:g}; "
              f"window [{lo:g}, {hi:g}]")
        print(f"points checked: {report.points_checked}")
        print(f"violations: {len(report.violations)}  last failure: {lf}")
        print(f"inconclusive: {len(report.inconclusive)}")
        print(f"verified: [{report.verified_range[0]:g}, "
              f"{report.verified_range[1]:g}]  certified: {cert}")
        print(f"max ratio: {report.max_ratio:.6f} at x = {report.argmax_x:g}")
    if report.violations:
        return EXIT_VIOLATIONS
    if report.inconclusive:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_crossover(args, profile: ConfigProfile) -> int:
    c = find_crossover(
        args.bound_id,
        search_range=(args.search_from, args.search_to),
        resolution=args.resolution,
        segment_size=_segment(args, profile),
        desk_max=_desk(args, profile),
        threads=_threads(args, profile),
    )
    if _want_json(args, profile):
        _emit(crossover_to_dict(c))
    elif c.no_failure:
        print(f"{c.bound_id}: no failure in "
              f"[{args.search_from:g}, {args.search_to:g}]"
              f"  (margin {c.margin:.6f})")
    else:
        print(f"{c.bound_id}: threshold {c.rounded_threshold:g}"
              f"  (last failure x = {c.last_failure_x!r},"
              f" resolution {c.resolution:g})")
    return EXIT_OK


def _cmd_zeros_ingest(args, profile: ConfigProfile) -> int:
    table = zmod.ingest(args.file, args.precision)
    if args.cache:
        zmod.write_cache(table, args.cache)
    if _want_json(args, profile):
        payload = {
            "count": table.count,
            "max_height": table.max_height,
            "input_precision": table.input_precision,
        }
        if args.cache:
            payload["cache"] = str(args.cache)
        _emit(payload)
    else:
        print(f"{table.count} ordinates up to height {table.max_height!r}"
              f"  (precision {table.input_precision:g})")
        if args.cache:
            print(f"cache written: {args.cache}")
    return EXIT_OK


def _cmd_zeros_count(args, profile: ConfigProfile) -> int:
    table = _load_table(args, profile)
    n = zmod.count_below(table, args.up_to)
    if _want_json(args, profile):
        _emit({"up_to": args.up_to, "count": n})
    else:
        print(f"N({args.up_to:g}) = {n}")
    return EXIT_OK


def _cmd_zeros_sum(args, profile: ConfigProfile) -> int:
    table = _load_table(args, profile)
    T = args.up_to if args.up_to is not None else table.max_height
    if args.squared:
        # both-signs sum over T <= gamma < max_height; the analytic tail
        # bound covers everything at and above the last ordinate
        r = zmod.sum_inv_gamma_sq_tail(table, T)
        label = "sum 1/gamma^2 (both signs)"
        span = f"over [{r.truncation_height:g}, {table.max_height:g})"
    else:
        r = zmod.sum_inv_gamma(table, T, both_signs=args.both_signs)
        label = "2 sum 1/gamma" if args.both_signs else "sum 1/gamma"
        span = f"up to {r.truncation_height:g}"
    if _want_json(args, profile):
        _emit({
            "kind": label,
            "value": r.value,
            "truncation_height": r.truncation_height,
            "term_count": r.term_count,
            "err_bound": r.err_bound,
            "tail_bound": r.tail_bound,
        })
    else:
        tail = ("" if r.tail_bound is None
                else f", tail above table <= {r.tail_bound:.6e}")
        print(f"{label} {span} = {r.value!r}"
              f"  ({r.term_count} terms, err <= {r.err_bound:.3e}{tail})")
    return EXIT_OK


def _cmd_zeros_explicit_psi1(args, profile: ConfigProfile) -> int:
    table = _load_table(args, profile)
    height = args.height if args.height is not None else table.max_height
    r = zmod.explicit_psi1(table, args.x, height)
    if _want_json(args, profile):
        _emit({
            "x": args.x,
            "height": height,
            "value": r.value,
            "truncation_tail": r.truncation_tail,
            "term_count": r.term_count,
        })
    else:
        print(f"explicit_psi1({args.x:g}) = {r.value!r}"
              f"  (tail <= {r.truncation_tail:.6g}, {r.term_count} terms)")
    return EXIT_OK


def _cmd_table(args, profile: ConfigProfile) -> int:
    rows = verify_piecewise_table()
    if _want_json(args, profile):
        _emit([
            {
                "L_lo": row.L_lo,
                "L_hi": row.L_hi,
                "claimed": row.claimed,
                "sup_lo": row.computed_sup.lo,
                "sup_hi": row.computed_sup.hi,
                "monotone": row.monotone,
                "passes": row.passes,
                "theta": row.theta,
            }
            for row in rows
        ])
    else:
        for row in rows:
            mark = "PASS" if row.passes else "FAIL"
            extra = "  (theta extension)" if row.theta else ""
            print(f"[{row.L_lo:10.3f}, {row.L_hi:10.3f}]"
                  f"  sup <= {row.computed_sup.hi:.7f}"
                  f"  claimed {row.claimed:.5f}  {mark}{extra}")
        good = sum(row.passes for row in rows)
        print(f"{good}/{len(rows)} rows pass"
              " (7 claim rows plus the theta extension)")
    return EXIT_OK if all(row.passes for row in rows) else EXIT_VIOLATIONS


def _cmd_audit(args, profile: ConfigProfile) -> int:
    checks = audit_constants()
    if _want_json(args, profile):
        _emit([
            {
                "name": c.name,
                "passed": c.passed,
                "margin": c.margin,
                "detail": c.detail,
            }
            for c in checks
        ])
    else:
        for c in checks:
            mark = "PASS" if c.passed else "FAIL"
            print(f"{mark}  {c.name}  (margin {c.margin:.3e})")
            if args.verbose:
                print(f"      {c.detail}")
        good = sum(c.passed for c in checks)
        print(f"{good}/{len(checks)} checks pass  [backend: {backend_name()}]")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VIOLATIONS


# ---------------------------------------------------------------------------
# Parser assembly


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--segment-size", type=int, default=None,
                   help="sieve segment length (default from config)")
    p.add_argument("--desk-max", type=int, default=None,
                   help="refuse ranges beyond this endpoint")


def _add_table_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--zero-file", default=None,
                   help=f"ordinate table ({ZERO_FILE_ENV} overrides)")
    p.add_argument("--precision", type=float, default=None,
                   help="declared absolute error of the ordinates")
    p.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pntverify",
        description="certified checks of explicit prime-counting bounds",
    )
    top.add_argument("--config", default=None,
                     help=f"config file (default ./{CONFIG_FILENAME})")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="point values with error bounds")
    p.add_argument("quantity",
                   choices=("psi", "theta", "pi", "psi1", "mertens"))
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--json", action="store_true")
    _add_engine_flags(p)
    p.set_defaults(handler=_cmd_compute)

    p = sub.add_parser("verify", help="scan a claim window and certify")
    p.add_argument("bound_id")
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--report", default=None,
                   help="write the JSON report to this path")
    p.add_argument("--csv", default=None,
                   help="write violation rows as CSV to this path")
    p.add_argument("--json", action="store_true",
                   help="print the JSON report instead of the summary")
    _add_engine_flags(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("crossover", help="locate the last failure point")
    p.add_argument("bound_id")
    p.add_argument("--resolution", type=float, default=0.1)
    p.add_argument("--search-from", type=float, default=2.0)
    p.add_argument("--search-to", type=float, default=1e5)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--json", action="store_true")
    _add_engine_flags(p)
    p.set_defaults(handler=_cmd_crossover)

    p = sub.add_parser("zeros", help="zero-ordinate table operations")
    zsub = p.add_subparsers(dest="zeros_command", required=True)

    z = zsub.add_parser("ingest", help="parse, validate, optionally cache")
    z.add_argument("file")
    z.add_argument("--precision", type=float, default=None)
    z.add_argument("--cache", default=None,
                   help="write a ZTBL binary cache here")
    z.add_argument("--json", action="store_true")
    z.set_defaults(handler=_cmd_zeros_ingest)

    z = zsub.add_parser("count", help="N(T) from the table")
    z.add_argument("--up-to", dest="up_to", type=float, required=True)
    _add_table_flags(z)
    z.set_defaults(handler=_cmd_zeros_count)

    z = zsub.add_parser("sum", help="reciprocal ordinate sums")
    z.add_argument("--up-to", dest="up_to", type=float, default=None)
    grp = z.add_mutually_exclusive_group()
    grp.add_argument("--both-signs", action="store_true",
                     help="count each zero pair twice")
    grp.add_argument("--squared", action="store_true",
                     help="sum 1/gamma^2 with its analytic tail")
    _add_table_flags(z)
    z.set_defaults(handler=_cmd_zeros_sum)

    z = zsub.add_parser("explicit-psi1",
                        help="smoothed explicit formula at x")
    z.add_argument("--x", type=float, required=True)
    z.add_argument("--height", type=float, default=None)
    _add_table_flags(z)
    z.set_defaults(handler=_cmd_zeros_explicit_psi1)

    p = sub.add_parser("table", help="piecewise coefficient table")
    p.add_argument("what", choices=("suffcond",))
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("audit", help="constant extraction audits")
    p.add_argument("--json", action="store_true")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(handler=_cmd_audit)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        profile = load_config(args.config)
        return args.handler(args, profile)
    except PntError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())

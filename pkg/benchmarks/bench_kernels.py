"""Wall-time comparison of the numba and numpy kernel backends.

The backend choice is resolved once per process, so each measurement
runs in a child process with PNTVERIFY_BACKEND set.  Children warm up
first (absorbing JIT compilation), then time the workload and print a
JSON record.  The parent prints a table and checks that both backends
agree: verdict fields exactly, floating sums within their combined
reported error bounds.

Usage: python benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
ZERO_FILE = ROOT / "data" / "zeros_100k.txt"

WORKLOADS = ("scan", "point", "zerosum")


def _run_scan():
    from pntverify.verify import make_claim, verify

    report = verify(make_claim("thm2_psi", 2.0, 1e7))
    return {
        "certified": report.certified,
        "points": report.points_checked,
        "violations": len(report.violations),
        "last_failure": report.last_failure,
        "max_ratio": report.max_ratio,
        "argmax_x": report.argmax_x,
        "_float_tol": 1e-9,
    }


def _run_point():
    from pntverify.chebyshev import chebyshev_at, mertens_at

    pt = chebyshev_at(1e7)
    mt = mertens_at(1e7)
    return {
        "pi": pt.pi_count,
        "psi": pt.psi,
        "theta": pt.theta,
        "sum_recip": mt.sum_recip,
        "_float_tol": pt.err_bound + mt.err_bound,
    }


def _run_zerosum():
    from pntverify.zeros import explicit_psi1, ingest

    table = ingest(ZERO_FILE)
    r = explicit_psi1(table, 1000.5, table.max_height)
    return {
        "terms": r.term_count,
        "value": r.value,
        "tail": r.truncation_tail,
        "_float_tol": 1e-6,
    }


_RUNNERS = {"scan": _run_scan, "point": _run_point, "zerosum": _run_zerosum}


def _child(workload: str, repeat: int) -> None:
    from pntverify.backend import backend_name

    runner = _RUNNERS[workload]
    # first call pays JIT compilation and page-in costs; measure after
    runner()
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = runner()
        best = min(best, time.perf_counter() - t0)
    print(json.dumps({
        "backend": backend_name(),
        "workload": workload,
        "seconds": best,
        "result": result,
    }))


def _spawn(backend: str, workload: str, repeat: int) -> dict:
    env = dict(os.environ, PNTVERIFY_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, __file__, "--child", workload,
         "--repeat", str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    record = json.loads(proc.stdout.splitlines()[-1])
    if record["backend"] != backend:
        raise RuntimeError(
            f"requested {backend} backend but child ran {record['backend']}"
        )
    return record


def _agree(a: dict, b: dict) -> bool:
    tol = max(a.pop("_float_tol"), b.pop("_float_tol"))
    for key, va in a.items():
        vb = b[key]
        if isinstance(va, float) and isinstance(vb, float):
            if abs(va - vb) > tol * max(1.0, abs(va)):
                return False
        elif va != vb:
            return False
    return True


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="timed repetitions per child; best is reported")
    ap.add_argument("--child", choices=WORKLOADS, default=None,
                    help=argparse.SUPPRESS)
    args = ap.parse_args(argv)

    if args.child:
        _child(args.child, args.repeat)
        return 0

    print(f"{'workload':<10} {'numba':>9} {'numpy':>9} "
          f"{'speedup':>8}  agreement")
    all_ok = True
    for workload in WORKLOADS:
        recs = {b: _spawn(b, workload, args.repeat)
                for b in ("numba", "numpy")}
        tn = recs["numba"]["seconds"]
        tp = recs["numpy"]["seconds"]
        ok = _agree(dict(recs["numba"]["result"]),
                    dict(recs["numpy"]["result"]))
        all_ok = all_ok and ok
        print(f"{workload:<10} {tn:>8.3f}s {tp:>8.3f}s "
              f"{tp / tn:>7.2f}x  {'ok' if ok else 'MISMATCH'}")
    if not all_ok:
        print("backend results disagree beyond error bounds", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

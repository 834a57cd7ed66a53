"""Certified verification of the registry claims over exact step sums.

The scan layer (chebyshev.scan_claims) streams every jump of a step
function and flags, per inter-jump gap, certain violations and gaps it
could not certify with float tolerances.  This module turns those raw
flags into a sound report:

* flagged points are re-checked in outward-rounded interval arithmetic,
  with one escalation to 40-digit arithmetic when the comparison stays
  unseparated for floating-point reasons;
* flagged gaps are resolved by locating the boundary of the failing set
  (bisection against the interval endpoints of the deviation band), or,
  when both gap edges certainly hold, by recursive splitting until every
  sub-gap certifies;
* printed constants enter as enclosures, never as point values.  E and B
  use the intersection of the decimal-truncation interval with a
  computed enclosure; C uses the correctly rounded double padded one ulp
  each way.  A claim "fails" at x only when it fails for every constant
  in the enclosure and every value of the step sum within its error bar.

Gap certification leans on two structural facts about the registry rows:
between consecutive jumps the deviation is a monotone function of x
folded through an absolute value (so its maximum over a gap is attained
at an edge), and every right-hand side is either monotone or unimodal
with an interior maximum (so its minimum over a gap is attained at an
edge).  Cross-edge comparisons therefore certify whole gaps, and
splitting only ever tightens them.

Conventions for reported coordinates:

* a violation that holds right up to a jump at J is reported at the
  largest float below J (the pre-jump value is a left limit; the claim
  already holds again at J itself);
* ``last_failure`` is the supremum of certain failures.  When the
  failing set ends at an interior crossing, the crossing is located to
  within 1e-6 and the bracket top is used, preserving "no violation
  above last_failure" exactly;
* the width of a constant enclosure leaves a thin band around each
  crossing where neither failure nor success is certain.  The band is
  absorbed into the failure boundary: ``verified_range`` starts above
  it, and nothing inside it is listed as inconclusive.

Reports serialize to JSON with a fixed key set and, by default, a null
``wall_time_ms`` so that identical inputs produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_CEILING
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp
from scipy.optimize import brentq

from .bounds import (
    CLAIM_IDS,
    BoundSpec,
    T0,
    goldston_chain,
    moi1_chain,
    moi2_chain,
    moi2_chain_printed,
    rcal,
    registry,
    suffcond_coefficient,
    suffcond_margin,
    thm1_implies_thm2_gap,
    zero_sum_block,
)
from .chebyshev import GapRecord, ScanClaim, estimate_E_B, scan_claims
from .config import (
    DEFAULT_DESK_MAX,
    DEFAULT_SEGMENT_SIZE,
    IntegrityError,
    PntError,
    RangeGuardError,
)
from .constants import (
    CONSTANTS,
    b_interval,
    e_interval,
    euler_gamma_interval,
    truncation_interval,
)
from .interval import IV_PI, Iv, iexp, ilog
from .logdomain import LOG_X19, LogPoint, LogPointIv

__all__ = [
    "AuditCheck",
    "ClaimSpec",
    "CrossoverResult",
    "PiecewiseTableRow",
    "VerificationReport",
    "Violation",
    "audit_constants",
    "crossover_to_dict",
    "find_crossover",
    "make_claim",
    "report_json",
    "report_to_dict",
    "verify",
    "verify_piecewise_table",
    "violations_csv",
]

#: Width below which a failing-set boundary is considered located.
_XTOL = 1e-6

_LHS_KINDS: Dict[Tuple[str, int], str] = {
    ("psi", 0): "|psi - x|",
    ("theta", 0): "|theta - x|",
    ("logp_p", 1): "|sum log p/p - log x - E|",
    ("recip", 2): "|sum 1/p - loglog x - B|",
    ("logprod", 3): "|e^C log x prod - 1|",
    ("logprod", 4): "|e^-C/(log x prod) - 1|",
}


# ---------------------------------------------------------------------------
# Claim construction


@dataclass(frozen=True)
class ClaimSpec:
    """A registry claim restricted to a concrete scan window."""

    bound_id: str
    lhs_kind: str
    claimed_from: float
    check_range: Tuple[float, float]


@dataclass(frozen=True)
class Violation:
    """A certain failure: lhs > rhs for every value in both enclosures."""

    x: float
    lhs: Iv
    rhs: Iv


@dataclass
class VerificationReport:
    claim: ClaimSpec
    verified_range: Tuple[float, float]
    points_checked: int
    violations: List[Violation]
    inconclusive: List[float]
    last_failure: Optional[float]
    max_ratio: float
    argmax_x: float
    truncated: bool
    wall_time_ms: float

    @property
    def certified(self) -> bool:
        """True when the claim holds, certified, on its claimed suffix of
        the scanned window."""
        lo, hi = self.claim.check_range
        boundary = max(self.claim.claimed_from, max(lo, 2.0))
        if self.truncated or boundary > hi:
            return False
        if any(v.x >= boundary for v in self.violations):
            return False
        if any(u >= boundary for u in self.inconclusive):
            return False
        return self.verified_range[0] <= boundary


@dataclass(frozen=True)
class CrossoverResult:
    bound_id: str
    last_failure_x: Optional[float]
    rounded_threshold: Optional[float]
    resolution: float
    no_failure: bool
    margin: Optional[float]


def _claim_row(bound_id: str) -> BoundSpec:
    reg = registry()
    if bound_id not in reg:
        raise PntError(f"unknown bound id {bound_id!r}")
    if bound_id not in CLAIM_IDS:
        raise PntError(f"{bound_id!r} is not a step-function claim")
    return reg[bound_id]


def _lhs_kind(row: BoundSpec) -> str:
    return _LHS_KINDS[(row.stream, row.kernel_kind)]


def make_claim(bound_id: str, lo: float, hi: float) -> ClaimSpec:
    row = _claim_row(bound_id)
    return ClaimSpec(
        bound_id=bound_id,
        lhs_kind=_lhs_kind(row),
        claimed_from=row.validity_from,
        check_range=(float(lo), float(hi)),
    )


# ---------------------------------------------------------------------------
# Constant enclosures


@lru_cache(maxsize=1)
def _mertens_estimates():
    # One streamed pass to 1e6; the result is shared by every claim that
    # consumes E or B in this process.
    return estimate_E_B(1e6)


def _claim_constant(row: BoundSpec) -> Iv:
    if not row.const_name:
        return Iv(0.0, 0.0)
    if row.const_name == "C":
        return euler_gamma_interval()
    est = _mertens_estimates()
    if row.const_name == "E":
        trunc, comp = e_interval(), est.E_est
    elif row.const_name == "B":
        trunc, comp = b_interval(), est.B_est
    else:
        raise PntError(f"unknown constant name {row.const_name!r}")
    lo = max(trunc.lo, comp.lo)
    hi = min(trunc.hi, comp.hi)
    if lo > hi:
        raise IntegrityError(
            f"enclosures for {row.const_name} are disjoint: printed "
            f"[{trunc.lo}, {trunc.hi}], computed [{comp.lo}, {comp.hi}]")
    return Iv(lo, hi)


# ---------------------------------------------------------------------------
# Point evaluation


def _point_eval(row: BoundSpec, K: Iv, S: float, s_err: float,
                x: float) -> Tuple[Iv, Iv]:
    """Deviation and bound enclosures at a single x, outward rounded."""
    pt = LogPointIv.from_L_interval(ilog(Iv.point(float(x))))
    rhs = row.rhs(pt)
    S_iv = Iv.from_midrad(S, s_err)
    kind = row.kernel_kind
    if kind == 0:
        dev = abs(S_iv - x)
    elif kind == 1:
        dev = abs(S_iv - pt.L - K)
    elif kind == 2:
        dev = abs(S_iv - pt.LL - K)
    elif kind == 3:
        dev = abs(iexp(K + S_iv) * pt.L - 1.0)
    elif kind == 4:
        dev = abs(iexp(-(K + S_iv)) / pt.L - 1.0)
    else:
        raise PntError(f"unknown kernel kind {kind}")
    if not isinstance(rhs, Iv):
        rhs = Iv.point(rhs)
    return dev, rhs


def _band(lo_raw: float, hi_raw: float) -> Tuple[float, float]:
    """|.| of a signed band [lo_raw, hi_raw]."""
    if lo_raw <= 0.0 <= hi_raw:
        return 0.0, max(-lo_raw, hi_raw)
    a, b = abs(lo_raw), abs(hi_raw)
    return min(a, b), max(a, b)


def _point_eval_mp(row: BoundSpec, K: Iv, S: float, s_err: float,
                   x: float) -> Tuple[Iv, Iv]:
    """The same enclosures with the transcendental rounding retired at
     40 digits.  Only the constant enclosure and the step error bar
    remain; used once per point when double precision cannot separate."""
    a, b, c, d, e, f, g = row.coeffs
    kind = row.kernel_kind
    with mp.workdps(40):
        X = mp.mpf(x)
        L = mp.log(X)
        LL = mp.log(L)
        sq = mp.sqrt(X)
        rhs_f = float(sq * (a * L * L + b * L * LL + c * LL + d * L + e)
                      + (f * L * L + g * L) / sq)
        Sm = mp.mpf(S)
        if kind == 0:
            lo_raw = float(Sm - s_err - X)
            hi_raw = float(Sm + s_err - X)
        elif kind == 1:
            lo_raw = float(Sm - s_err - L - K.hi)
            hi_raw = float(Sm + s_err - L - K.lo)
        elif kind == 2:
            lo_raw = float(Sm - s_err - LL - K.hi)
            hi_raw = float(Sm + s_err - LL - K.lo)
        elif kind == 3:
            lo_raw = float(mp.exp(mp.mpf(K.lo) + Sm - s_err) * L - 1.0)
            hi_raw = float(mp.exp(mp.mpf(K.hi) + Sm + s_err) * L - 1.0)
        else:
            lo_raw = float(mp.exp(-mp.mpf(K.hi) - Sm - s_err) / L - 1.0)
            hi_raw = float(mp.exp(-mp.mpf(K.lo) - Sm + s_err) / L - 1.0)
    dev_lo, dev_hi = _band(lo_raw, hi_raw)
    pad = 4.0 * float(np.spacing(max(dev_hi, abs(rhs_f), 1e-300)))
    return (Iv(max(0.0, dev_lo - pad), dev_hi + pad),
            Iv(rhs_f - pad, rhs_f + pad))


def _point_sign(row: BoundSpec, K: Iv, S: float, s_err: float, x: float,
                escalate: bool = True) -> Tuple[int, Iv, Iv]:
    """+1 certainly holds, -1 certainly fails, 0 unseparated."""
    dev, rhs = _point_eval(row, K, S, s_err, x)
    if dev.hi < rhs.lo:
        return 1, dev, rhs
    if dev.lo > rhs.hi:
        return -1, dev, rhs
    if not escalate:
        return 0, dev, rhs
    dev2, rhs2 = _point_eval_mp(row, K, S, s_err, x)
    if dev2.hi < rhs2.lo:
        return 1, dev2, rhs2
    if dev2.lo > rhs2.hi:
        return -1, dev2, rhs2
    return 0, dev, rhs


# ---------------------------------------------------------------------------
# Boundary location in floats


def _dev_band_f(kind: int, S: float, s_err: float, k_lo: float, k_hi: float,
                x: float) -> Tuple[float, float]:
    if kind == 0:
        return _band(S - s_err - x, S + s_err - x)
    L = math.log(x)
    if kind == 1:
        return _band(S - s_err - L - k_hi, S + s_err - L - k_lo)
    if kind == 2:
        t = math.log(L)
        return _band(S - s_err - t - k_hi, S + s_err - t - k_lo)
    if kind == 3:
        return _band(math.exp(k_lo + S - s_err) * L - 1.0,
                     math.exp(k_hi + S + s_err) * L - 1.0)
    return _band(math.exp(-k_hi - S - s_err) / L - 1.0,
                 math.exp(-k_lo - S + s_err) / L - 1.0)


def _rhs_f(row: BoundSpec, x: float) -> float:
    return row.rhs(LogPoint.from_x(x))


def _rightmost_root(g: Callable[[float], float], a: float, b: float,
                    samples: int = 129) -> Optional[float]:
    """Top of a width <= _XTOL bracket around the rightmost sign change
    of g on [a, b], or None when every sample has the same sign."""
    xs = np.linspace(a, b, samples)
    gs = [g(float(t)) for t in xs]
    for i in range(samples - 2, -1, -1):
        gi, gj = gs[i], gs[i + 1]
        if gi == 0.0 or gj == 0.0:
            return float(xs[i + 1])
        if (gi > 0.0) != (gj > 0.0):
            lo, hi = float(xs[i]), float(xs[i + 1])
            r = float(brentq(g, lo, hi, xtol=_XTOL, rtol=1e-15))
            return min(r + _XTOL, hi)
    return None


# ---------------------------------------------------------------------------
# Gap resolution


@dataclass
class _GapOutcome:
    violations: List[Violation] = field(default_factory=list)
    sup_fail: Optional[float] = None
    verified_from: Optional[float] = None
    inconclusive: List[float] = field(default_factory=list)


def _certify_subgaps(row: BoundSpec, K: Iv, S: float, s_err: float,
                     a: float, b: float, da: Iv, ra: Iv, db: Iv, rb: Iv,
                     max_iter: int = 4096):
    """Split [a, b] until every sub-gap certifies via the cross-edge
    comparison.  Returns unresolved cells and interior certain
    failures (both normally empty)."""
    stack = [(a, b, da, ra, db, rb)]
    cells: List[Tuple[float, float]] = []
    fails: List[Tuple[float, Iv, Iv]] = []
    iters = 0
    while stack:
        iters += 1
        xa, xb, dev_a, rhs_a, dev_b, rhs_b = stack.pop()
        if max(dev_a.hi, dev_b.hi) < min(rhs_a.lo, rhs_b.lo):
            continue
        narrow = (xb - xa) <= max(_XTOL, 8.0 * float(np.spacing(xb)))
        if narrow or iters > max_iter:
            if iters <= 4 * max_iter:
                da2, ra2 = _point_eval_mp(row, K, S, s_err, xa)
                db2, rb2 = _point_eval_mp(row, K, S, s_err, xb)
                if max(da2.hi, db2.hi) < min(ra2.lo, rb2.lo):
                    continue
            cells.append((xa, xb))
            continue
        m = 0.5 * (xa + xb)
        dm, rm = _point_eval(row, K, S, s_err, m)
        if dm.lo > rm.hi:
            fails.append((m, dm, rm))
            continue
        stack.append((xa, m, dev_a, rhs_a, dm, rm))
        stack.append((m, xb, dm, rm, dev_b, rhs_b))
    return cells, fails


def _resolve_gap(row: BoundSpec, K: Iv, gap: GapRecord) -> _GapOutcome:
    xl, xr = gap.x_left, gap.x_right
    S, s_err = gap.step_value, gap.step_err
    sl, devl, rhsl = _point_sign(row, K, S, s_err, xl)
    sr, devr, rhsr = _point_sign(row, K, S, s_err, xr)
    out = _GapOutcome()

    if sl < 0:
        out.violations.append(Violation(xl, devl, rhsl))
    if sr < 0:
        # Failure reaches the right edge; the next gap owns xr itself.
        vx = float(np.nextafter(xr, -math.inf))
        out.violations.append(Violation(vx, devr, rhsr))
        out.sup_fail = vx
        out.verified_from = xr
        return out

    kind = row.kernel_kind
    k_lo, k_hi = K.lo, K.hi

    def g_fail(t: float) -> float:
        return _dev_band_f(kind, S, s_err, k_lo, k_hi, t)[0] - _rhs_f(row, t)

    def g_hold(t: float) -> float:
        return _dev_band_f(kind, S, s_err, k_lo, k_hi, t)[1] - _rhs_f(row, t)

    if sl < 0:
        # Certain failure on the left, certain (or ambiguous) hold on the
        # right: the failing set ends inside this gap.
        r_f = _rightmost_root(g_fail, xl, xr)
        out.sup_fail = r_f if r_f is not None else min(xl + _XTOL, xr)
        if sr == 0:
            out.verified_from = xr
        else:
            r_h = _rightmost_root(g_hold, xl, xr)
            out.verified_from = r_h if r_h is not None else out.sup_fail
        out.verified_from = min(max(out.verified_from, out.sup_fail), xr)
        return out

    if sl == 0 or sr == 0:
        # An edge stays ambiguous under the constant enclosure with no
        # certain failure anywhere: report it and certify above it.
        if sr == 0:
            out.inconclusive.append(float(np.nextafter(xr, -math.inf)))
            out.verified_from = xr
        else:
            out.inconclusive.append(xl)
            r_h = _rightmost_root(g_hold, xl, xr)
            out.verified_from = min(r_h, xr) if r_h is not None else xl
        return out

    # Both edges certainly hold; the scan flagged the cross-edge
    # comparison. Certify the interior by splitting.
    cells, fails = _certify_subgaps(row, K, S, s_err, xl, xr,
                                    devl, rhsl, devr, rhsr)
    for m, dm, rm in fails:
        out.violations.append(Violation(m, dm, rm))
    if fails:
        top = max(m for m, _, _ in fails)
        r_f = _rightmost_root(g_fail, top, xr)
        out.sup_fail = r_f if r_f is not None else min(top + _XTOL, xr)
        r_h = _rightmost_root(g_hold, top, xr)
        vf = r_h if r_h is not None else out.sup_fail
        out.verified_from = min(max(vf, out.sup_fail), xr)
    if cells:
        out.inconclusive.extend(0.5 * (ca + cb) for ca, cb in cells)
        tops = max(cb for _, cb in cells)
        out.verified_from = max(out.verified_from or 0.0, min(tops, xr))
    return out


# ---------------------------------------------------------------------------
# Verification


def verify(claim: ClaimSpec, *, segment_size: int = DEFAULT_SEGMENT_SIZE,
           desk_max: int = DEFAULT_DESK_MAX, threads: int = 1,
           ) -> VerificationReport:
    """Scan the claim's window and certify where the claim holds.

    The claim fails at x only if it fails for every constant in the
    enclosure and every step value within the accumulated error bar;
    it is certified at x only under the mirrored condition.
    """
    t_start = time.perf_counter()
    row = _claim_row(claim.bound_id)
    want = _lhs_kind(row)
    if claim.lhs_kind != want:
        raise PntError(
            f"claim lhs_kind {claim.lhs_kind!r} does not match "
            f"{claim.bound_id!r} ({want!r})")
    lo, hi = claim.check_range
    eff_lo = max(float(lo), 2.0)
    eff_hi = float(hi)
    if eff_hi <= eff_lo:
        raise PntError(f"empty check range [{lo}, {hi}]")
    if eff_hi > row.validity_to:
        raise RangeGuardError(
            f"{claim.bound_id} is only claimed up to {row.validity_to}")
    K = _claim_constant(row)
    scl = ScanClaim(row.id, row.stream, row.kernel_kind, row.coeffs,
                    eff_lo, eff_hi, K.mid, 0.5 * K.width)
    raw = scan_claims(eff_lo, eff_hi, [scl], segment_size=segment_size,
                      desk_max=desk_max, threads=threads)[row.id]

    violations: List[Violation] = []
    sup_cands: List[float] = []
    vf_cands: List[float] = [eff_lo]
    inconclusive: List[float] = []

    for x, S, s_err in raw.violations_left:
        s, dev, rhs = _point_sign(row, K, S, s_err, x)
        if s < 0:
            violations.append(Violation(float(x), dev, rhs))
            sup_cands.append(float(x))
            vf_cands.append(float(x))
        else:
            # Flagged by the scan but not separable: keep it visible.
            inconclusive.append(float(x))
            vf_cands.append(float(x))

    for x, S, s_err in raw.violations_right:
        s, dev, rhs = _point_sign(row, K, S, s_err, x)
        vx = float(np.nextafter(x, -math.inf))
        if s < 0:
            violations.append(Violation(vx, dev, rhs))
            sup_cands.append(vx)
        else:
            inconclusive.append(vx)
        vf_cands.append(float(x))

    for gap in raw.attention:
        out = _resolve_gap(row, K, gap)
        violations.extend(out.violations)
        for v in out.violations:
            sup_cands.append(v.x)
            vf_cands.append(v.x)
        if out.sup_fail is not None:
            sup_cands.append(out.sup_fail)
        if out.verified_from is not None:
            vf_cands.append(out.verified_from)
        inconclusive.extend(out.inconclusive)

    violations.sort(key=lambda v: v.x)
    last_failure = max(sup_cands) if sup_cands else None
    verified_lo = min(max(vf_cands), eff_hi)
    inconclusive = sorted(set(inconclusive))

    wall_ms = (time.perf_counter() - t_start) * 1000.0
    return VerificationReport(
        claim=claim,
        verified_range=(verified_lo, eff_hi),
        points_checked=raw.points_checked,
        violations=violations,
        inconclusive=inconclusive,
        last_failure=last_failure,
        max_ratio=raw.max_ratio,
        argmax_x=raw.argmax_x,
        truncated=raw.truncated,
        wall_time_ms=wall_ms,
    )


# ---------------------------------------------------------------------------
# Crossover search


def _ceil_to_resolution(lf: float, resolution: float, attained: bool) -> float:
    res = Decimal(str(resolution))
    q = (Decimal(repr(lf)) / res).to_integral_value(rounding=ROUND_CEILING)
    thr = q * res
    if attained and float(thr) <= lf:
        thr = (q + 1) * res
    return float(thr)


def find_crossover(bound_id: str, *, search_range: Tuple[float, float] = (2.0, 1e5),
                   resolution: float = 0.1,
                   segment_size: int = DEFAULT_SEGMENT_SIZE,
                   desk_max: int = DEFAULT_DESK_MAX,
                   threads: int = 1) -> CrossoverResult:
    """Smallest grid point of the given resolution above every certain
    failure of the claim inside search_range.

    The reported threshold T satisfies: no violation exists in (T, hi],
    last_failure_x < T, and T - last_failure_x < resolution.  When the
    claim never fails on the window, a no-failure marker is returned
    with the margin 1 - max(dev/rhs) instead of a threshold.
    """
    if not resolution >= 1e-3:
        raise PntError(f"resolution must be >= 1e-3, got {resolution}")
    row = _claim_row(bound_id)
    lo, hi = search_range
    eff_lo = max(float(lo), 2.0)
    eff_hi = float(hi)
    if eff_hi <= eff_lo:
        raise PntError(f"empty search range [{lo}, {hi}]")
    K = _claim_constant(row)
    scl = ScanClaim(row.id, row.stream, row.kernel_kind, row.coeffs,
                    eff_lo, eff_hi, K.mid, 0.5 * K.width)
    raw = scan_claims(eff_lo, eff_hi, [scl], segment_size=segment_size,
                      desk_max=desk_max, threads=threads)[row.id]
    if raw.truncated:
        raise PntError(
            f"{bound_id}: violation cap exhausted; narrow the range")

    sup_cands: List[Tuple[float, bool]] = []
    stuck: List[float] = []
    for x, S, s_err in raw.violations_left:
        s, _, _ = _point_sign(row, K, S, s_err, x)
        if s < 0:
            sup_cands.append((float(x), True))
        else:
            stuck.append(float(x))
    for x, S, s_err in raw.violations_right:
        s, _, _ = _point_sign(row, K, S, s_err, x)
        vx = float(np.nextafter(x, -math.inf))
        if s < 0:
            sup_cands.append((vx, True))
        else:
            stuck.append(vx)
    for gap in raw.attention:
        out = _resolve_gap(row, K, gap)
        for v in out.violations:
            sup_cands.append((v.x, True))
        if out.sup_fail is not None:
            sup_cands.append((out.sup_fail, False))
        stuck.extend(out.inconclusive)

    if not sup_cands:
        if stuck:
            raise PntError(
                f"{bound_id}: unresolved comparisons near {stuck[:3]}; "
                "cannot certify a crossover")
        return CrossoverResult(bound_id, None, None, resolution,
                               no_failure=True,
                               margin=1.0 - raw.max_ratio)
    lf, attained = max(sup_cands)
    bad = [u for u in stuck if u > lf]
    if bad:
        raise PntError(
            f"{bound_id}: unresolved comparisons above the last failure "
            f"(near {bad[:3]}); cannot certify a crossover")
    thr = _ceil_to_resolution(lf, resolution, attained)
    return CrossoverResult(bound_id, lf, thr, resolution,
                           no_failure=False, margin=None)


# ---------------------------------------------------------------------------
# Piecewise coefficient table


#: Right endpoint (in L = log x) and printed ceiling of each row; the
#: final row extends the last ceiling out to the theta-side threshold.
_SUFFCOND_ROWS: Tuple[Tuple[float, float, bool], ...] = (
    (63.468, 0.75553, False),
    (151.106, 0.87158, False),
    (394.532, 0.94032, False),
    (1100.338, 0.97471, False),
    (3220.622, 0.99000, False),
    (9768.054, 0.99625, False),
    (30369.582, 0.99865, False),
    (30456.276, 0.99865, True),
)


@dataclass(frozen=True)
class PiecewiseTableRow:
    L_lo: float
    L_hi: float
    claimed: float
    computed_sup: Iv
    monotone: bool
    passes: bool
    theta: bool
    note: str = ""


def verify_piecewise_table(grid: int = 256) -> List[PiecewiseTableRow]:
    """Certify each row of the coefficient table: the multiplier is
    increasing across the row (checked on a grid), so its supremum sits
    at the right endpoint, where an interval evaluation must come in at
    or under the printed ceiling."""
    rows: List[PiecewiseTableRow] = []
    left = LOG_X19
    for L_hi, claimed, theta in _SUFFCOND_ROWS:
        Ls = np.linspace(left, L_hi, grid)
        vals = [suffcond_coefficient(LogPoint.from_L(float(t))) for t in Ls]
        bad = [i for i in range(len(vals) - 1) if vals[i + 1] <= vals[i]]
        monotone = not bad
        note = ""
        if bad:
            note = (f"not increasing near L = {Ls[bad[0]]:.3f}; "
                    "right-endpoint supremum not established")
        sup = suffcond_coefficient(LogPointIv.from_L(L_hi))
        passes = monotone and sup.hi <= claimed
        rows.append(PiecewiseTableRow(left, L_hi, claimed, sup, monotone,
                                      passes, theta, note))
        left = L_hi
    return rows


# ---------------------------------------------------------------------------
# Constants audit


@dataclass(frozen=True)
class AuditCheck:
    name: str
    passed: bool
    margin: float
    detail: str


def _pt_at(x: float) -> LogPointIv:
    return LogPointIv.from_L_interval(ilog(Iv.point(x)))


def audit_constants() -> List[AuditCheck]:
    """Certify every printed constant and consolidation step that the
    registry rows rest on.  All comparisons are interval evaluations;
    margin is the distance to the failing side."""
    checks: List[AuditCheck] = []

    blk = zero_sum_block(CONSTANTS, interval=True)
    checks.append(AuditCheck(
        "zero_sum_block_negative", blk.hi < 0.0, -blk.hi,
        f"block = [{blk.lo:.9f}, {blk.hi:.9f}]"))

    cap = CONSTANTS.consolidation_c
    worst = -math.inf
    corner = None
    for Lv in (LOG_X19, 50.0, 60.0, 80.0, 120.0, 200.0):
        for y in (1e7, 1e8, 1e10, 1e12):
            ratio = goldston_chain(LogPointIv.from_L(Lv), y).consolidation_ratio
            if ratio.hi > worst:
                worst = ratio.hi
                corner = (Lv, y)
    checks.append(AuditCheck(
        "consolidation_ratio_under_ceiling", worst <= cap, cap - worst,
        f"worst ratio hi = {worst:.9f} at L = {corner[0]:.4f}, "
        f"y = {corner[1]:.0e}; ceiling {cap}"))

    g_lo = thm1_implies_thm2_gap(Iv.point(30369.0))
    g_hi = thm1_implies_thm2_gap(Iv.point(30370.0))
    g_at = thm1_implies_thm2_gap(Iv.point(30369.582))
    ok = g_lo.hi < 0.0 < g_hi.lo and g_at.lo > 0.0
    checks.append(AuditCheck(
        "threshold_sign_change", ok, min(-g_lo.hi, g_hi.lo, g_at.lo),
        f"gap(30369) = [{g_lo.lo:.3e}, {g_lo.hi:.3e}], "
        f"gap(30370) = [{g_hi.lo:.3e}, {g_hi.hi:.3e}], "
        f"gap(30369.582) = [{g_at.lo:.3e}, {g_at.hi:.3e}]"))

    t_lo = thm1_implies_thm2_gap(Iv.point(30456.0), theta=True)
    t_hi = thm1_implies_thm2_gap(Iv.point(30457.0), theta=True)
    t_at = thm1_implies_thm2_gap(Iv.point(30456.276), theta=True)
    t_under = thm1_implies_thm2_gap(Iv.point(30456.256), theta=True)
    ok = t_lo.hi < 0.0 < t_hi.lo and t_at.lo > 0.0
    checks.append(AuditCheck(
        "threshold_sign_change_theta", ok,
        min(-t_lo.hi, t_hi.lo, t_at.lo),
        f"gap(30456) = [{t_lo.lo:.3e}, {t_lo.hi:.3e}], "
        f"gap(30457) = [{t_hi.lo:.3e}, {t_hi.hi:.3e}], "
        f"gap(30456.276) = [{t_at.lo:.3e}, {t_at.hi:.3e}]; the smaller "
        f"endpoint 30456.256 still fails: gap = "
        f"[{t_under.lo:.3e}, {t_under.hi:.3e}]"))

    turn_a = goldston_chain(_pt_at(2.002e38), 1e7).lemma32_turn
    turn_b = goldston_chain(_pt_at(2.004e38), 1e7).lemma32_turn
    ok = turn_a.lo > 0.0 and turn_b.hi < 0.0
    checks.append(AuditCheck(
        "loglog_coefficient_turning_point", ok, min(turn_a.lo, -turn_b.hi),
        f"turn(2.002e38) = [{turn_a.lo:.3e}, {turn_a.hi:.3e}], "
        f"turn(2.004e38) = [{turn_b.lo:.3e}, {turn_b.hi:.3e}]"))

    shift = CONSTANTS.loglog_1e19
    reg = registry()
    moi1 = reg["moi_1"]
    Ls = (50.0, 60.0, 70.0)
    V = np.vander(np.array(Ls), 3)
    vals = []
    for Lv in Ls:
        pt = LogPoint.from_L(Lv)
        vals.append(moi1_chain(pt, shift) * 8.0 * math.pi * math.exp(0.5 * Lv))
    a2, a1, a0 = np.linalg.solve(V, np.array(vals))
    tol = 1e-4
    err1 = abs(a1 + 3.33541)
    err0 = abs(a0 - 0.88612)
    ok = bool(abs(a2 - 3.0) <= tol and err1 <= tol and err0 <= tol)
    checks.append(AuditCheck(
        "collapsed_quadratic_coefficients", ok, float(tol - max(err1, err0)),
        f"8 pi sqrt(x) * chain = {a2:.10f} L^2 + {a1:.10f} L + {a0:.10f}; "
        f"printed -3.33541 and 0.88612 (moi_1 f coeff {moi1.coeffs[5]})"))

    t0v = T0(LogPointIv.from_L(LOG_X19)).value
    floor = 454161776.0
    checks.append(AuditCheck(
        "truncation_height_floor", t0v.lo > floor, t0v.lo - floor,
        f"T0(1e19) = [{t0v.lo:.5f}, {t0v.hi:.5f}] vs floor {floor:.0f}"))

    ll = ilog(ilog(Iv.point(1e19)))
    tr = truncation_interval(shift)
    ok = tr.lo <= ll.lo and ll.hi <= tr.hi
    checks.append(AuditCheck(
        "loglog_1e19_truncation", ok, min(ll.lo - tr.lo, tr.hi - ll.hi),
        f"loglog 1e19 = [{ll.lo:.12f}, {ll.hi:.12f}] inside "
        f"[{tr.lo:.12f}, {tr.hi:.12f}]"))

    # Mid-range consolidated constant: 3.16 * 1.95 * 8 pi / L^2 + 2.14 is
    # decreasing in L, so its supremum over L >= log 1e6 sits at the left
    # endpoint and must come in under the printed 2.95139.
    def midc(L: Iv) -> Iv:
        return 3.16 * 1.95 * 8.0 * IV_PI / L.square() + 2.14

    grid = [ilog(Iv.point(1e6)), Iv.point(20.0), Iv.point(30.0),
            Iv.point(LOG_X19)]
    sup_mid = midc(grid[0])
    decreasing = all(midc(grid[i + 1]).hi < midc(grid[i]).lo + 1e-12
                     for i in range(len(grid) - 1))
    ok = decreasing and sup_mid.hi <= CONSTANTS.rcal_midc
    checks.append(AuditCheck(
        "midrange_constant_consolidation", ok,
        CONSTANTS.rcal_midc - sup_mid.hi,
        f"sup at L = log 1e6: [{sup_mid.lo:.10f}, {sup_mid.hi:.10f}] vs "
        f"printed {CONSTANTS.rcal_midc}"))

    L19 = ilog(Iv.point(1e19))
    f22 = 2.0 * (L19.square() + 4.0 * L19 + 8.0) / L19.square()
    checks.append(AuditCheck(
        "tail_companion_factor", f22.hi <= 2.2, 2.2 - f22.hi,
        f"2 (L^2 + 4 L + 8)/L^2 at L = log 1e19: "
        f"[{f22.lo:.7f}, {f22.hi:.7f}] vs 2.2"))

    worst_m = math.inf
    worst_at = None
    for Lv in np.geomspace(LOG_X19, 30369.582, 64):
        m = suffcond_margin(LogPointIv.from_L(float(Lv)))
        if m.lo < worst_m:
            worst_m = m.lo
            worst_at = float(Lv)
    checks.append(AuditCheck(
        "sufficient_condition_margin", worst_m > 0.0, worst_m,
        f"min margin lo = {worst_m:.6f} at L = {worst_at:.3f} over "
        "64 grid points up to the threshold"))

    # The upper branch must dominate the chain it consolidates.  As
    # printed the chain reads the tail integral a touch small; the
    # dominance holds under that reading, and the corrected chain
    # overshoots the branch by a vanishing 0.8/(8 pi sqrt x).
    ok = True
    worst_d = math.inf
    for Lv in (LOG_X19, 50.0, 80.0, 150.0, 400.0, 1000.0):
        pt = LogPointIv.from_L(Lv)
        d = (rcal(pt) - moi2_chain_printed(pt, shift)) * (
            8.0 * IV_PI) * iexp(0.5 * pt.L)
        worst_d = min(worst_d, d.lo)
        ok = ok and d.lo >= 0.0
    pt19 = LogPointIv.from_L(LOG_X19)
    short = (moi2_chain(pt19, shift) - rcal(pt19)) * (
        8.0 * IV_PI) * iexp(0.5 * pt19.L)
    checks.append(AuditCheck(
        "upper_branch_dominates_printed_chain", ok, worst_d,
        f"min (branch - printed chain) * 8 pi sqrt x = {worst_d:.5f}; "
        f"corrected chain exceeds the branch by "
        f"[{short.lo:.5f}, {short.hi:.5f}] / (8 pi sqrt x) at 1e19"))

    # The mid-range branch against the same chain with its own loglog
    # shift; the grid stops just under the branch switch.
    ok = True
    worst_mid = math.inf
    for Lv in np.linspace(math.log(1e6), LOG_X19 - 1e-9, 32):
        pt = LogPointIv.from_L(float(Lv))
        d = (rcal(pt) - moi2_chain(pt, pt.LL)) * (
            8.0 * IV_PI) * iexp(0.5 * pt.L)
        worst_mid = min(worst_mid, d.lo)
        ok = ok and d.lo >= 0.0
    checks.append(AuditCheck(
        "midrange_branch_dominates_chain", ok, worst_mid,
        f"min (branch - chain) * 8 pi sqrt x = {worst_mid:.5f} over "
        "[1e6, 1e19)"))

    return checks


# ---------------------------------------------------------------------------
# Serialization


def crossover_to_dict(result: CrossoverResult) -> dict:
    return {
        "bound_id": result.bound_id,
        "last_failure_x": result.last_failure_x,
        "rounded_threshold": result.rounded_threshold,
        "resolution": result.resolution,
        "no_failure": result.no_failure,
        "margin": result.margin,
    }


def report_to_dict(report: VerificationReport,
                   crossover: Optional[CrossoverResult] = None,
                   include_timings: bool = False) -> dict:
    c = report.claim
    return {
        "claim": {
            "bound_id": c.bound_id,
            "lhs_kind": c.lhs_kind,
            "claimed_from": c.claimed_from,
            "check_range": [c.check_range[0], c.check_range[1]],
            "certified": report.certified,
        },
        "bound_id": c.bound_id,
        "verified_range": [report.verified_range[0], report.verified_range[1]],
        "points_checked": report.points_checked,
        "violations": [
            {"x": v.x, "lhs_lo": v.lhs.lo, "lhs_hi": v.lhs.hi,
             "rhs_lo": v.rhs.lo, "rhs_hi": v.rhs.hi}
            for v in report.violations
        ],
        "inconclusive": list(report.inconclusive),
        "last_failure": report.last_failure,
        "crossover": None if crossover is None else crossover_to_dict(crossover),
        "margins": {"max_ratio": report.max_ratio, "argmax_x": report.argmax_x},
        "wall_time_ms": report.wall_time_ms if include_timings else None,
    }


def report_json(report: VerificationReport,
                crossover: Optional[CrossoverResult] = None,
                include_timings: bool = False) -> str:
    return json.dumps(report_to_dict(report, crossover, include_timings),
                      indent=2) + "\n"


def violations_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bound_id", "x", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi"])
    for v in report.violations:
        w.writerow([report.claim.bound_id, repr(v.x), repr(v.lhs.lo),
                    repr(v.lhs.hi), repr(v.rhs.lo), repr(v.rhs.hi)])
    return buf.getvalue()

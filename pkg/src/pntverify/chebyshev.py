"""Chebyshev and Mertens step functions with tracked rounding error,
plus the streaming claim-scan engine.

Error model: every accumulated sum S carries the bound
    err(S) = 2 * ops * ulp(max running magnitude),
where ops counts floating-point additions into the stream.  This covers
both the compensated (numba) and the cumulative-sum (numpy) kernel
paths; see the kernel modules.  All streams here are monotone, so the
running magnitude is just |S| at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .backend import kernels
from .config import DEFAULT_DESK_MAX, DEFAULT_SEGMENT_SIZE, PntError, RangeGuardError, check_range
from . import primes

# Stream identifiers used by claims and the scan engine.
STREAM_PSI = "psi"
STREAM_THETA = "theta"
STREAM_LOGP_P = "logp_p"
STREAM_RECIP = "recip"
STREAM_LOGPROD = "logprod"

# |theta(t) - t| <= THETA_DEV_C * sqrt(t) on [1423, 1e19]; used for the
# truncation tails in estimate_E_B.
THETA_DEV_C = 1.95
THETA_DEV_LO = 1423.0
X19 = 1e19
LOGLOG_X19_TRUNC = 3.77847  # 5-decimal truncation of loglog(1e19), rounds down


@dataclass(frozen=True)
class ChebyshevPoint:
    x: float
    psi: float
    theta: float
    pi_count: int
    err_bound: float


@dataclass(frozen=True)
class MertensPoint:
    x: float
    sum_logp_over_p: float
    sum_recip: float
    log_prod: float
    err_bound: float


@dataclass(frozen=True)
class Psi1Point:
    x: float
    psi1: float
    err_bound: float


def _err(ops: int, magnitude: float) -> float:
    return 2.0 * ops * float(np.spacing(abs(magnitude) + 1e-300))


@dataclass
class _PointSums:
    x: float
    psi: float
    theta: float
    pi_count: int
    logp_p: float
    recip: float
    logprod: float
    event_count: int
    block_count: int

    def err(self, magnitude: float) -> float:
        return _err(self.event_count + self.block_count, magnitude)


def _stream_point(x: float, segment_size: int = DEFAULT_SEGMENT_SIZE,
                  desk_max: int = DEFAULT_DESK_MAX, threads: int = 1) -> _PointSums:
    """One pass over events n <= x accumulating all five sums."""
    if x < 2:
        raise PntError(f"need x >= 2, got {x}")
    check_range(x, desk_max)
    limit = int(math.floor(x))
    kern = kernels()
    psi = (0.0, 0.0)
    theta = (0.0, 0.0)
    logp_p = (0.0, 0.0)
    recip = (0.0, 0.0)
    logprod = (0.0, 0.0)
    pi_count = 0
    events = 0
    blocks = 0
    for n, lp, isp in primes.event_blocks(limit, segment_size, threads=threads):
        blocks += 1
        events += n.shape[0]
        nf = n.astype(np.float64)
        psi = kern.kahan_fold(lp, *psi)
        pv = nf[isp]
        plp = lp[isp]
        pi_count += int(pv.shape[0])
        theta = kern.kahan_fold(plp, *theta)
        logp_p = kern.kahan_fold(plp / pv, *logp_p)
        recip = kern.kahan_fold(1.0 / pv, *recip)
        logprod = kern.kahan_fold(np.log1p(-1.0 / pv), *logprod)
    return _PointSums(
        x=float(x), psi=psi[0], theta=theta[0], pi_count=pi_count,
        logp_p=logp_p[0], recip=recip[0], logprod=logprod[0],
        event_count=events, block_count=blocks,
    )


def chebyshev_at(x: float, segment_size: int = DEFAULT_SEGMENT_SIZE,
                 desk_max: int = DEFAULT_DESK_MAX) -> ChebyshevPoint:
    """psi(x), theta(x), pi(x) with the right-continuous convention."""
    sums = _stream_point(x, segment_size, desk_max)
    return ChebyshevPoint(
        x=float(x), psi=sums.psi, theta=sums.theta, pi_count=sums.pi_count,
        err_bound=sums.err(max(sums.psi, 1.0)),
    )


def mertens_at(x: float, segment_size: int = DEFAULT_SEGMENT_SIZE,
               desk_max: int = DEFAULT_DESK_MAX) -> MertensPoint:
    sums = _stream_point(x, segment_size, desk_max)
    mag = max(sums.logp_p, sums.recip, abs(sums.logprod), 1.0)
    return MertensPoint(
        x=float(x), sum_logp_over_p=sums.logp_p, sum_recip=sums.recip,
        log_prod=sums.logprod, err_bound=sums.err(mag),
    )


def psi1_at(x: float, segment_size: int = DEFAULT_SEGMENT_SIZE,
            desk_max: int = DEFAULT_DESK_MAX) -> Psi1Point:
    """psi_1(x) = sum over prime powers n <= x of log(p) * (x - n)."""
    if x < 2:
        raise PntError(f"need x >= 2, got {x}")
    check_range(x, desk_max)
    limit = int(math.floor(x))
    kern = kernels()
    acc = (0.0, 0.0)
    ops = 0
    xf = float(x)
    for n, lp, _ in primes.event_blocks(limit, segment_size):
        terms = lp * (xf - n.astype(np.float64))
        acc = kern.kahan_fold(terms, *acc)
        ops += n.shape[0] + 1
    # Each term carries a few ulps of its own rounding on top of the
    # summation model; 4 ops per event covers product, subtraction, sum.
    return Psi1Point(x=xf, psi1=acc[0], err_bound=_err(4 * ops, max(acc[0], 1.0)))


# ---------------------------------------------------------------------------
# Claim scanning


@dataclass
class ScanClaim:
    """What the kernel needs to check one inequality over a range.

    rhs(x) = sqrt(x) * (a L^2 + b L LL + c LL + d L + e)
             + (f L^2 + g L) / sqrt(x),  L = log x, LL = log L.

    kernel_kind selects the deviation (see claim_gap_check); stream
    names the step function whose prefix sums feed it.
    """

    claim_id: str
    stream: str
    kernel_kind: int
    coeffs: Tuple[float, float, float, float, float, float, float]
    x_lo: float
    x_hi: float
    const_mid: float = 0.0
    const_hw: float = 0.0


@dataclass
class GapRecord:
    """A gap [x_lo_eval, x_hi_eval] with constant step value S needing
    slow-path attention (possible violation or unseparated comparison)."""

    x_left: float
    x_right: float
    step_value: float
    step_err: float


@dataclass
class ClaimScanResult:
    claim_id: str
    points_checked: int = 0
    violations_left: List[Tuple[float, float, float]] = field(default_factory=list)
    violations_right: List[Tuple[float, float, float]] = field(default_factory=list)
    attention: List[GapRecord] = field(default_factory=list)
    max_ratio: float = 0.0
    argmax_x: float = 0.0
    final_step_err: float = 0.0
    truncated: bool = False

    VIOLATION_CAP = 20000


def _needed_streams(claims: Sequence[ScanClaim]) -> List[str]:
    seen: List[str] = []
    for cl in claims:
        if cl.stream not in seen:
            seen.append(cl.stream)
    return seen


def _stream_terms(stream: str, n: np.ndarray, lp: np.ndarray, isp: np.ndarray) -> np.ndarray:
    if stream == STREAM_PSI:
        return lp
    nf = n.astype(np.float64)
    if stream == STREAM_THETA:
        return np.where(isp, lp, 0.0)
    if stream == STREAM_LOGP_P:
        return np.where(isp, lp / nf, 0.0)
    if stream == STREAM_RECIP:
        return np.where(isp, 1.0 / nf, 0.0)
    if stream == STREAM_LOGPROD:
        return np.where(isp, np.log1p(-1.0 / nf), 0.0)
    raise PntError(f"unknown stream {stream!r}")


def scan_claims(
    lo: float,
    hi: float,
    claims: Sequence[ScanClaim],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    desk_max: int = DEFAULT_DESK_MAX,
    threads: int = 1,
) -> Dict[str, ClaimScanResult]:
    """Single streaming pass checking every claim at every jump and at
    the left limit of the following jump (step-interval semantics).

    Returns per-claim raw results; interval confirmation of violations
    and resolution of attention gaps is the verifier's job.
    """
    if lo < 2:
        raise PntError(f"scan range must start at 2 or above, got {lo}")
    if hi <= lo:
        raise PntError(f"need hi > lo, got [{lo}, {hi}]")
    check_range(hi, desk_max)
    kern = kernels()
    streams = _needed_streams(claims)
    results = {cl.claim_id: ClaimScanResult(claim_id=cl.claim_id) for cl in claims}
    # Claims are clipped to the requested scan window so callers can
    # scan a sub-range of a claim's validity interval.
    eff = {cl.claim_id: (max(cl.x_lo, lo), min(cl.x_hi, hi)) for cl in claims}

    limit = int(math.floor(hi))
    carries = {s: (0.0, 0.0) for s in streams}
    ops = 0
    blocks = 0

    prev: Optional[Tuple[np.ndarray, Dict[str, np.ndarray]]] = None

    def flush(block_n: np.ndarray, prefixes: Dict[str, np.ndarray], n_next: float,
              s_err_by_stream: Dict[str, float]) -> None:
        nf = block_n.astype(np.float64)
        for cl in claims:
            c_lo, c_hi = eff[cl.claim_id]
            if c_lo > c_hi or nf[0] > c_hi or n_next < c_lo:
                continue
            res = results[cl.claim_id]
            pref = prefixes[cl.stream]
            s_err = s_err_by_stream[cl.stream]
            viol_l, viol_r, attn, active, max_ratio, argmax_x = kern.claim_gap_check(
                nf, n_next, pref, cl.kernel_kind, cl.const_mid, cl.const_hw,
                *cl.coeffs, c_lo, c_hi, s_err,
            )
            res.points_checked += 2 * int(active.sum())
            if max_ratio > res.max_ratio:
                res.max_ratio = max_ratio
                res.argmax_x = argmax_x
            if viol_l.any() or viol_r.any() or attn.any():
                xr_raw = np.empty_like(nf)
                xr_raw[:-1] = nf[1:]
                xr_raw[-1] = n_next
                xl = np.maximum(nf, c_lo)
                xr = np.minimum(xr_raw, c_hi)
                cap = ClaimScanResult.VIOLATION_CAP
                for i in np.nonzero(viol_l)[0]:
                    if len(res.violations_left) < cap:
                        res.violations_left.append((float(xl[i]), float(pref[i]), s_err))
                    else:
                        res.truncated = True
                for i in np.nonzero(viol_r)[0]:
                    if len(res.violations_right) < cap:
                        res.violations_right.append((float(xr[i]), float(pref[i]), s_err))
                    else:
                        res.truncated = True
                for i in np.nonzero(attn)[0]:
                    if len(res.attention) < cap:
                        res.attention.append(GapRecord(
                            x_left=float(xl[i]), x_right=float(xr[i]),
                            step_value=float(pref[i]), step_err=s_err,
                        ))
                    else:
                        res.truncated = True

    for n, lp, isp in primes.event_blocks(limit, segment_size, threads=threads):
        blocks += 1
        new_prefixes: Dict[str, np.ndarray] = {}
        for s in streams:
            terms = _stream_terms(s, n, lp, isp)
            pref, s_end, c_end = kern.kahan_prefix(terms, *carries[s])
            new_prefixes[s] = pref
            carries[s] = (s_end, c_end)
        if prev is not None:
            prev_n, prev_pref = prev
            # ops here counts additions through the end of the held block,
            # the carry magnitude already includes the current one: both
            # err inputs are at least as large as at any gap being flushed.
            errs = {s: _err(ops, abs(carries[s][0]) + 1.0) for s in streams}
            flush(prev_n, prev_pref, float(n[0]), errs)
        prev = (n, new_prefixes)
        ops += n.shape[0] + 1
    if prev is not None:
        prev_n, prev_pref = prev
        errs = {s: _err(ops, abs(carries[s][0]) + 1.0) for s in streams}
        flush(prev_n, prev_pref, float(hi), errs)
    for cl in claims:
        results[cl.claim_id].final_step_err = _err(ops, abs(carries[cl.stream][0]) + 1.0)
    return results


# ---------------------------------------------------------------------------
# Mertens constants from truncated sums


@dataclass(frozen=True)
class ConstantEstimate:
    lo: float
    hi: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def halfwidth(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class MertensConstants:
    E_est: ConstantEstimate
    B_est: ConstantEstimate
    x_max: float


def _tail_beyond_1e19_logp() -> float:
    """Closed form of int_{1e19}^inf log t (log t - c) / (8 pi t^{3/2}) dt
    with c = 3.77847 <= loglog t there; dominates the true tail."""
    L = math.log(X19)
    c = LOGLOG_X19_TRUNC
    return (2 * L * L + (8 - 2 * c) * L + (16 - 4 * c)) / (8 * math.pi * math.sqrt(X19))


def _tail_beyond_1e19_recip() -> float:
    """Matching tail for the 1/p sum: integrand gains (L+1)/(t L^2) in
    place of 1/t, bounded by (1 + 1/L) * (L - c) / (8 pi t^{3/2})."""
    L = math.log(X19)
    c = LOGLOG_X19_TRUNC
    return (1 + 1 / L) * (2 * (L + 2) - 2 * c) / (8 * math.pi * math.sqrt(X19))


def estimate_E_B(x_max: float, segment_size: int = DEFAULT_SEGMENT_SIZE,
                 desk_max: int = DEFAULT_DESK_MAX, threads: int = 1) -> MertensConstants:
    """Certified intervals for the Mertens constants E and B.

    Partial summation gives, for the exact step sums at x,
        E = sum_{p<=x} log p / p - log x - (theta(x)-x)/x
            + int_x^inf (theta(t)-t)/t^2 dt,
        B = sum_{p<=x} 1/p - loglog x - (theta(x)-x)/(x log x)
            + int_x^inf (log t + 1)/(t^2 log^2 t) (theta(t)-t) dt.
    The tail integrals are enclosed two-sidedly by |theta(t)-t| <=
    1.95 sqrt(t) up to 1e19 and by the sqrt(t) log t (log t - loglog t)
    / (8 pi) deviation bound beyond.  Both enclosures assume the
    Riemann Hypothesis (as do all claims consuming E and B).
    """
    if x_max < 10**4:
        raise PntError(f"x_max must be >= 1e4 for the tail bounds, got {x_max}")
    sums = _stream_point(x_max, segment_size, desk_max, threads=threads)
    x = float(x_max)
    L = math.log(x)
    sq = math.sqrt(x)

    theta_dev = (sums.theta - x) / x
    fp_err = sums.err(max(sums.logp_p, sums.recip, sums.theta, 1.0)) * (1 + 1 / x) + \
        8 * float(np.spacing(L))

    tail_E = THETA_DEV_C * 2.0 * (1.0 / sq - 1.0 / math.sqrt(X19)) + _tail_beyond_1e19_logp()
    mid_E = sums.logp_p - L - theta_dev
    E_lo = mid_E - tail_E - fp_err
    E_hi = mid_E + tail_E + fp_err

    tail_B = THETA_DEV_C * (1 + 1 / L) / L * 2.0 * (1.0 / sq - 1.0 / math.sqrt(X19)) + \
        _tail_beyond_1e19_recip()
    mid_B = sums.recip - math.log(L) - theta_dev / L
    B_lo = mid_B - tail_B - fp_err
    B_hi = mid_B + tail_B + fp_err

    return MertensConstants(
        E_est=ConstantEstimate(E_lo, E_hi),
        B_est=ConstantEstimate(B_lo, B_hi),
        x_max=x,
    )

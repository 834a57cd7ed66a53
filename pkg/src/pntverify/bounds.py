"""Closed-form envelopes and the auxiliary functions behind them.

Every claimed envelope lives in a registry row keyed by a stable id.  A
row carries the polynomial coefficients of its right-hand side (the same
seven-tuple the scan kernels consume) plus enough metadata for the
verifier to pair it with the correct step function and deviation kernel.

The second half of the module holds the large-x machinery: the truncation
height T0, the smoothed bound on |psi(x) - x| / x, the sufficient-condition
coefficient, the chained intermediate bounds over zeros, the per-zero
remainder test, and the closed-form tail integrals used by the Mertens
envelopes.  All of it is written against LogPoint so it stays finite for
log x up to 40000 and beyond, and every formula accepts either plain
floats or Iv endpoints (directed rounding) through the same code path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

from .config import RangeGuardError
from .constants import CONSTANTS, ConstantsTable
from .interval import IV_PI, Iv, iexp, ilog, ilog1p
from .logdomain import (
    LOG_2PI,
    LOG_PI,
    LOG_X19,
    LogPoint,
    LogPointIv,
    log_one_plus,
    one_plus,
    perturbation,
    perturbation_iv,
)

Real = Union[float, Iv]
Point = Union[LogPoint, LogPointIv]

_LOG2 = math.log(2.0)
_A8 = 1.0 / (8.0 * math.pi)
_LOG_1E6 = math.log(1e6)

# exp() overflows just above this; used to decide whether a log-domain
# quantity still has a representable direct value.
_EXP_CAP = 709.78


def _sq(v: Real) -> Real:
    if isinstance(v, Iv):
        return v.square()
    return v * v


def _pert(pt: Point, log_coeff: float) -> Real:
    """log(x)/sqrt(x) scaled by exp(log_coeff), in the point's mode."""
    if isinstance(pt, LogPointIv):
        return perturbation_iv(pt, log_coeff)
    return perturbation(pt, log_coeff)


def _pi_for(pt: Point) -> Real:
    return IV_PI if isinstance(pt, LogPointIv) else math.pi


def _as_float(v: Real) -> float:
    return v.mid if isinstance(v, Iv) else v


# ---------------------------------------------------------------------------
# Registry


@dataclass(frozen=True)
class BoundSpec:
    """One claimed envelope.

    coeffs is (a, b, c, d, e, f, g) for
        rhs(x) = sqrt(x) (a L^2 + b L LL + c LL + d L + e)
                 + (f L^2 + g L) / sqrt(x),
    with L = log x and LL = log L.  normalization says what rhs() returns:
    "absolute" is the bound itself, "per_sqrt" divides by sqrt(x).  The
    per-sqrt form is always finite; the absolute form of a deviation row
    overflows to inf once sqrt(x) leaves double range.

    rhs() deliberately has no low-side guard: the crossover search
    evaluates envelopes below validity_from to find where they first hold.
    """

    id: str
    kind: str
    normalization: str
    coeffs: Tuple[float, float, float, float, float, float, float]
    validity_from: float
    validity_to: float = math.inf
    kernel_kind: int = 0
    stream: str = "psi"
    const_name: str = ""
    note: str = ""
    fn: Optional[Callable[[Point], Real]] = None

    def rhs(self, pt: Point) -> Real:
        if self.fn is not None:
            return self.fn(pt)
        value = 0.0
        sqrt_part = self._sqrt_poly(pt)
        if sqrt_part is not None:
            value = value + iexp(0.5 * pt.L) * sqrt_part
        inv_part = self._inv_poly(pt)
        if inv_part is not None:
            value = value + inv_part * iexp(-0.5 * pt.L)
        return value

    def rhs_per_sqrt(self, pt: Point) -> Real:
        """The bound divided by sqrt(x); finite for any L."""
        if self.fn is not None:
            return self.fn(pt) * iexp(-0.5 * pt.L)
        value = 0.0
        sqrt_part = self._sqrt_poly(pt)
        if sqrt_part is not None:
            value = value + sqrt_part
        inv_part = self._inv_poly(pt)
        if inv_part is not None:
            value = value + inv_part * iexp(-pt.L)
        return value

    def _sqrt_poly(self, pt: Point) -> Optional[Real]:
        a, b, c, d, e, _, _ = self.coeffs
        if a == b == c == d == e == 0.0:
            return None
        L, LL = pt.L, pt.LL
        return (a * L + b * LL + d) * L + c * LL + e

    def _inv_poly(self, pt: Point) -> Optional[Real]:
        _, _, _, _, _, f, g = self.coeffs
        if f == g == 0.0:
            return None
        return (f * pt.L + g) * pt.L


# The ids below are shared with the CLI and the verifier; renaming one is
# a breaking change.
CLAIM_IDS = (
    "schoenfeld_a",
    "schoenfeld_b",
    "schoenfeld_c",
    "thm1",
    "thm2_psi",
    "thm2_theta",
    "buthe_psi",
    "buthe_theta",
    "moi_1",
    "moi_2",
    "moi_3",
    "moi_4",
)


def _theta0_fn(pt: Point) -> Real:
    # 1.02 / ((x - 1) log x), written as exp(-L) / (1 - exp(-L)) / L so it
    # underflows cleanly instead of forming x - 1.
    inv_x = iexp(-pt.L)
    return CONSTANTS.theta0_c * inv_x / (one_plus(-inv_x) * pt.L)


def _rcal_fn(pt: Point) -> Real:
    return rcal(pt)


def _nt_envelope_fn(pt: Point) -> Real:
    return nt_envelope(pt)


def _nt_upper_fn(pt: Point) -> Real:
    pi = _pi_for(pt)
    return iexp(pt.L) * pt.L / (2.0 * pi)


def _skewes_tail_fn(pt: Point) -> Real:
    pi = _pi_for(pt)
    return pt.L * iexp(-pt.L) / pi


def registry() -> "dict[str, BoundSpec]":
    b = 1.0 / (2.0 * math.pi)
    g3 = 3.0 * _A8
    rows = [
        BoundSpec("schoenfeld_a", "psi-deviation", "absolute",
                  (_A8, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0), 2.0,
                  note="sqrt(x) log x (log x / 8pi + 2)"),
        BoundSpec("schoenfeld_b", "psi-deviation", "absolute",
                  (_A8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0), 73.2,
                  note="sqrt(x) (log x)^2 / 8pi"),
        BoundSpec("schoenfeld_c", "psi-deviation", "absolute",
                  (_A8, 0.0, 0.0, -2.0 * _A8, 0.0, 0.0, 0.0), 2.3e9,
                  note="sqrt(x) log x (log x - 2) / 8pi"),
        BoundSpec("thm1", "psi-deviation", "absolute",
                  (_A8, -b, -1.465, 1.2325, 0.0, 0.0, 0.0), 11.0,
                  note="sqrt(x) log x (log x / 8pi"
                       " - (1/2pi + 1.465/log x) log log x + 1.2325)"),
        BoundSpec("thm2_psi", "psi-deviation", "absolute",
                  (_A8, -_A8, 0.0, 0.0, 0.0, 0.0, 0.0), 101.0,
                  note="sqrt(x) log x (log x - log log x) / 8pi"),
        BoundSpec("thm2_theta", "theta-deviation", "absolute",
                  (_A8, -_A8, 0.0, 0.0, 0.0, 0.0, 0.0), 2657.0,
                  stream="theta",
                  note="sqrt(x) log x (log x - log log x) / 8pi"),
        BoundSpec("buthe_psi", "psi-deviation", "absolute",
                  (0.0, 0.0, 0.0, 0.0, 0.94, 0.0, 0.0), 11.0, 1e19,
                  note="0.94 sqrt(x), checked range tops out at 1e19"),
        BoundSpec("buthe_theta", "theta-deviation", "absolute",
                  (0.0, 0.0, 0.0, 0.0, 1.95, 0.0, 0.0), 1423.0, 1e19,
                  stream="theta",
                  note="1.95 sqrt(x), checked range tops out at 1e19"),
        BoundSpec("moi_1", "mertens-logp", "absolute",
                  (0.0, 0.0, 0.0, 0.0, 0.0, g3, 0.0), 43.1,
                  kernel_kind=1, stream="logp_p", const_name="E",
                  note="|sum log p / p - log x - E| <= 3 (log x)^2 / 8pi sqrt(x)"),
        BoundSpec("moi_2", "mertens-recip", "absolute",
                  (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, g3), 24.4,
                  kernel_kind=2, stream="recip", const_name="B",
                  note="|sum 1/p - log log x - B| <= 3 log x / 8pi sqrt(x)"),
        BoundSpec("moi_3", "mertens-prod", "absolute",
                  (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, g3), 23.8,
                  kernel_kind=3, stream="logprod", const_name="C",
                  note="|e^C log x prod (1 - 1/p) - 1| <= 3 log x / 8pi sqrt(x)"),
        BoundSpec("moi_4", "mertens-prod", "absolute",
                  (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, g3), 24.2,
                  kernel_kind=4, stream="logprod", const_name="C",
                  note="|e^-C / log x prod (1 - 1/p)^-1 - 1|"
                       " <= 3 log x / 8pi sqrt(x)"),
        # Auxiliary rows: not claims over step functions, but bound
        # expressions other modules evaluate through the same registry.
        BoundSpec("nt_envelope", "auxiliary", "absolute",
                  (0.0,) * 7, 2.0 * math.pi, fn=_nt_envelope_fn,
                  note="min(0.28 log T, 0.1038 log T"
                       " + 0.2573 log log T + 9.3675); L = log T"),
        BoundSpec("nt_upper", "auxiliary", "absolute",
                  (0.0,) * 7, 2.0 * math.pi, 1e300, fn=_nt_upper_fn,
                  note="T log T / 2pi; L = log T"),
        BoundSpec("skewes_tail", "auxiliary", "absolute",
                  (0.0,) * 7, 1.0, fn=_skewes_tail_fn,
                  note="log T / (pi T) dominates sum over 1/gamma^2"
                       " above T; L = log T"),
        BoundSpec("theta0", "auxiliary", "absolute",
                  (0.0,) * 7, 1.0 + 1e-9, fn=_theta0_fn,
                  note="1.02 / ((x - 1) log x) dominates the prime"
                       " product tail beyond x"),
        BoundSpec("rcal", "auxiliary", "absolute",
                  (0.0,) * 7, 1e6, fn=_rcal_fn,
                  note="piecewise envelope feeding the product claims:"
                       " 2.95139 log x / 8pi sqrt(x) below 1e19,"
                       " (3(log x - 3.37784) + 4) / 8pi sqrt(x) above"),
    ]
    out = {}
    for row in rows:
        if row.id in out:
            raise ValueError(f"duplicate registry id {row.id}")
        out[row.id] = row
    return out


def claim_rows() -> "list[BoundSpec]":
    reg = registry()
    return [reg[cid] for cid in CLAIM_IDS]


# ---------------------------------------------------------------------------
# Truncation height and smoothed deviation bound


@dataclass(frozen=True)
class T0Result:
    """log T0 always; the direct value only while exp() can represent it."""

    log_value: Real
    value: Optional[Real]


def _require_large(pt: Point, floor: float = LOG_X19) -> None:
    lo = pt.L.lo if isinstance(pt, LogPointIv) else pt.L
    if lo < floor - 1e-9:
        raise RangeGuardError(
            f"log x = {lo} below validity floor {floor}"
        )


def T0(pt: Point) -> T0Result:
    """Truncation height pi sqrt(x)/log x * (1 + t1)^-1 * ((1 + t2)^2 + 1)
    with t1 = log x / (2 pi sqrt(x)), t2 = log x / (pi sqrt(x)).

    (1 + t2)^2 + 1 = 2 (1 + t2 + t2^2/2), so the whole thing lives in the
    log domain as a sum of exactly-representable pieces plus log1p calls
    that vanish when the perturbations underflow.
    """
    _require_large(pt)
    t1 = _pert(pt, -LOG_2PI)
    t2 = _pert(pt, -LOG_PI)
    log_t0 = (
        LOG_PI + 0.5 * pt.L - pt.LL - log_one_plus(t1)
        + _LOG2 + log_one_plus(t2 + 0.5 * _sq(t2))
    )
    hi = log_t0.hi if isinstance(log_t0, Iv) else log_t0
    value = iexp(log_t0) if hi < _EXP_CAP else None
    return T0Result(log_t0, value)


def zero_sum_block(constants: ConstantsTable = CONSTANTS,
                   interval: bool = False) -> Real:
    """omega1 + (8 log H1 + 4)/H1 - (log(H1/2pi))^2 / 2pi.

    Negative: the omega1 ledger plus the counting correction sits well
    below the window the squared log term removes.
    """
    h1 = constants.H1
    if interval:
        pi = IV_PI
        log_h1 = ilog(Iv.point(h1))
        log_h1_2pi = ilog(Iv.point(h1) / (2.0 * pi))
        return (constants.omega1 + (8.0 * log_h1 + 4.0) / h1
                - log_h1_2pi.square() / (2.0 * pi))
    log_h1 = math.log(h1)
    log_h1_2pi = math.log(h1 / (2.0 * math.pi))
    return (constants.omega1 + (8.0 * log_h1 + 4.0) / h1
            - log_h1_2pi * log_h1_2pi / (2.0 * math.pi))


def smoothed_psi_bound(pt: Point,
                       constants: ConstantsTable = CONSTANTS) -> Real:
    """Bound on |psi(x) - x| / x for x >= 1e19.

    log x/(2 pi sqrt x) + (log 2pi - log(1 - x^-2)/2)/x
    + x^-1/2 (1 + t1) ((log(T0/2pi))^2/2pi + log T0/(pi T0) + block).
    """
    _require_large(pt)
    pi = _pi_for(pt)
    t1 = _pert(pt, -LOG_2PI)
    inv_x = iexp(-pt.L)
    inv_x_sq = iexp(-2.0 * pt.L)
    term2 = (LOG_2PI - 0.5 * ilog1p(-inv_x_sq)) * inv_x
    lt0 = T0(pt).log_value
    block = zero_sum_block(constants, interval=isinstance(pt, LogPointIv))
    z = (_sq(lt0 - LOG_2PI) / (2.0 * pi)
         + lt0 * iexp(-lt0) / pi
         + block)
    return t1 + term2 + iexp(-0.5 * pt.L) * one_plus(t1) * z


def suffcond_coefficient(pt: Point) -> Real:
    """Multiplier of log x in the sufficient condition
    log x - log log x - 4 >= c(L) log x; increases toward 1 from below."""
    _require_large(pt)
    t1 = _pert(pt, -LOG_2PI)
    lt0 = T0(pt).log_value
    return 4.0 * one_plus(t1) * _sq((lt0 - LOG_2PI) / pt.L)


def suffcond_margin(pt: Point) -> Real:
    """log x - log log x - 4 - c(L) log x; nonnegative where the
    sufficient condition holds."""
    return pt.L - pt.LL - 4.0 - suffcond_coefficient(pt) * pt.L


# ---------------------------------------------------------------------------
# Chained bounds over zeros


@dataclass(frozen=True)
class GoldstonChain:
    """Intermediate values of the truncated-sum argument, sqrt(x)-normalized.

    count_term + tail_term + recip_term = lemma31_rhs.  consolidated is
    sqrt(x)/(2y) + 1.465 log y; consolidation_ratio is
    (lemma31_rhs + 2.84/sqrt(x)) / log y, which must stay below 1.465 for
    the consolidation step to be valid.  The lemma32 fields cover the
    final truncated-sum bound: lhs is (log(sqrt x/(2 pi log x)))^2 / 2pi,
    rhs is (log x/2pi)(log x/4 - log log x), coefficient is the factor of
    log log x whose growth the comparison rests on, and turn is positive
    exactly while that coefficient is still increasing in L.
    """

    count_term: Real
    tail_term: Real
    recip_term: Real
    lemma31_rhs: Real
    consolidated: Real
    consolidation_ratio: Real
    lemma32_lhs: Real
    lemma32_rhs: Real
    lemma32_coefficient: Real
    lemma32_turn: Real


def goldston_chain(pt: Point, y: Real,
                   constants: ConstantsTable = CONSTANTS) -> GoldstonChain:
    y_lo = y.lo if isinstance(y, Iv) else y
    if y_lo < constants.H1 - 1e-6:
        raise RangeGuardError(f"y = {y_lo} below floor {constants.H1}")
    pi = _pi_for(pt)
    interval = isinstance(pt, LogPointIv)
    if interval and not isinstance(y, Iv):
        y = Iv.point(float(y))
    log_y = ilog(y)
    c = constants.goldston_c
    count_term = c * log_y / pi
    tail_term = 2.0 * iexp(1.5 * ilog1p(1.0 / y)) * log_y / pi
    recip_term = c * _sq(log_y - LOG_2PI) / (pi * y)
    lemma31 = count_term + tail_term + recip_term
    sqrt_x = iexp(0.5 * pt.L)
    consolidated = sqrt_x / (2.0 * y) + constants.consolidation_c * log_y
    ratio = (lemma31 + 2.84 * iexp(-0.5 * pt.L)) / log_y

    L, LL = pt.L, pt.LL
    lemma32_lhs = _sq(0.5 * L - LOG_2PI - LL) / (2.0 * pi)
    lemma32_rhs = (L / (2.0 * pi)) * (0.25 * L - LL)
    coeff = 1.0 + LOG_2PI / LL - _sq(LOG_2PI + LL) / (L * LL)
    turn = ((LOG_2PI + LL) * ((LOG_2PI + LL) * (LL + 1.0) - 2.0 * LL)
            - LOG_2PI * L)
    return GoldstonChain(count_term, tail_term, recip_term, lemma31,
                         consolidated, ratio, lemma32_lhs, lemma32_rhs,
                         coeff, turn)


def w_rho_values(gamma: float, u: float) -> Tuple[float, float]:
    """|w_rho| and its claimed ceiling 2.6 u (1 + 2/|rho|) for rho = 1/2
    + i gamma, where w_rho = ((1+u)^(rho+1) - 1 - (rho+1)u)/(u rho (rho+1))
    with the x power already cancelled.

    (1+u)^(rho+1) = e^w with w = (rho+1) log1p(u).  The numerator is
    rewritten as (e^w - 1 - w) + (rho+1)(log1p(u) - u): both brackets are
    tiny differences that a direct evaluation would destroy, so each gets
    its own series once the arguments are small enough.
    """
    if not 0.0 < u <= 1e-7:
        raise RangeGuardError(f"u = {u} outside (0, 1e-7]")
    if gamma < 14.0:
        raise RangeGuardError(f"gamma = {gamma} below first ordinate")
    rho = complex(0.5, gamma)
    rho1 = rho + 1.0
    lg = math.log1p(u)
    w = rho1 * lg
    if abs(w) < 0.05:
        w2 = w * w
        bracket1 = w2 * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w * (
            1.0 / 120.0 + w / 720.0))))
    else:
        bracket1 = cmath.exp(w) - 1.0 - w
    # log1p(u) - u = -u^2/2 + u^3/3 - u^4/4 + ..., u <= 1e-7 so three
    # terms leave a remainder below 1e-36 relative.
    lg_minus_u = u * u * (-0.5 + u * (1.0 / 3.0 - 0.25 * u))
    num = bracket1 + rho1 * lg_minus_u
    w_norm = num / (u * rho * rho1)
    bound = 2.6 * u * (1.0 + 2.0 / abs(rho))
    return abs(w_norm), bound


def w_rho_bound_check(gamma: float, u: float) -> bool:
    wabs, bound = w_rho_values(gamma, u)
    return wabs <= bound


# ---------------------------------------------------------------------------
# Closed-form tails for the Mertens envelopes


def tail_log_sq(pt: Point) -> Real:
    """Integral over (x, inf) of (log t)^2 t^(-3/2) dt
    = 2 ((log x)^2 + 4 log x + 8) / sqrt(x)."""
    L = pt.L
    return 2.0 * ((L + 4.0) * L + 8.0) * iexp(-0.5 * L)


def tail_log(pt: Point) -> Real:
    """Integral over (x, inf) of log t * t^(-3/2) dt = 2 (log x + 2) / sqrt(x)."""
    return 2.0 * (pt.L + 2.0) * iexp(-0.5 * pt.L)


def tail_plain(pt: Point) -> Real:
    """Integral over (x, inf) of t^(-3/2) dt = 2 / sqrt(x)."""
    return 2.0 * iexp(-0.5 * pt.L)


def moi1_tail(pt: Point, shift: float) -> Real:
    """Integral over (x, inf) of log t (log t - shift) / (8 pi t^(3/2)) dt
    = (2 L^2 + (8 - 2 shift) L + 16 - 4 shift) / (8 pi sqrt x)."""
    pi = _pi_for(pt)
    L = pt.L
    poly = (2.0 * L + (8.0 - 2.0 * shift)) * L + (16.0 - 4.0 * shift)
    return poly * iexp(-0.5 * L) / (8.0 * pi)


def moi2_tail(pt: Point, shift: float) -> Real:
    """Integral over (x, inf) of (log t - shift) t^(-3/2) dt
    = 2 (log x + 2 - shift) / sqrt(x)."""
    return 2.0 * (pt.L + 2.0 - shift) * iexp(-0.5 * pt.L)


def moi1_chain(pt: Point, shift: Real) -> Real:
    """Boundary term log x (log x - shift)/(8 pi sqrt x) plus the matching
    tail integral; collapses to (3 L^2 - 3.33541 L + 0.88612)/(8 pi sqrt x)
    at shift = 3.77847."""
    pi = _pi_for(pt)
    L = pt.L
    poly = L * (L - shift) + (2.0 * L + (8.0 - 2.0 * shift)) * L + (
        16.0 - 4.0 * shift)
    return poly * iexp(-0.5 * L) / (8.0 * pi)


def moi2_chain(pt: Point, shift: Real) -> Real:
    """(L - shift)/(8 pi sqrt x) + (1 + 1/L) * integral of
    (log t - shift) t^(-3/2) / 8pi, with the integral evaluated exactly."""
    pi = _pi_for(pt)
    L = pt.L
    poly = (L - shift) + one_plus(1.0 / L) * 2.0 * (L + 2.0 - shift)
    return poly * iexp(-0.5 * L) / (8.0 * pi)


def moi2_chain_printed(pt: Point, shift: Real) -> Real:
    """The same chain as it appears in print: 3 (L - shift) + 2 (2 -
    (shift - 1)/L), which traces back to reading the tail integral as
    2 (L + 1 - shift)/sqrt(x) instead of 2 (L + 2 - shift)/sqrt(x).  Kept
    so the audit can show the final envelope holds under either reading."""
    pi = _pi_for(pt)
    L = pt.L
    poly = 3.0 * (L - shift) + 2.0 * (2.0 - (shift - 1.0) / L)
    return poly * iexp(-0.5 * L) / (8.0 * pi)


def rcal(pt: Point, constants: ConstantsTable = CONSTANTS) -> Real:
    """Piecewise envelope on |sum 1/p - log log x - B| for x >= 1e6:
    2.95139 L / (8 pi sqrt x) below 1e19, (3 (L - 3.37784) + 4) /
    (8 pi sqrt x) from 1e19 on.  An interval straddling the split gets the
    hull of both branches (the function jumps there)."""
    lo = pt.L.lo if isinstance(pt, LogPointIv) else pt.L
    hi = pt.L.hi if isinstance(pt, LogPointIv) else pt.L
    if lo < _LOG_1E6 - 1e-9:
        raise RangeGuardError(f"log x = {lo} below validity floor {_LOG_1E6}")
    pi = _pi_for(pt)
    inv_sqrt = iexp(-0.5 * pt.L)
    below = constants.rcal_midc * pt.L * inv_sqrt / (8.0 * pi)
    above = (3.0 * (pt.L - constants.rcal_shift) + 4.0) * inv_sqrt / (8.0 * pi)
    if hi < LOG_X19:
        return below
    if lo >= LOG_X19:
        return above
    return Iv(min(below.lo, above.lo), max(below.hi, above.hi))


def nt_envelope(pt: Point, constants: ConstantsTable = CONSTANTS) -> Real:
    """min(0.28 log T, 0.1038 log T + 0.2573 log log T + 9.3675) with
    L = log T; the two arms cross far above any zero table."""
    c0, c1, c2, c3 = constants.NT_c
    first = c0 * pt.L
    second = c1 * pt.L + c2 * pt.LL + c3
    if isinstance(pt, LogPointIv):
        return Iv(min(first.lo, second.lo), min(first.hi, second.hi))
    return min(first, second)


def nt_main_term(T: float) -> float:
    """T/(2 pi) log(T/(2 pi e)) + 7/8, the smooth zero-count approximation."""
    return T / (2.0 * math.pi) * (math.log(T / (2.0 * math.pi)) - 1.0) + 0.875


@dataclass(frozen=True)
class CorollaryTails:
    """Everything the Mertens-product envelope rests on, absolute units."""

    tail_log_sq: Real
    tail_log: Real
    tail_plain: Real
    moi1_chain: Real
    moi2_chain: Real
    moi2_chain_printed: Real
    theta0: Real
    rcal: Real
    product_chain: Real
    envelope_moi1: Real
    envelope_moi2: Real


def corollary_tails(pt: Point,
                    constants: ConstantsTable = CONSTANTS) -> CorollaryTails:
    lo = pt.L.lo if isinstance(pt, LogPointIv) else pt.L
    if lo < _LOG_1E6 - 1e-9:
        raise RangeGuardError(f"log x = {lo} below validity floor {_LOG_1E6}")
    pi = _pi_for(pt)
    shift = constants.loglog_1e19
    th0 = _theta0_fn(pt)
    r = rcal(pt, constants)
    chain = th0 + r + constants.exp_chain_c * _sq(th0 + r)
    inv_sqrt = iexp(-0.5 * pt.L)
    return CorollaryTails(
        tail_log_sq=tail_log_sq(pt),
        tail_log=tail_log(pt),
        tail_plain=tail_plain(pt),
        moi1_chain=moi1_chain(pt, shift),
        moi2_chain=moi2_chain(pt, shift),
        moi2_chain_printed=moi2_chain_printed(pt, shift),
        theta0=th0,
        rcal=r,
        product_chain=chain,
        envelope_moi1=3.0 * _sq(pt.L) * inv_sqrt / (8.0 * pi),
        envelope_moi2=3.0 * pt.L * inv_sqrt / (8.0 * pi),
    )


# ---------------------------------------------------------------------------
# Crossover thresholds between envelope families


def thm1_implies_thm2_gap(L: Real, constants: ConstantsTable = CONSTANTS,
                          theta: bool = False) -> Real:
    """1/2pi + 1.465/L - 1.2325/log L - 1/8pi, the quantity whose sign
    decides where the second envelope family subsumes the first.  With
    theta=True the alpha corrections for psi - theta are subtracted (the
    x^(1/6) term is dropped; it only shrinks the gap by an amount that
    underflows at these heights)."""
    interval = isinstance(L, Iv)
    pi = IV_PI if interval else math.pi
    c = constants.consolidation_c
    if theta:
        c = c - constants.alpha1
    return (1.0 / (2.0 * pi) + c / L
            - constants.thm1_c / ilog(L) - 1.0 / (8.0 * pi))

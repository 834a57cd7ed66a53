"""Pure-numpy implementations of the hot kernels.

This is the fallback path used when numba is unavailable or when
PNTVERIFY_BACKEND=numpy is set.  Each function here has a numba twin in
_kernels_numba.py with the same signature and the same mathematical
contract.  Results agree within the tracked error bounds, but are not
required to be bit-identical across backends (they are bit-identical
across runs and thread counts within one backend).
"""

from __future__ import annotations

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1, Dekker split constant
_EPS = 2.220446049250313e-16  # 2**-52


def _sp(x):
    """Upper bound on the ulp spacing at |x|; shared with the numba twin."""
    return np.abs(x) * _EPS + 1e-300

# 2*pi as a head/tail pair; the tail is the next 53 bits of the binary
# expansion, so PI2_HI + PI2_LO carries ~107 bits of 2*pi.
PI2_HI = 6.283185307179586
PI2_LO = 2.4492935982947064e-16


def sieve_odd_segment(start: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Mark odd composites in [start, hi).

    start must be odd, hi > start.  base_primes holds the odd primes up
    to sqrt(hi).  Returns a bool array over the odd integers start,
    start+2, ... < hi; True means composite.
    """
    m = (hi - start + 1) // 2
    marks = np.zeros(m, dtype=np.bool_)
    for p in base_primes:
        p = int(p)
        q = p * p
        if q >= hi:
            break
        if q < start:
            q = ((start + p - 1) // p) * p
            if q % 2 == 0:
                q += p
        marks[(q - start) // 2::p] = True
    return marks


def kahan_prefix(values: np.ndarray, s: float, c: float):
    """Running sum of `values` continuing from carry (s, c).

    Returns (prefix, s_end, c_end) where prefix[i] is the sum after
    values[i].  The numpy path uses a plain cumulative sum (sequential
    recursive summation); its rounding error is covered by the shared
    model of 2 ulp of the running magnitude per operation, which is what
    callers track.  The compensation slot is unused here and returned
    as 0.0 so the carry protocol matches the numba twin.
    """
    prefix = s + np.cumsum(values)
    if prefix.size:
        return prefix, float(prefix[-1]), 0.0
    return prefix, s, 0.0


def kahan_fold(values: np.ndarray, s: float, c: float):
    """Fold `values` into the carry (s, c) without materialising prefixes."""
    prefix, s_end, c_end = kahan_prefix(values, s, c)
    return s_end, c_end


def claim_gap_check(
    n: np.ndarray,
    n_next: float,
    prefix: np.ndarray,
    kernel_kind: int,
    const_mid: float,
    const_hw: float,
    a: float,
    b: float,
    c: float,
    d: float,
    e: float,
    f: float,
    g: float,
    x_lo: float,
    x_hi: float,
    s_err: float,
):
    """Check one claim over the inter-jump gaps defined by a block of events.

    n[i] is an event position, prefix[i] the step-function value just
    after it; the gap i runs from n[i] to n[i+1] (n_next closes the last
    one).  Each gap is clipped to [x_lo, x_hi] and checked at both ends
    against  rhs(x) = sqrt(x)*(a L^2 + b L LL + c LL + d L + e)
                      + (f L^2 + g L)/sqrt(x),  L = log x, LL = log L.

    kernel_kind selects the deviation:
      0: |S - x|                    1: |S - log x - K|
      2: |S - loglog x - K|         3: |exp(K + S) * log x - 1|
      4: |exp(-K - S) / log x - 1|
    with K = const_mid, whose half-width const_hw widens the tolerance.

    Returns (viol_l, viol_r, attn, active, max_ratio, argmax_x):
    certain violations at the left (post-jump) and right (pre-jump)
    evaluation points, gaps needing slow-path attention, the mask of
    gaps overlapping the range, and the largest dev/rhs ratio seen.
    """
    m = n.shape[0]
    xr_raw = np.empty(m, dtype=np.float64)
    if m > 1:
        xr_raw[:-1] = n[1:]
    xr_raw[-1] = n_next

    xl = np.maximum(n, x_lo)
    xr = np.minimum(xr_raw, x_hi)
    # The step interval is half-open at its right end: clipping must not
    # degenerate to the single excluded point x = n_next, where the held
    # value is only a left limit.
    active = (xl <= xr) & (xl < xr_raw)

    viol_l = np.zeros(m, dtype=np.bool_)
    viol_r = np.zeros(m, dtype=np.bool_)
    attn = np.zeros(m, dtype=np.bool_)
    if not active.any():
        return viol_l, viol_r, attn, active, 0.0, 0.0

    idx = np.nonzero(active)[0]
    xl = xl[idx]
    xr = xr[idx]
    S = prefix[idx]

    aa, ab, ac, ad, ae = abs(a), abs(b), abs(c), abs(d), abs(e)
    af, ag = abs(f), abs(g)

    def rhs_and_tol(x):
        L = np.log(x)
        LL = np.log(L)
        sq = np.sqrt(x)
        rhs = sq * (a * L * L + b * L * LL + c * LL + d * L + e) + (
            f * L * L + g * L
        ) / sq
        mag = sq * (aa * L * L + ab * L * np.abs(LL) + ac * np.abs(LL) + ad * L + ae) + (
            af * L * L + ag * L
        ) / sq
        return L, LL, rhs, 32.0 * _sp(mag)

    L_l, LL_l, rhs_l, rtol_l = rhs_and_tol(xl)
    L_r, LL_r, rhs_r, rtol_r = rhs_and_tol(xr)

    absS = np.abs(S)
    if kernel_kind == 0:
        dev_l = np.abs(S - xl)
        dev_r = np.abs(S - xr)
        dtol_l = s_err + 32.0 * _sp(np.maximum(absS, xl))
        dtol_r = s_err + 32.0 * _sp(np.maximum(absS, xr))
    elif kernel_kind == 1:
        dev_l = np.abs(S - L_l - const_mid)
        dev_r = np.abs(S - L_r - const_mid)
        base = s_err + const_hw
        dtol_l = base + 32.0 * _sp(absS + L_l + abs(const_mid))
        dtol_r = base + 32.0 * _sp(absS + L_r + abs(const_mid))
    elif kernel_kind == 2:
        dev_l = np.abs(S - LL_l - const_mid)
        dev_r = np.abs(S - LL_r - const_mid)
        base = s_err + const_hw
        dtol_l = base + 32.0 * _sp(absS + np.abs(LL_l) + abs(const_mid))
        dtol_r = base + 32.0 * _sp(absS + np.abs(LL_r) + abs(const_mid))
    elif kernel_kind == 3:
        t_l = np.exp(const_mid + S) * L_l
        t_r = np.exp(const_mid + S) * L_r
        dev_l = np.abs(t_l - 1.0)
        dev_r = np.abs(t_r - 1.0)
        dtol_l = t_l * (s_err + const_hw) + 64.0 * _sp(1.0 + t_l)
        dtol_r = t_r * (s_err + const_hw) + 64.0 * _sp(1.0 + t_r)
    elif kernel_kind == 4:
        t_l = np.exp(-const_mid - S) / L_l
        t_r = np.exp(-const_mid - S) / L_r
        dev_l = np.abs(t_l - 1.0)
        dev_r = np.abs(t_r - 1.0)
        dtol_l = t_l * (s_err + const_hw) + 64.0 * _sp(1.0 + t_l)
        dtol_r = t_r * (s_err + const_hw) + 64.0 * _sp(1.0 + t_r)
    else:
        raise ValueError(f"unknown kernel_kind {kernel_kind}")

    tol_l = dtol_l + rtol_l
    tol_r = dtol_r + rtol_r

    v_l = (dev_l - rhs_l) > tol_l
    v_r = (dev_r - rhs_r) > tol_r
    gap_tol = np.maximum(tol_l, tol_r)
    gap_pass = (np.minimum(rhs_l, rhs_r) - np.maximum(dev_l, dev_r)) > gap_tol
    need = ~gap_pass & ~v_r

    viol_l[idx] = v_l
    viol_r[idx] = v_r
    attn[idx] = need

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_l = np.where(rhs_l > 0.0, dev_l / rhs_l, np.inf)
        ratio_r = np.where(rhs_r > 0.0, dev_r / rhs_r, np.inf)
    il = int(np.argmax(ratio_l))
    ir = int(np.argmax(ratio_r))
    if ratio_l[il] >= ratio_r[ir]:
        max_ratio, argmax_x = float(ratio_l[il]), float(xl[il])
    else:
        max_ratio, argmax_x = float(ratio_r[ir]), float(xr[ir])
    return viol_l, viol_r, attn, active, max_ratio, argmax_x


def _two_prod(a, b):
    p = a * b
    a1 = a * _SPLIT
    ah = a1 - (a1 - a)
    al = a - ah
    b1 = b * _SPLIT
    bh = b1 - (b1 - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def phase_mod_2pi(gammas: np.ndarray, log_x_hi: float, log_x_lo: float) -> np.ndarray:
    """gamma * log(x) reduced mod 2*pi, in double-double arithmetic.

    log(x) is supplied as a head/tail pair carrying ~107 bits.  The
    reduction keeps the absolute phase error near 1e-15 even for
    gamma ~ 1e5, where a naive double product has lost ~11 bits.
    """
    p, e = _two_prod(gammas, log_x_hi)
    e = e + gammas * log_x_lo
    k = np.rint(p / PI2_HI)
    kh, kl = _two_prod(k, PI2_HI)
    # p and kh agree to within ~pi, so this subtraction is exact.
    return (p - kh) - kl - k * PI2_LO + e


def xrho_terms(gammas: np.ndarray, log_x_hi: float, log_x_lo: float) -> np.ndarray:
    """Per-zero terms of Re(x^rho / rho) / sqrt(x) for rho = 1/2 + i*gamma."""
    phi = phase_mod_2pi(gammas, log_x_hi, log_x_lo)
    denom = 0.25 + gammas * gammas
    return (0.5 * np.cos(phi) + gammas * np.sin(phi)) / denom


def psi1_zero_terms(gammas: np.ndarray, log_x_hi: float, log_x_lo: float) -> np.ndarray:
    """Per-zero terms of Re(x^(rho+1) / (rho (rho+1))) / x^(3/2)."""
    phi = phase_mod_2pi(gammas, log_x_hi, log_x_lo)
    re_d = 0.75 - gammas * gammas
    im_d = 2.0 * gammas
    return (np.cos(phi) * re_d + np.sin(phi) * im_d) / (re_d * re_d + im_d * im_d)

"""Numba-jitted implementations of the hot kernels.

Twin of _kernels_numpy.py: same signatures, same formulas, loop form
instead of vectorised form.  Selected by default when numba imports
cleanly; see backend.py.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_SPLIT = 134217729.0  # 2**27 + 1, Dekker split constant
_EPS = 2.220446049250313e-16

PI2_HI = 6.283185307179586
PI2_LO = 2.4492935982947064e-16


@njit(cache=True, nogil=True)
def _sp_s(x):
    return abs(x) * _EPS + 1e-300


@njit(cache=True, nogil=True)
def sieve_odd_segment(start, hi, base_primes):
    m = (hi - start + 1) // 2
    marks = np.zeros(m, dtype=np.bool_)
    for j in range(base_primes.shape[0]):
        p = base_primes[j]
        q = p * p
        if q >= hi:
            break
        if q < start:
            q = ((start + p - 1) // p) * p
            if q % 2 == 0:
                q += p
        for idx in range((q - start) // 2, m, p):
            marks[idx] = True
    return marks


@njit(cache=True, nogil=True)
def kahan_prefix(values, s, c):
    prefix = np.empty(values.shape[0], dtype=np.float64)
    for i in range(values.shape[0]):
        y = values[i] - c
        t = s + y
        c = (t - s) - y
        s = t
        prefix[i] = s
    return prefix, s, c


@njit(cache=True, nogil=True)
def kahan_fold(values, s, c):
    for i in range(values.shape[0]):
        y = values[i] - c
        t = s + y
        c = (t - s) - y
        s = t
    return s, c


@njit(cache=True, nogil=True)
def claim_gap_check(
    n,
    n_next,
    prefix,
    kernel_kind,
    const_mid,
    const_hw,
    a,
    b,
    c,
    d,
    e,
    f,
    g,
    x_lo,
    x_hi,
    s_err,
):
    m = n.shape[0]
    viol_l = np.zeros(m, dtype=np.bool_)
    viol_r = np.zeros(m, dtype=np.bool_)
    attn = np.zeros(m, dtype=np.bool_)
    active = np.zeros(m, dtype=np.bool_)

    aa = abs(a)
    ab = abs(b)
    ac = abs(c)
    ad = abs(d)
    ae = abs(e)
    af = abs(f)
    ag = abs(g)
    acm = abs(const_mid)

    max_ratio = 0.0
    argmax_x = 0.0

    for i in range(m):
        xr_raw = n[i + 1] if i + 1 < m else n_next
        xl = n[i] if n[i] > x_lo else x_lo
        xr = xr_raw if xr_raw < x_hi else x_hi
        # Half-open step interval: x = xr_raw itself is the next jump,
        # where the held value is only a left limit.
        if xl > xr or xl >= xr_raw:
            continue
        active[i] = True
        S = prefix[i]
        absS = abs(S)

        L_l = np.log(xl)
        LL_l = np.log(L_l)
        sq_l = np.sqrt(xl)
        rhs_l = sq_l * (a * L_l * L_l + b * L_l * LL_l + c * LL_l + d * L_l + e) + (
            f * L_l * L_l + g * L_l
        ) / sq_l
        mag_l = sq_l * (
            aa * L_l * L_l + ab * L_l * abs(LL_l) + ac * abs(LL_l) + ad * L_l + ae
        ) + (af * L_l * L_l + ag * L_l) / sq_l
        rtol_l = 32.0 * _sp_s(mag_l)

        L_r = np.log(xr)
        LL_r = np.log(L_r)
        sq_r = np.sqrt(xr)
        rhs_r = sq_r * (a * L_r * L_r + b * L_r * LL_r + c * LL_r + d * L_r + e) + (
            f * L_r * L_r + g * L_r
        ) / sq_r
        mag_r = sq_r * (
            aa * L_r * L_r + ab * L_r * abs(LL_r) + ac * abs(LL_r) + ad * L_r + ae
        ) + (af * L_r * L_r + ag * L_r) / sq_r
        rtol_r = 32.0 * _sp_s(mag_r)

        if kernel_kind == 0:
            dev_l = abs(S - xl)
            dev_r = abs(S - xr)
            dtol_l = s_err + 32.0 * _sp_s(max(absS, xl))
            dtol_r = s_err + 32.0 * _sp_s(max(absS, xr))
        elif kernel_kind == 1:
            dev_l = abs(S - L_l - const_mid)
            dev_r = abs(S - L_r - const_mid)
            dtol_l = s_err + const_hw + 32.0 * _sp_s(absS + L_l + acm)
            dtol_r = s_err + const_hw + 32.0 * _sp_s(absS + L_r + acm)
        elif kernel_kind == 2:
            dev_l = abs(S - LL_l - const_mid)
            dev_r = abs(S - LL_r - const_mid)
            dtol_l = s_err + const_hw + 32.0 * _sp_s(absS + abs(LL_l) + acm)
            dtol_r = s_err + const_hw + 32.0 * _sp_s(absS + abs(LL_r) + acm)
        elif kernel_kind == 3:
            ex = np.exp(const_mid + S)
            t_l = ex * L_l
            t_r = ex * L_r
            dev_l = abs(t_l - 1.0)
            dev_r = abs(t_r - 1.0)
            dtol_l = t_l * (s_err + const_hw) + 64.0 * _sp_s(1.0 + t_l)
            dtol_r = t_r * (s_err + const_hw) + 64.0 * _sp_s(1.0 + t_r)
        else:
            ex = np.exp(-const_mid - S)
            t_l = ex / L_l
            t_r = ex / L_r
            dev_l = abs(t_l - 1.0)
            dev_r = abs(t_r - 1.0)
            dtol_l = t_l * (s_err + const_hw) + 64.0 * _sp_s(1.0 + t_l)
            dtol_r = t_r * (s_err + const_hw) + 64.0 * _sp_s(1.0 + t_r)

        tol_l = dtol_l + rtol_l
        tol_r = dtol_r + rtol_r

        v_l = (dev_l - rhs_l) > tol_l
        v_r = (dev_r - rhs_r) > tol_r
        gap_tol = tol_l if tol_l > tol_r else tol_r
        min_rhs = rhs_l if rhs_l < rhs_r else rhs_r
        max_dev = dev_l if dev_l > dev_r else dev_r
        gap_pass = (min_rhs - max_dev) > gap_tol

        viol_l[i] = v_l
        viol_r[i] = v_r
        attn[i] = (not gap_pass) and (not v_r)

        ratio_l = dev_l / rhs_l if rhs_l > 0.0 else np.inf
        ratio_r = dev_r / rhs_r if rhs_r > 0.0 else np.inf
        if ratio_l > max_ratio:
            max_ratio = ratio_l
            argmax_x = xl
        if ratio_r > max_ratio:
            max_ratio = ratio_r
            argmax_x = xr

    return viol_l, viol_r, attn, active, max_ratio, argmax_x


@njit(cache=True, nogil=True)
def phase_mod_2pi(gammas, log_x_hi, log_x_lo):
    out = np.empty(gammas.shape[0], dtype=np.float64)
    for i in range(gammas.shape[0]):
        a = gammas[i]
        p = a * log_x_hi
        a1 = a * _SPLIT
        ah = a1 - (a1 - a)
        al = a - ah
        b1 = log_x_hi * _SPLIT
        bh = b1 - (b1 - log_x_hi)
        bl = log_x_hi - bh
        err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
        err = err + a * log_x_lo
        k = np.rint(p / PI2_HI)
        kp = k * PI2_HI
        k1 = k * _SPLIT
        kh = k1 - (k1 - k)
        kl_ = k - kh
        p1 = PI2_HI * _SPLIT
        ph = p1 - (p1 - PI2_HI)
        pl = PI2_HI - ph
        kerr = ((kh * ph - kp) + kh * pl + kl_ * ph) + kl_ * pl
        out[i] = (p - kp) - kerr - k * PI2_LO + err
    return out


@njit(cache=True, nogil=True)
def xrho_terms(gammas, log_x_hi, log_x_lo):
    phi = phase_mod_2pi(gammas, log_x_hi, log_x_lo)
    out = np.empty(gammas.shape[0], dtype=np.float64)
    for i in range(gammas.shape[0]):
        gam = gammas[i]
        out[i] = (0.5 * np.cos(phi[i]) + gam * np.sin(phi[i])) / (0.25 + gam * gam)
    return out


@njit(cache=True, nogil=True)
def psi1_zero_terms(gammas, log_x_hi, log_x_lo):
    phi = phase_mod_2pi(gammas, log_x_hi, log_x_lo)
    out = np.empty(gammas.shape[0], dtype=np.float64)
    for i in range(gammas.shape[0]):
        gam = gammas[i]
        re_d = 0.75 - gam * gam
        im_d = 2.0 * gam
        out[i] = (np.cos(phi[i]) * re_d + np.sin(phi[i]) * im_d) / (
            re_d * re_d + im_d * im_d
        )
    return out

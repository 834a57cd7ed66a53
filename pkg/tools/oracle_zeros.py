"""Independent oracles for the zero-table module.

Reads data/zeros_100k.txt, recomputes every quantity the tests freeze
with mpmath (no package code in the summation paths), and prints the
literals.  Run once, paste the values into tests/test_zeros.py.
"""

import math
import sys
import time

import numpy as np
from mpmath import mp, mpf, workdps

PATH = "data/zeros_100k.txt"


def load_strings():
    vals = []
    with open(PATH) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            vals.append(line)
    return vals


def main():
    t0 = time.time()
    raw = load_strings()
    n = len(raw)
    print(f"count = {n}")
    print(f"first = {raw[0]}")
    print(f"last  = {raw[-1]}")

    gam_f = np.array([float(s) for s in raw])
    assert np.all(np.diff(gam_f) > 0)

    n100 = int(np.sum(gam_f <= 100.0))
    print(f"N(100) = {n100}")
    n1000 = int(np.sum(gam_f <= 1000.0))
    print(f"N(1000) = {n1000}")

    with workdps(30):
        gams = [mpf(s) for s in raw]
        s1 = mpf(0)
        for g in gams:
            s1 += 1 / g
        s1 *= 2
        print(f"S1_BOTH_FULL = {mp.nstr(s1, 22)}  (vs 16.2106480369)")

        # 1/gamma^2 partial sums: [T, maxh) convention, doubled
        maxh = gams[-1]
        s2_1000 = mpf(0)
        s2_14 = mpf(0)
        for g in gams[:-1]:
            t = 1 / (g * g)
            s2_14 += t
            if g >= 1000:
                s2_1000 += t
        s2_1000 *= 2
        s2_14 *= 2
        tail = mp.log(maxh) / (mp.pi * maxh)
        print(f"S2_PARTIAL_1000 = {mp.nstr(s2_1000, 18)}")
        print(f"S2_TAIL = {mp.nstr(tail, 18)}")
        rhs1000 = mp.log(1000) / (1000 * mp.pi)
        print(f"skewes rhs(1000) = {mp.nstr(rhs1000, 18)}  "
              f"holds: {s2_1000 + tail < rhs1000}")
        rhs14 = mp.log(14) / (14 * mp.pi)
        print(f"S2_PARTIAL_14 = {mp.nstr(s2_14, 18)}  rhs(14) = {mp.nstr(rhs14, 18)}  "
              f"holds: {s2_14 + tail < rhs14}")

    with workdps(40):
        # sum over gamma <= 100 of x^rho/rho at x = 4, doubled real part
        x = mpf(4)
        lx = mp.log(x)
        acc = mpf(0)
        for s in raw:
            g = mpf(s)
            if g > 100:
                break
            rho = mpf("0.5") + 1j * g
            acc += (mp.e ** (rho * lx) / rho).real
        acc *= 2
        print(f"XRHO_X4_H100 = {mp.nstr(acc, 25)}")

    # explicit psi1 zero sum at x = 1000.5, full table height
    with workdps(30):
        x = mpf("1000.5")
        lx = mp.log(x)
        x32 = x ** mpf("1.5")
        acc = mpf(0)
        for i, s in enumerate(raw):
            g = mpf(s)
            ph = g * lx
            c, sn = mp.cos(ph), mp.sin(ph)
            red = mpf("0.75") - g * g
            imd = 2 * g
            acc += (c * red + sn * imd) / (red * red + imd * imd)
            if i % 20000 == 0:
                print(f"  ... psi1 sum term {i} ({time.time()-t0:.0f}s)",
                      file=sys.stderr)
        zsum = 2 * x32 * acc
        value = x * x / 2 - zsum - x * mp.log(2 * mp.pi)
        print(f"PSI1_EXPL_X1000P5 = {mp.nstr(value, 22)}")
        tail_b = x32 * mp.log(maxh) / (mp.pi * maxh)
        print(f"PSI1_TAIL_X1000P5 = {mp.nstr(tail_b, 18)}")

    # N(T) envelope over midpoints and the 2*pi*k grid (pure numpy/doubles)
    mids = 0.5 * (gam_f[:-1] + gam_f[1:])
    ks = np.arange(1, int(gam_f[-1] / (2 * math.pi)) + 1)
    grid = np.concatenate([mids, 2 * math.pi * ks,
                           [gam_f[0] - 0.5 * (gam_f[1] - gam_f[0])]])
    grid = grid[(grid >= 2 * math.pi) & (grid <= gam_f[-1])]
    grid.sort()
    counts = np.searchsorted(gam_f, grid, side="right")
    main_t = grid / (2 * math.pi) * (np.log(grid / (2 * math.pi)) - 1.0) + 0.875
    dev = np.abs(counts - main_t)
    lg = np.log(grid)
    env = np.minimum(0.28 * lg, 0.1038 * lg + 0.2573 * np.log(lg) + 9.3675)
    ratio = dev / env
    i = int(np.argmax(ratio))
    print(f"NT grid points = {grid.size}, violations = {int(np.sum(dev > env))}, "
          f"max dev/env = {ratio[i]:.6f} at T = {grid[i]:.3f}")

    # N(T) <= T log T / (2 pi) at each zero (count = index)
    idx = np.arange(1, n + 1)
    ub = gam_f * np.log(gam_f) / (2 * math.pi)
    slack = ub - idx
    print(f"NT upper: min slack = {slack.min():.6f} at gamma #{int(np.argmin(slack))+1}")

    # Lehman with phi = 1/t, U = 2 pi e, V = maxh (closed forms)
    U = 2 * math.pi * math.e
    V = float(gam_f[-1])
    sel = (gam_f > U) & (gam_f <= V)
    lhs = float(np.sum(1.0 / gam_f[sel]))
    rhs = (
        (math.log(V / (2 * math.pi)) ** 2 - math.log(U / (2 * math.pi)) ** 2)
        / (4 * math.pi)
        + 4 * math.log(U) / U
        + 2.0 / U
    )
    print(f"LEHMAN_INV lhs = {lhs:.12f} rhs = {rhs:.12f} holds: {lhs <= rhs}")

    print(f"done in {time.time()-t0:.0f}s")


if __name__ == "__main__":
    main()

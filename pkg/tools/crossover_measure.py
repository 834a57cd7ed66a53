"""Dev-time measurement: exact last-failure locations of the four
Mertens-form claims, margins around the 0.1 grid, and the minimum
pass margin above each threshold.

Uses mpmath at 30 digits with the frozen oracle constants (see
tools/oracles.py).  Not part of the package; informs the choice of
x_max for the constant intervals and validates grid robustness.
"""

import sys
from mpmath import mp, mpf, log, sqrt, pi, exp, findroot

mp.dps = 30

B = mpf("0.261497212847642783755426838609")
E = mpf("-1.33258227573322088176582877607")
C = mpf("0.577215664901532860606512090082")


def primes_upto(n):
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, n + 1) if sieve[i]]


PLIM = 10**4
PRIMES = primes_upto(PLIM)

# cumulative sums after including prime p
S_LOGP = []
S_RECIP = []
S_LOGPROD = []
acc1 = acc2 = acc3 = mpf(0)
for p in PRIMES:
    pm = mpf(p)
    acc1 += log(pm) / pm
    acc2 += 1 / pm
    acc3 += log(1 - 1 / pm)
    S_LOGP.append(acc1)
    S_RECIP.append(acc2)
    S_LOGPROD.append(acc3)


def arcs():
    """(p_i, p_{i+1}, index) for consecutive primes."""
    for i in range(len(PRIMES) - 1):
        yield PRIMES[i], PRIMES[i + 1], i


def g_moi1(x, i):
    L = log(x)
    return abs(S_LOGP[i] - L - E) - 3 * L * L / (8 * pi * sqrt(x))


def g_moi2(x, i):
    L = log(x)
    return abs(S_RECIP[i] - log(L) - B) - 3 * L / (8 * pi * sqrt(x))


def g_moi3(x, i):
    L = log(x)
    return abs(exp(C + S_LOGPROD[i]) * L - 1) - 3 * L / (8 * pi * sqrt(x))


def g_moi4(x, i):
    L = log(x)
    return abs(exp(-C - S_LOGPROD[i]) / L - 1) - 3 * L / (8 * pi * sqrt(x))


CLAIMS = [("moi_1", g_moi1, 43.1), ("moi_2", g_moi2, 24.4),
          ("moi_3", g_moi3, 23.8), ("moi_4", g_moi4, 24.2)]


def bisect_root(g, i, lo, hi):
    flo = g(lo, i)
    for _ in range(200):
        midp = (lo + hi) / 2
        fm = g(midp, i)
        if (fm > 0) == (flo > 0):
            lo, flo = midp, fm
        else:
            hi = midp
        if hi - lo < mpf("1e-18"):
            break
    return (lo + hi) / 2


def measure(name, g, thr):
    last_fail = None       # sup of {x : g(x) >= 0}
    last_kind = None
    eps = mpf("1e-12")
    for pa, pb, i in arcs():
        a, b = mpf(pa), mpf(pb)
        ga = g(a, i)
        gb = g(b - eps, i)
        if ga <= 0 and gb <= 0:
            # sample interior for a hidden bump
            bump = False
            for k in range(1, 8):
                xm = a + (b - a) * k / 8
                if g(xm, i) > 0:
                    bump = True
                    break
            if not bump:
                continue
        if gb > 0:
            last_fail, last_kind = b, f"left-limit at {pb}"
            continue
        # failure somewhere, pass at right end: root is rightmost crossing
        lo = a
        # find rightmost positive sample
        xs = [a + (b - a) * k / 16 for k in range(16)]
        pos = [x for x in xs if g(x, i) > 0]
        if not pos:
            continue
        lo = max(pos)
        root = bisect_root(g, i, lo, b - eps)
        last_fail, last_kind = root, f"interior root on [{pa},{pb})"
    cell_lo = mpf(int(last_fail / mpf("0.1"))) / 10
    cross = cell_lo + mpf("0.1")
    # min margin above the threshold: -g on [thr, PLIM], arc ends + samples
    thrm = mpf(str(thr))
    min_m, min_at = mpf("inf"), None
    for pa, pb, i in arcs():
        a, b = mpf(pa), mpf(pb)
        if b <= thrm:
            continue
        a = max(a, thrm)
        for k in range(9):
            xm = a + (b - eps - a) * k / 8
            m = -g(xm, i)
            if m < min_m:
                min_m, min_at = m, xm
    # slope of g at the last-failure root (for interval-shift sensitivity)
    i_root = max(j for j, p in enumerate(PRIMES) if p <= last_fail)
    h = mpf("1e-8")
    slope = (g(last_fail + h, i_root) - g(last_fail - h, i_root)) / (2 * h)
    print(f"{name}:")
    print(f"  last failure x* = {mp.nstr(last_fail, 15)}  ({last_kind})")
    print(f"  grid cell [{mp.nstr(cell_lo, 6)}, {mp.nstr(cross, 6)}), crossover -> {mp.nstr(cross, 6)}")
    print(f"  dist to cell floor = {mp.nstr(last_fail - cell_lo, 6)}, to crossover = {mp.nstr(cross - last_fail, 6)}")
    print(f"  min pass margin on [{thr}, {PLIM}] = {mp.nstr(min_m, 6)} at x = {mp.nstr(min_at, 10)}")
    print(f"  |g'| at root = {mp.nstr(abs(slope), 6)}")
    for hw_name, hw in (("1e6", mpf("3.9e-3")), ("1e7", mpf("1.23e-3")), ("1e8", mpf("3.9e-4"))):
        shift = hw / abs(slope)
        print(f"  est interval hw({hw_name}) = {mp.nstr(hw,3)} -> root shift {mp.nstr(shift, 4)}")
    print()


for name, g, thr in CLAIMS:
    measure(name, g, thr)

"""One-time oracle computations whose outputs are frozen into tests.

Run:  python3 tools/oracles.py

Computes the two Mertens constants to 30 significant digits by
prime-zeta acceleration, entirely independently of the package code:

  B = euler + sum_p (log(1 - 1/p) + 1/p)
    = euler - sum_{k>=2} P(k)/k              with P the prime zeta,
  E = -euler - sum_p log(p)/(p(p-1))
    = -euler - sum_{k>=2} P1(k)              with P1(s) = sum_p log(p) p^-s,
  P1(s) = sum_{m>=1} mu(m) * (-zeta'/zeta)(m s).
"""

import mpmath as mp


def mobius(m: int) -> int:
    if m == 1:
        return 1
    result, d, n = 1, 2, m
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def prime_zeta_log(s):
    """P1(s) = sum over primes of log(p) * p^-s, via Moebius inversion."""
    total = mp.mpf(0)
    for m in range(1, 200):
        mu = mobius(m)
        if mu == 0:
            continue
        term = mu * (-mp.zeta(m * s, 1, 1) / mp.zeta(m * s))
        total += term
        if abs(term) < mp.mpf(10) ** (-mp.mp.dps - 10) and m > 5:
            break
    return total


def main():
    mp.mp.dps = 40
    b_sum = mp.mpf(0)
    for k in range(2, 400):
        term = mp.primezeta(k) / k
        b_sum += term
        if term < mp.mpf(10) ** (-50):
            break
    B = mp.euler - b_sum

    e_sum = mp.mpf(0)
    for k in range(2, 400):
        term = prime_zeta_log(k)
        e_sum += term
        if term < mp.mpf(10) ** (-50):
            break
    E = -mp.euler - e_sum

    print("B =", mp.nstr(B, 30))
    print("E =", mp.nstr(E, 30))
    print("C =", mp.nstr(mp.euler, 30))
    # direct cross-checks against slowly-converging prime sums
    primes = [p for p in range(2, 2000) if all(p % q for q in range(2, int(p**0.5) + 1))]
    direct_b = sum(mp.log(1 - mp.mpf(1) / p) + mp.mpf(1) / p for p in primes)
    direct_e = sum(mp.log(p) / (p * (p - 1)) for p in primes)
    print("B direct partial + euler:", mp.nstr(mp.euler + direct_b, 12), "(tail ~ 1/1893)")
    print("E direct partial:", mp.nstr(-mp.euler - direct_e, 12))


if __name__ == "__main__":
    main()

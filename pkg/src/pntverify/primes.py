"""Segmented sieve and prime-power event streams.

Everything downstream consumes primes either as SieveSegment tiles or
as an ordered stream of prime-power events (n = p^k with weight log p).
Segments are sieved independently (odd numbers only, mod-2 wheel) and
reassembled in index order, so output is identical for any thread
count or segment size.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from .backend import kernels
from .config import (
    DEFAULT_SEGMENT_SIZE,
    HARD_MAX,
    MIN_SEGMENT_SIZE,
    PntError,
    RangeGuardError,
)


@dataclass(frozen=True)
class SieveSegment:
    """One tile of the sieve: marks[i] is True iff lo + i is composite."""

    lo: int
    hi: int
    composite_marks: np.ndarray


@dataclass(frozen=True)
class PrimePowerEvent:
    n: int
    p: int
    k: int
    log_p: float


_small_prime_cache: dict = {}


def small_primes(limit: int) -> np.ndarray:
    """Primes <= limit via a plain sieve (used for base primes and oracles)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    key = limit
    cached = _small_prime_cache.get(key)
    if cached is not None:
        return cached
    is_comp = np.zeros(limit + 1, dtype=np.bool_)
    is_comp[:2] = True
    for p in range(2, math.isqrt(limit) + 1):
        if not is_comp[p]:
            is_comp[p * p :: p] = True
    primes = np.nonzero(~is_comp)[0].astype(np.int64)
    if limit <= 10**6:
        _small_prime_cache[key] = primes
    return primes


def _base_primes_for(hi: int) -> np.ndarray:
    """Odd primes up to sqrt(hi - 1), enough to sieve any segment below hi."""
    root = math.isqrt(max(hi - 1, 4))
    primes = small_primes(root)
    return primes[primes > 2]


def _check_bounds(lo: int, hi: int, segment_size: int) -> None:
    if not (2 <= lo < hi):
        raise PntError(f"need 2 <= lo < hi, got lo={lo}, hi={hi}")
    if segment_size < MIN_SEGMENT_SIZE:
        raise PntError(f"segment_size must be >= {MIN_SEGMENT_SIZE}")
    if hi > HARD_MAX:
        raise RangeGuardError(f"hi={hi} exceeds the hard maximum {HARD_MAX}")


def _segment_bounds(lo: int, hi: int, segment_size: int):
    a = lo
    while a < hi:
        b = min(a + segment_size, hi)
        yield a, b
        a = b


def _ordered_map(fn, items, threads: int, window: int = 4):
    """Apply fn over items on a small thread pool, yielding in input order."""
    if threads <= 1:
        for item in items:
            yield fn(item)
        return
    items = iter(items)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = []
        try:
            for _ in range(threads + window):
                pending.append(pool.submit(fn, next(items)))
        except StopIteration:
            items = None
        while pending:
            result = pending.pop(0).result()
            if items is not None:
                try:
                    pending.append(pool.submit(fn, next(items)))
                except StopIteration:
                    items = None
            yield result


def _sieve_segment_worker(bounds: Tuple[int, int], base_primes: np.ndarray):
    """Return (lo, hi, odd_start, odd_marks) for a segment [lo, hi)."""
    a, b = bounds
    start = a if a % 2 == 1 else a + 1
    if start >= b:
        odd_marks = np.empty(0, dtype=np.bool_)
    else:
        odd_marks = kernels().sieve_odd_segment(start, b, base_primes)
    return a, b, start, odd_marks


def sieve_range(
    lo: int,
    hi: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> Iterator[SieveSegment]:
    """Yield SieveSegment tiles covering [lo, hi) in order."""
    _check_bounds(lo, hi, segment_size)
    base = _base_primes_for(hi)

    def build(bounds):
        a, b, start, odd_marks = _sieve_segment_worker(bounds, base)
        marks = np.ones(b - a, dtype=np.bool_)
        if start < b:
            marks[start - a :: 2] = odd_marks
        if a <= 2 < b:
            marks[2 - a] = False
        return SieveSegment(lo=a, hi=b, composite_marks=marks)

    yield from _ordered_map(build, _segment_bounds(lo, hi, segment_size), threads)


def prime_power_table(limit: int):
    """All prime powers p^k <= limit with k >= 2, ascending.

    Returns (n, log_p, p, k) arrays.  log p is computed once per base
    prime and shared by all its powers.
    """
    if limit > HARD_MAX:
        raise RangeGuardError(f"limit={limit} exceeds the hard maximum {HARD_MAX}")
    rows = []
    for p in small_primes(math.isqrt(max(limit, 4))):
        p = int(p)
        lp = math.log(p)
        v = p * p
        k = 2
        while v <= limit:
            rows.append((v, lp, p, k))
            v *= p
            k += 1
    rows.sort()
    if not rows:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.float64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int32),
        )
    n = np.array([r[0] for r in rows], dtype=np.int64)
    logp = np.array([r[1] for r in rows], dtype=np.float64)
    base = np.array([r[2] for r in rows], dtype=np.int64)
    expo = np.array([r[3] for r in rows], dtype=np.int32)
    return n, logp, base, expo


def event_blocks(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Stream (n, log_p, is_prime) arrays for all prime powers n <= limit.

    Events are strictly ascending across the whole stream.  This is the
    raw form consumed by the scanning engine; lambda_stream wraps it in
    per-event objects.
    """
    if limit < 2:
        raise PntError(f"limit must be >= 2, got {limit}")
    hi = int(limit) + 1
    _check_bounds(2, hi, segment_size)
    base = _base_primes_for(hi)
    pp_n, pp_logp, _, _ = prime_power_table(int(limit))

    def build(bounds):
        a, b, start, odd_marks = _sieve_segment_worker(bounds, base)
        if start < b:
            values = start + 2 * np.nonzero(~odd_marks)[0].astype(np.int64)
        else:
            values = np.empty(0, dtype=np.int64)
        if a <= 2 < b:
            values = np.concatenate((np.array([2], dtype=np.int64), values))
        logs = np.log(values.astype(np.float64))
        i0, i1 = np.searchsorted(pp_n, [a, b])
        if i1 > i0:
            n = np.concatenate((values, pp_n[i0:i1]))
            lp = np.concatenate((logs, pp_logp[i0:i1]))
            isp = np.zeros(n.shape[0], dtype=np.bool_)
            isp[: values.shape[0]] = True
            order = np.argsort(n, kind="stable")
            return n[order], lp[order], isp[order]
        return values, logs, np.ones(values.shape[0], dtype=np.bool_)

    for block in _ordered_map(build, _segment_bounds(2, hi, segment_size), threads):
        if block[0].shape[0]:
            yield block


def lambda_stream(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> Iterator[PrimePowerEvent]:
    """Yield one PrimePowerEvent per prime power n <= limit, ascending."""
    pp_n, _, pp_base, pp_expo = prime_power_table(int(limit))
    for n_arr, logp_arr, isp_arr in event_blocks(limit, segment_size):
        for n, lp, isp in zip(n_arr.tolist(), logp_arr.tolist(), isp_arr.tolist()):
            if isp:
                yield PrimePowerEvent(n=n, p=n, k=1, log_p=lp)
            else:
                j = int(np.searchsorted(pp_n, n))
                yield PrimePowerEvent(n=n, p=int(pp_base[j]), k=int(pp_expo[j]), log_p=lp)


def _is_prime_int(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    # One fixed table covers every m below the hard cap (sqrt(1e10) = 1e5).
    for p in small_primes(100_000):
        p = int(p)
        if p * p > m:
            break
        if p != 2 and m % p == 0:
            return False
    return True


def is_prime_power(m: int) -> Optional[Tuple[int, int]]:
    """Return (p, k) when m = p^k for prime p, else None."""
    if m < 2:
        return None
    if _is_prime_int(m):
        return m, 1
    for k in range(2, m.bit_length() + 1):
        r = round(m ** (1.0 / k))
        for cand in (r - 1, r, r + 1):
            if cand >= 2 and cand**k == m and _is_prime_int(cand):
                return cand, k
    return None


def next_prime_power(n: int) -> int:
    """Smallest prime power strictly greater than n."""
    if n < 1:
        raise PntError(f"need n >= 1, got {n}")
    m = int(n) + 1
    while True:
        if m > HARD_MAX:
            raise RangeGuardError(f"search passed the hard maximum {HARD_MAX}")
        if is_prime_power(m):
            return m
        m += 1

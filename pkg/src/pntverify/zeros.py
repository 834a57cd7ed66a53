"""Riemann zero ordinate tables: ingestion, counts, and truncated sums.

A table holds the positive ordinates gamma of zeros 1/2 + i*gamma in
ascending order; negative-ordinate zeros are implicit conjugates, so
every both-signs sum is exactly twice the positive-gamma sum.  Tables
are immutable after construction and all sum operations are pure.

Text format: one decimal ordinate per line, ascending; '#' starts a
comment; an optional "# precision <abs-error>" header declares the
per-ordinate absolute error (default 5e-10).  A binary cache format
(magic "ZTBL") round-trips the ordinates bit-exactly.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from mpmath import mp, workdps

from .backend import kernels
from .config import (
    DEFAULT_ZERO_PRECISION,
    IntegrityError,
    PntError,
    RangeGuardError,
    ZeroFileError,
)
from .constants import CONSTANTS

CACHE_MAGIC = b"ZTBL"
CACHE_VERSION = 1
_CACHE_HEADER = struct.Struct("<4sBQ")

# Residual phase error of the double-double reduction in the kernels,
# a handful of ulps of 2*pi regardless of gamma.
_PHASE_EPS = 2e-15


@dataclass(frozen=True)
class ZeroTable:
    """Ascending positive zero ordinates plus their declared accuracy."""

    gammas: np.ndarray
    max_height: float
    input_precision: float
    count: int

    @classmethod
    def from_gammas(
        cls, values, input_precision: float = DEFAULT_ZERO_PRECISION
    ) -> "ZeroTable":
        arr = np.ascontiguousarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise IntegrityError("zero ordinates must form a 1-d sequence")
        if arr.size == 0:
            raise IntegrityError("zero table is empty")
        if not np.all(np.isfinite(arr)):
            raise IntegrityError("zero table contains non-finite ordinates")
        if arr[0] <= 0.0:
            raise IntegrityError(f"non-positive ordinate {arr[0]}")
        if arr.size > 1 and not np.all(np.diff(arr) > 0.0):
            raise IntegrityError("zero ordinates are not strictly ascending")
        if input_precision <= 0.0:
            raise PntError("input_precision must be positive")
        arr.setflags(write=False)
        return cls(
            gammas=arr,
            max_height=float(arr[-1]),
            input_precision=float(input_precision),
            count=int(arr.size),
        )


@dataclass(frozen=True)
class ZeroSumResult:
    """A truncated zero sum with its rounding/propagation error budget.

    tail_bound, when present, bounds the omitted part above the table
    height via a stated analytic inequality; it is never extrapolated
    from the data.
    """

    value: float
    truncation_height: float
    term_count: int
    err_bound: float
    tail_bound: Optional[float] = None


@dataclass(frozen=True)
class ExplicitPsi1:
    value: float
    truncation_tail: float
    term_count: int


@dataclass(frozen=True)
class NtCheckReport:
    points_checked: int
    violations: int
    max_ratio: float
    argmax_height: float


@dataclass(frozen=True)
class LehmanCheck:
    phi: str
    lhs: float
    rhs: float
    holds: bool


# ---------------------------------------------------------------------------
# Ingestion and caching


def ingest(
    path: Union[str, Path], input_precision: Optional[float] = None
) -> ZeroTable:
    """Parse a text zero file into a validated table.

    An explicit input_precision argument wins over the file header,
    which wins over the package default.  Parse failures carry the
    offending line number; ordering violations are integrity errors.
    """
    p = Path(path)
    if not p.is_file():
        raise ZeroFileError(f"zero file not found: {p}")
    header_precision: Optional[float] = None
    vals: list = []
    prev = 0.0
    with p.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                tokens = line[1:].split()
                if len(tokens) >= 2 and tokens[0] == "precision":
                    try:
                        header_precision = float(tokens[1])
                    except ValueError as exc:
                        raise ZeroFileError(
                            f"{p}:{lineno}: bad precision header {line!r}"
                        ) from exc
                    if header_precision <= 0.0:
                        raise ZeroFileError(
                            f"{p}:{lineno}: precision must be positive"
                        )
                continue
            try:
                v = float(line)
            except ValueError as exc:
                raise ZeroFileError(
                    f"{p}:{lineno}: malformed ordinate {line!r}"
                ) from exc
            if not math.isfinite(v):
                raise ZeroFileError(f"{p}:{lineno}: non-finite ordinate {line!r}")
            if v <= 0.0:
                raise IntegrityError(f"{p}:{lineno}: non-positive ordinate {v}")
            if v <= prev:
                raise IntegrityError(
                    f"{p}:{lineno}: ordinates not ascending ({v} after {prev})"
                )
            prev = v
            vals.append(v)
    if not vals:
        raise ZeroFileError(f"{p}: no ordinates found")
    if input_precision is not None:
        precision = input_precision
    elif header_precision is not None:
        precision = header_precision
    else:
        precision = DEFAULT_ZERO_PRECISION
    return ZeroTable.from_gammas(np.array(vals), precision)


def write_cache(table: ZeroTable, path: Union[str, Path]) -> None:
    """Write the binary cache: magic, version, count, float64 payload."""
    payload = table.gammas.astype("<f8").tobytes()
    header = _CACHE_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.count)
    Path(path).write_bytes(header + payload)


def read_cache(
    path: Union[str, Path], input_precision: float = DEFAULT_ZERO_PRECISION
) -> ZeroTable:
    """Load a ZTBL cache.  The cache stores ordinates only; the caller
    re-declares input_precision (CLI flag or default)."""
    p = Path(path)
    if not p.is_file():
        raise ZeroFileError(f"zero cache not found: {p}")
    blob = p.read_bytes()
    if len(blob) < _CACHE_HEADER.size:
        raise ZeroFileError(f"{p}: truncated cache header")
    magic, version, count = _CACHE_HEADER.unpack_from(blob)
    if magic != CACHE_MAGIC:
        raise ZeroFileError(f"{p}: not a ZTBL cache")
    if version != CACHE_VERSION:
        raise ZeroFileError(f"{p}: unsupported ZTBL version {version}")
    expected = _CACHE_HEADER.size + 8 * count
    if len(blob) != expected:
        raise ZeroFileError(
            f"{p}: payload length mismatch ({len(blob)} bytes, expected {expected})"
        )
    arr = np.frombuffer(blob, dtype="<f8", offset=_CACHE_HEADER.size).copy()
    return ZeroTable.from_gammas(arr, input_precision)


def load_table(
    path: Union[str, Path], input_precision: Optional[float] = None
) -> ZeroTable:
    """Open either format, sniffing the ZTBL magic."""
    p = Path(path)
    if not p.is_file():
        raise ZeroFileError(f"zero file not found: {p}")
    with p.open("rb") as fh:
        head = fh.read(len(CACHE_MAGIC))
    if head == CACHE_MAGIC:
        if input_precision is None:
            return read_cache(p)
        return read_cache(p, input_precision)
    return ingest(p, input_precision)


# ---------------------------------------------------------------------------
# Counts and sums


def count_below(table: ZeroTable, T: float) -> int:
    """N(T): the number of zeros with 0 < gamma <= T."""
    if T > table.max_height:
        raise RangeGuardError(
            f"T = {T} exceeds table height {table.max_height}"
        )
    return int(np.searchsorted(table.gammas, T, side="right"))


def _round_err(ops: int, magnitude: float) -> float:
    return 2.0 * ops * float(np.spacing(abs(magnitude) + 1e-300))


def sum_inv_gamma(table: ZeroTable, T: float, both_signs: bool = False) -> ZeroSumResult:
    """Sum of 1/gamma over 0 < gamma <= T, doubled when both_signs.

    term_count always counts the tabulated positive-gamma terms; the
    doubling is structural (conjugate symmetry), not extra terms.
    """
    k = count_below(table, T)
    gam = table.gammas[:k]
    kern = kernels()
    value, _ = kern.kahan_fold(1.0 / gam, 0.0, 0.0)
    prec_err = table.input_precision * float(np.sum(gam**-2.0))
    err = prec_err + _round_err(2 * k, value)
    if both_signs:
        value *= 2.0
        err *= 2.0
    return ZeroSumResult(
        value=float(value), truncation_height=float(T), term_count=k, err_bound=err
    )


def sum_inv_gamma_sq_tail(table: ZeroTable, T: float) -> ZeroSumResult:
    """Both-signs sum of 1/gamma^2 over T <= gamma < max_height, plus an
    analytic tail bound log(max_height)/(pi*max_height) for the rest.

    The tabulated part stops short of the last ordinate so that the
    tail bound, which covers gamma >= max_height, picks it up; the
    split keeps partial + tail a true upper cover of the full sum.
    """
    if T < 1.0:
        raise PntError(f"need T >= 1, got {T}")
    i0 = int(np.searchsorted(table.gammas, T, side="left"))
    gam = table.gammas[i0 : table.count - 1]
    kern = kernels()
    inv_sq = gam**-2.0
    half, _ = kern.kahan_fold(inv_sq, 0.0, 0.0)
    value = 2.0 * half
    prec_err = 2.0 * table.input_precision * float(np.sum(2.0 * gam**-3.0))
    err = prec_err + 2.0 * _round_err(3 * gam.size, half)
    tail = math.log(table.max_height) / (math.pi * table.max_height)
    return ZeroSumResult(
        value=float(value),
        truncation_height=float(T),
        term_count=int(gam.size),
        err_bound=err,
        tail_bound=tail,
    )


def _log_dd(x: float):
    """log(x) as a head/tail double pair (~107 bits)."""
    hi = math.log(x)
    with workdps(40):
        lo = float(mp.log(x) - hi)
    return hi, lo


def sum_xrho_over_rho(table: ZeroTable, x: float, height: float) -> ZeroSumResult:
    """2 * sum over 0 < gamma <= height of Re(x^rho / rho), rho = 1/2 + i*gamma.

    The phase gamma*log(x) is reduced mod 2*pi in double-double
    arithmetic before the trig calls; err_bound charges each term
    sqrt(x) times the per-ordinate phase error (input_precision*|log x|
    plus the reduction residual).
    """
    if x < 2.0:
        raise PntError(f"need x >= 2, got {x}")
    k = count_below(table, height)
    if k == 0:
        return ZeroSumResult(0.0, float(height), 0, 0.0)
    gam = table.gammas[:k]
    kern = kernels()
    log_hi, log_lo = _log_dd(x)
    terms = kern.xrho_terms(gam, log_hi, log_lo)
    ssum, _ = kern.kahan_fold(terms, 0.0, 0.0)
    sx = math.sqrt(x)
    value = 2.0 * sx * ssum
    phase_err = table.input_precision * abs(log_hi) + _PHASE_EPS
    err = 2.0 * k * sx * phase_err + _round_err(8 * k, sx * (abs(ssum) + 1.0))
    return ZeroSumResult(
        value=float(value), truncation_height=float(height), term_count=k,
        err_bound=err,
    )


def explicit_psi1(table: ZeroTable, x: float, height: float) -> ExplicitPsi1:
    """Truncated explicit formula for psi_1:

        x^2/2 - 2 sum_{0<gamma<=height} Re(x^(rho+1)/(rho(rho+1))) - x log(2 pi)

    truncation_tail bounds the omitted zero sum by term-wise domination:
    2 sum_{gamma>height} x^(3/2)/gamma^2 < x^(3/2) log(height)/(pi*height).
    That envelope is decreasing above e and exceeds the full both-signs
    sum of 1/gamma^2 (about 0.0462) for every height >= 2, so it stays
    valid even when height cuts below the first zero.

    Integer x is rejected: the step average convention at jumps is
    sidestepped by evaluating on a non-integer grid.
    """
    xf = float(x)
    if xf <= 1.0:
        raise PntError(f"need x > 1, got {x}")
    if xf.is_integer():
        raise PntError(f"integer x = {x} rejected; evaluate at x +- 0.5 instead")
    if height < 2.0:
        raise PntError(f"need height >= 2 for the tail envelope, got {height}")
    k = count_below(table, height)
    x32 = xf**1.5
    if k:
        gam = table.gammas[:k]
        kern = kernels()
        log_hi, log_lo = _log_dd(xf)
        terms = kern.psi1_zero_terms(gam, log_hi, log_lo)
        ssum, _ = kern.kahan_fold(terms, 0.0, 0.0)
        zero_sum = 2.0 * x32 * ssum
    else:
        zero_sum = 0.0
    value = 0.5 * xf * xf - zero_sum - xf * math.log(2.0 * math.pi)
    tail = x32 * math.log(height) / (math.pi * height)
    return ExplicitPsi1(value=float(value), truncation_tail=float(tail), term_count=k)


# ---------------------------------------------------------------------------
# Data-wide zero-count checks


def _nt_grid(table: ZeroTable) -> np.ndarray:
    """Heights to test: midpoints of zero gaps, the 2*pi*k grid, and the
    half-gap point below the first zero, clipped to [2*pi, max_height]."""
    gam = table.gammas
    two_pi = 2.0 * math.pi
    mids = 0.5 * (gam[:-1] + gam[1:]) if gam.size > 1 else np.empty(0)
    ks = np.arange(1, int(gam[-1] / two_pi) + 1, dtype=np.float64)
    extras = [gam[0] - 0.5 * (gam[1] - gam[0])] if gam.size > 1 else []
    grid = np.concatenate([mids, two_pi * ks, np.array(extras)])
    grid = grid[(grid >= two_pi) & (grid <= gam[-1])]
    grid.sort()
    return grid


def check_nt_envelope(table: ZeroTable) -> NtCheckReport:
    """|N(T) - T/(2 pi) log(T/(2 pi e)) - 7/8| against the envelope
    min(0.28 log T, 0.1038 log T + 0.2573 log log T + 9.3675)."""
    grid = _nt_grid(table)
    counts = np.searchsorted(table.gammas, grid, side="right")
    two_pi = 2.0 * math.pi
    main = grid / two_pi * (np.log(grid / two_pi) - 1.0) + 0.875
    dev = np.abs(counts - main)
    lg = np.log(grid)
    c0, c1, c2, c3 = CONSTANTS.NT_c
    env = np.minimum(c0 * lg, c1 * lg + c2 * np.log(lg) + c3)
    tol = 1e-9
    bad = dev > env + tol
    ratio = dev / env
    i = int(np.argmax(ratio))
    return NtCheckReport(
        points_checked=int(grid.size),
        violations=int(np.sum(bad)),
        max_ratio=float(ratio[i]),
        argmax_height=float(grid[i]),
    )


def check_nt_upper(table: ZeroTable) -> NtCheckReport:
    """N(T) <= T log T/(2 pi) at every tabulated ordinate.

    N steps only at zeros and the right side increases, so checking
    N(gamma_i) = i at each gamma_i covers all T >= 2.
    """
    gam = table.gammas
    idx = np.arange(1, table.count + 1, dtype=np.float64)
    bound = gam * np.log(gam) / (2.0 * math.pi)
    bad = idx > bound + 1e-9
    ratio = idx / bound
    i = int(np.argmax(ratio))
    return NtCheckReport(
        points_checked=table.count,
        violations=int(np.sum(bad)),
        max_ratio=float(ratio[i]),
        argmax_height=float(gam[i]),
    )


_LEHMAN_U = 2.0 * math.pi * math.e


def lehman_check(
    table: ZeroTable, phi: str, U: float = _LEHMAN_U, V: Optional[float] = None
) -> LehmanCheck:
    """Check sum_{U<gamma<=V} phi(gamma) against the closed-form bound
    (1/2 pi) int_U^V phi(t) log(t/2 pi) dt + 4 phi(U) log U
    + 2 int_U^inf phi(u)/u du.

    phi = "one" makes the last integral diverge, so that case holds
    trivially (rhs is inf); phi = "inv" is a data-level check of the
    paper's usage pattern (the lemma itself assumes non-decreasing phi).
    """
    if phi not in ("one", "inv"):
        raise PntError(f"phi must be 'one' or 'inv', got {phi!r}")
    if U < _LEHMAN_U * (1.0 - 1e-12):
        raise PntError(f"need U >= 2 pi e, got {U}")
    if V is None:
        V = table.max_height
    if V > table.max_height:
        raise RangeGuardError(f"V = {V} exceeds table height {table.max_height}")
    if V <= U:
        raise PntError(f"need V > U, got V = {V}, U = {U}")
    gam = table.gammas
    sel = gam[(gam > U) & (gam <= V)]
    kern = kernels()
    two_pi = 2.0 * math.pi
    if phi == "one":
        lhs, _ = kern.kahan_fold(np.ones_like(sel), 0.0, 0.0)
        rhs = math.inf
    else:
        lhs, _ = kern.kahan_fold(1.0 / sel, 0.0, 0.0)
        rhs = (
            (math.log(V / two_pi) ** 2 - math.log(U / two_pi) ** 2) / (4.0 * math.pi)
            + 4.0 * math.log(U) / U
            + 2.0 / U
        )
    tol = 1e-9 * (1.0 + abs(lhs))
    return LehmanCheck(phi=phi, lhs=float(lhs), rhs=float(rhs), holds=lhs <= rhs + tol)

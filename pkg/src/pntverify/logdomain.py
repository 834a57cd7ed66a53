"""Log-domain evaluation points and stable correction primitives.

Bound expressions at x up to e^40000 cannot touch x itself; everything
is expressed through L = log x and LL = log L.  Perturbation factors
like (1 + log x / (2 pi sqrt(x))) are built from exp(LL - L/2 - ...)
so they collapse to exactly 1.0 once the perturbation underflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import PntError
from .interval import Iv, iexp, ilog, ilog1p

LOG_2PI = math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)
LOG_X19 = math.log(1e19)


@dataclass(frozen=True)
class LogPoint:
    """x in the log domain: L = log x, LL = log L (needs L > 0)."""

    L: float
    LL: float

    def __post_init__(self):
        if not self.L > 0.0:
            raise PntError(f"log-domain point needs log x > 0, got L = {self.L}")

    @staticmethod
    def from_L(L: float) -> "LogPoint":
        return LogPoint(float(L), math.log(L))

    @staticmethod
    def from_x(x: float) -> "LogPoint":
        if not x > 1.0:
            raise PntError(f"log-domain point needs x > 1, got {x}")
        return LogPoint.from_L(math.log(x))

    @property
    def x(self) -> float:
        """Back to x when representable, else inf."""
        return math.exp(self.L) if self.L < 709.78 else math.inf


def perturbation(pt: LogPoint, log_coeff: float, l_power: int = 1):
    """t = coeff * L^l_power / sqrt(x) as exp(log_coeff + p*LL - L/2).

    Underflows cleanly to 0.0 for large L.  Accepts l_power in {0, 1, 2}.
    """
    return iexp(log_coeff + l_power * pt.LL - 0.5 * pt.L)


def one_plus(t):
    """1 + t, exactly 1.0 when t has underflowed to zero."""
    if isinstance(t, Iv):
        return Iv(1.0, 1.0) + t
    return 1.0 + t


def log_one_plus(t):
    """log(1 + t), stable for tiny t; exactly 0.0 on underflow."""
    return ilog1p(t)


def iv_point(pt: LogPoint) -> "LogPointIv":
    return LogPointIv(Iv.point(pt.L), Iv.point(pt.LL))


@dataclass(frozen=True)
class LogPointIv:
    """Interval twin of LogPoint for directed-rounding evaluation."""

    L: Iv
    LL: Iv

    @staticmethod
    def from_L(L: float) -> "LogPointIv":
        li = Iv.point(float(L))
        return LogPointIv(li, ilog(li))

    @staticmethod
    def from_L_interval(L: Iv) -> "LogPointIv":
        return LogPointIv(L, ilog(L))


def perturbation_iv(pt: LogPointIv, log_coeff: float, l_power: int = 1) -> Iv:
    return iexp(Iv.point(log_coeff) + l_power * pt.LL - 0.5 * pt.L)

"""Directed-rounding interval arithmetic on paired doubles.

Ring operations round outward with nextafter; transcendental endpoints
are evaluated by mpmath at 120 bits and padded one ulp outward.  FPU
rounding modes are never touched.  The helpers ilog/iexp/... accept
either a plain float (returned as a plain float result) or an Iv, so
bound formulas can be written once and run in both modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from mpmath import mp

_INF = math.inf
_PREC = 120


def _dn(x: float) -> float:
    if x != x or x in (_INF, -_INF):
        return x
    return float(np.nextafter(x, -_INF))


def _up(x: float) -> float:
    if x != x or x in (_INF, -_INF):
        return x
    return float(np.nextafter(x, _INF))


@dataclass(frozen=True)
class Iv:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: float) -> "Iv":
        return Iv(float(x), float(x))

    @staticmethod
    def from_midrad(mid: float, rad: float) -> "Iv":
        return Iv(_dn(mid - rad), _up(mid + rad))

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other):
        o = _coerce(other)
        return Iv(_dn(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Iv(-self.hi, -self.lo)

    def __sub__(self, other):
        o = _coerce(other)
        return Iv(_dn(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        o = _coerce(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Iv(_dn(min(ps)), _up(max(ps)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError(f"division by interval containing zero: {o}")
        ps = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Iv(_dn(min(ps)), _up(max(ps)))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return Iv(-self.hi, -self.lo)
        return Iv(0.0, max(-self.lo, self.hi))

    def square(self) -> "Iv":
        a = abs(self)
        return Iv(max(0.0, _dn(a.lo * a.lo)), _up(a.hi * a.hi))

    def __lt__(self, other):
        """Certainly less-than (strict separation)."""
        o = _coerce(other)
        return self.hi < o.lo

    def __gt__(self, other):
        o = _coerce(other)
        return self.lo > o.hi


def _coerce(v: Union[float, int, Iv]) -> Iv:
    if isinstance(v, Iv):
        return v
    return Iv.point(float(v))


def _mp_endpoint(fn_name: str, x: float, direction: int) -> float:
    """fn(x) at 120 bits, converted to double, padded one ulp outward."""
    with mp.workprec(_PREC):
        val = getattr(mp, fn_name)(mp.mpf(x))
        out = float(val)
    return _up(out) if direction > 0 else _dn(out)


def _lift(fn_name: str, math_fn):
    def plain_or_interval(v):
        if isinstance(v, Iv):
            return Iv(_mp_endpoint(fn_name, v.lo, -1), _mp_endpoint(fn_name, v.hi, +1))
        return math_fn(v)

    return plain_or_interval


# All of these are monotone increasing, so endpoint mapping is exact
# up to the one-ulp pad.
ilog = _lift("log", math.log)
isqrt = _lift("sqrt", math.sqrt)
ilog1p = _lift("log1p", math.log1p)
iexpm1 = _lift("expm1", math.expm1)


def iexp(v):
    if isinstance(v, Iv):
        lo = 0.0 if v.lo < -746.0 else _mp_endpoint("exp", v.lo, -1)
        hi = _INF if v.hi > 709.78 else _mp_endpoint("exp", v.hi, +1)
        return Iv(max(lo, 0.0), hi)
    return math.exp(v) if v < 709.78 else _INF


# math.pi is the nearest double and sits just below the true value, so
# one ulp upward encloses it.
IV_PI = Iv(math.pi, _up(math.pi))

"""Runtime configuration and shared exception types."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

# Hard ceiling on any sieve/scan endpoint.  Desk-scale default is far lower;
# this is the point past which we refuse to run no matter what the user asks.
HARD_MAX = 10**10

DEFAULT_DESK_MAX = 10**8
DEFAULT_SEGMENT_SIZE = 1 << 18
MIN_SEGMENT_SIZE = 1 << 10
DEFAULT_ZERO_PRECISION = 5e-10

CONFIG_FILENAME = "pnt.conf"
ZERO_FILE_ENV = "PNT_ZEROS"
BACKEND_ENV = "PNTVERIFY_BACKEND"


class PntError(Exception):
    """Base class for all errors raised by this package."""


class RangeGuardError(PntError):
    """A requested range exceeds the configured or hard maximum."""


class ZeroFileError(PntError):
    """A zero-ordinate file is missing, malformed, or fails validation."""


class IntegrityError(PntError):
    """Input data violates a structural invariant (ordering, positivity)."""


@dataclass(frozen=True)
class ConfigProfile:
    """Settings shared by the CLI and the verification engine."""

    desk_max: int = DEFAULT_DESK_MAX
    segment_size: int = DEFAULT_SEGMENT_SIZE
    threads: int = 1
    zero_file: Optional[str] = None
    precision_mode: str = "interval"  # fast | interval | extended
    output: str = "text"  # json | csv | text

    def __post_init__(self) -> None:
        if self.desk_max > HARD_MAX:
            raise RangeGuardError(
                f"desk_max {self.desk_max} exceeds hard cap {HARD_MAX}"
            )
        if self.threads < 1:
            raise PntError("threads must be >= 1")
        if self.segment_size < MIN_SEGMENT_SIZE:
            raise PntError(
                f"segment_size must be >= {MIN_SEGMENT_SIZE}, got {self.segment_size}"
            )
        if self.precision_mode not in ("fast", "interval", "extended"):
            raise PntError(f"unknown precision_mode {self.precision_mode!r}")
        if self.output not in ("json", "csv", "text"):
            raise PntError(f"unknown output format {self.output!r}")


_INT_KEYS = {"desk_max", "segment_size", "threads"}
_STR_KEYS = {"zero_file", "precision_mode", "output"}


def load_config(path: Optional[str] = None) -> ConfigProfile:
    """Build a profile from ./pnt.conf (key=value lines) and environment.

    Missing file means defaults.  Unknown keys are rejected so typos do not
    silently pass.  PNT_ZEROS, when set, overrides any zero_file value.
    """
    profile = ConfigProfile()
    conf = Path(path) if path is not None else Path(CONFIG_FILENAME)
    if conf.is_file():
        updates: dict = {}
        for lineno, raw in enumerate(conf.read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise PntError(f"{conf}:{lineno}: expected key=value, got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in _INT_KEYS:
                try:
                    updates[key] = int(value)
                except ValueError as exc:
                    raise PntError(f"{conf}:{lineno}: {key} must be an integer") from exc
            elif key in _STR_KEYS:
                updates[key] = value
            else:
                raise PntError(f"{conf}:{lineno}: unknown key {key!r}")
        profile = replace(profile, **updates)

    env_zeros = os.environ.get(ZERO_FILE_ENV)
    if env_zeros:
        profile = replace(profile, zero_file=env_zeros)
    return profile


def check_range(hi: float, desk_max: int = DEFAULT_DESK_MAX) -> None:
    """Raise RangeGuardError when hi exceeds the allowed maximum."""
    limit = min(desk_max, HARD_MAX)
    if hi > limit:
        raise RangeGuardError(f"requested endpoint {hi} exceeds limit {limit}")

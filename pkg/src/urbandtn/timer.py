"""Simulation clock and HH:MM:SS conversion."""

from __future__ import annotations

import math
from dataclasses import dataclass

# absorbs float noise such as 0.7 * 3600 = 2519.9999999999995
_SECOND_SLACK = 1e-6


def convert_hms(hours: float) -> str:
    """Hours as zero-padded ``HH:MM:SS``; seconds truncated, hours never wrap."""
    if hours < 0:
        raise ValueError("hours must be >= 0")
    total = math.floor(hours * 3600.0 + _SECOND_SLACK)
    h, rem = divmod(total, 3600)
    m, s = divmod(rem, 60)
    return f"{h:02d}:{m:02d}:{s:02d}"


def parse_hms(stamp: str) -> float:
    h, m, s = (int(part) for part in stamp.split(":"))
    return (h * 3600 + m * 60 + s) / 3600.0


def tick_hours(step_base_m: float, v_max_kmh: float) -> float:
    """Length of one tick: the time the fastest agent needs to cover one base step.

    With no moving agents a one-second tick is used.
    """
    if v_max_kmh <= 0:
        return 1.0 / 3600.0
    return step_base_m / (1000.0 * v_max_kmh)


@dataclass
class Clock:
    """Integer tick counter; wall time is always derived, never accumulated."""
    tick_h: float
    tick: int = 0

    @property
    def now_h(self) -> float:
        return self.tick * self.tick_h

    @property
    def tick_s(self) -> float:
        return self.tick_h * 3600.0

    def stamp(self) -> str:
        return convert_hms(self.now_h)

    def advance(self) -> None:
        self.tick += 1

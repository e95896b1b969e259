"""Timed data-generation events at stationary agents."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import NoStationaryAgents
from .routing import BufferEntry, Message

DEFAULT_PAYLOAD_SIZE = 5
DEFAULT_DURATION_H = 24.0

_WINDOW_SLACK = 1e-9


@dataclass
class Event:
    e_id: str
    time_h: float
    duration_h: float
    data: bytes
    assigned_to: str
    expired: bool = False
    handler_trace: list[str] = field(default_factory=list)
    delivered_h: Optional[float] = None
    delivered_to: Optional[str] = None

    @property
    def expiry_h(self) -> float:
        return self.time_h + self.duration_h

    @property
    def delivered(self) -> bool:
        return self.delivered_h is not None


def _draw(rng, lo: float, hi: float) -> float:
    t = lo + rng.random() * (hi - lo)
    return t if t < hi else lo


def schedule_events(rate, horizon_h: float, rng) -> list[float]:
    """Occurrence times: ``m`` uniform draws inside every ``n``-hour window.

    A trailing partial window of length ``r`` gets ``floor(m * r / n)`` draws.
    """
    m, n = rate
    if m < 1 or n <= 0:
        raise ValueError(f"invalid event rate {rate!r}")
    if horizon_h <= 0:
        return []
    full = math.floor(horizon_h / n + _WINDOW_SLACK)
    times = []
    for k in range(full):
        lo, hi = k * n, (k + 1) * n
        times.extend(_draw(rng, lo, hi) for _ in range(m))
    lo = full * n
    if horizon_h > lo:
        extra = math.floor(m * (horizon_h - lo) / n + _WINDOW_SLACK)
        times.extend(_draw(rng, lo, horizon_h) for _ in range(extra))
    return sorted(times)


def create_event(occurrence_h: float, sources, duration_h: float, payload_size: int,
                 rng, events: list, now_h: Optional[float] = None) -> Event:
    """Pick a source agent uniformly, give it a fresh random message, log the event.

    ``sources`` must already be restricted to eligible (stationary) agents.
    """
    if not sources:
        raise NoStationaryAgents()
    agent = sources[rng.randrange(len(sources))]
    e_id = f"E{len(events) + 1}"
    data = rng.randbytes(payload_size) if payload_size else b""
    event = Event(e_id, occurrence_h, duration_h, data, agent.obj_id,
                  handler_trace=[agent.obj_id])
    message = Message(e_id, data, agent.obj_id, occurrence_h)
    agent.hold(BufferEntry(message, agent.obj_id, occurrence_h if now_h is None else now_h))
    events.append(event)
    return event


def check_expiry(event: Event, sim_time_h: float) -> Event:
    if not event.expired and sim_time_h > event.expiry_h:
        event.expired = True
    return event

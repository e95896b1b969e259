"""Store-and-forward handoff protocols.

Every protocol shares neighbor discovery and differs only in which neighbors
it is willing to hand data to. Levels follow the road-access hierarchy:
``level = max(path type number) - min(path type the group may use)``, so 0 is
the most superior level (access to the top road class only).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .geo import geodesic_distance
from .mobility import AgentState, movement_for, obj_sort_key

EPIDEMIC = "Epidemic"
SUPERIOR_ONLY = "SuperiorOnly"
SUPERIOR_PEER = "SuperiorPeer"
DEPOT = "Depot"


@dataclass(frozen=True)
class Message:
    msg_id: str
    payload: bytes
    origin_obj: str
    created_h: float


class BufferEntry(NamedTuple):
    message: Message
    sender: str
    received_h: float


@dataclass
class NeighborEntry:
    neighbor: str
    distance_km: float
    continuing: bool
    entered_at: str


class ContactRecord(NamedTuple):
    neighbor: str
    ts_entry: str
    ts_exit: str


class Transfer(NamedTuple):
    tick: int
    sender: str
    receiver: str
    msg_id: str


def find_level(group, path_types) -> int:
    values = path_types.values() if isinstance(path_types, dict) else path_types
    return max(values) - min(group.paths)


def receive(receiver: AgentState, message: Message, sender: str, now_h: float) -> bool:
    """Append ``message`` unless the receiver already holds that msg_id."""
    return receiver.hold(BufferEntry(message, sender, now_h))


# -- registry ---------------------------------------------------------------------

PROTOCOLS: dict[str, type] = {}
_ALIASES: dict[str, str] = {}


def register_protocol(name: str, *aliases: str):
    def wrap(cls):
        cls.kind = name
        PROTOCOLS[name] = cls
        for alias in (name, name + "Handoff", name + "Routing", name + "Protocol", *aliases):
            _ALIASES[alias] = name
        return cls
    return wrap


def resolve_protocol(name: str) -> str:
    return _ALIASES[name]


def create_protocol(name: str, level: int = 0):
    return PROTOCOLS[resolve_protocol(name)](level)


# -- protocols ---------------------------------------------------------------------

@register_protocol(EPIDEMIC)
class EpidemicHandoff:
    """Give every neighbor every message it does not have yet."""

    sends = True

    def __init__(self, level: int = 0):
        self.level = level
        self.neighbor_table: dict[str, NeighborEntry] = {}
        self.contact_log: list[ContactRecord] = []

    def accepts(self, neighbor: AgentState) -> bool:
        """Whether this protocol hands data to ``neighbor``."""
        return True

    def find_neighbors(self, me: AgentState, agents, clock,
                       distance: Optional[Callable] = None) -> None:
        distance = distance or (lambda a, b: geodesic_distance(a.curr_geo_pos, b.curr_geo_pos))
        range_km = me.tx_range_m / 1000.0
        stamp = clock.stamp()
        for other in agents:
            if other is me:
                continue
            d = distance(me, other)
            entry = self.neighbor_table.get(other.obj_id)
            if d <= range_km:
                if entry is None:
                    self.neighbor_table[other.obj_id] = NeighborEntry(other.obj_id, d, False, stamp)
                else:
                    entry.distance_km = d
                    entry.continuing = True
            elif entry is not None:
                self.contact_log.append(ContactRecord(other.obj_id, entry.entered_at, stamp))
                del self.neighbor_table[other.obj_id]

    def exchange_data(self, me: AgentState, agents_by_id: dict, clock) -> list[Transfer]:
        if not self.sends or not me.buffer:
            return []
        transfers = []
        for obj_id in sorted(self.neighbor_table, key=obj_sort_key):
            node = agents_by_id[obj_id]
            if not self.accepts(node):
                continue
            missing = [e.message for e in me.buffer if e.message.msg_id not in node.held_ids]
            for message in missing:
                receive(node, message, me.obj_id, clock.now_h)
                transfers.append(Transfer(clock.tick, me.obj_id, node.obj_id, message.msg_id))
        if transfers:
            movement_for(me).after_send(me)
        return transfers

    def execute_protocol(self, me: AgentState, agents, agents_by_id, clock,
                         distance: Optional[Callable] = None) -> list[Transfer]:
        self.find_neighbors(me, agents, clock, distance)
        return self.exchange_data(me, agents_by_id, clock)

    def close_contacts(self, clock) -> None:
        """Log every still-open contact as ending now (end of run)."""
        stamp = clock.stamp()
        for obj_id in sorted(self.neighbor_table, key=obj_sort_key):
            self.contact_log.append(ContactRecord(obj_id, self.neighbor_table[obj_id].entered_at, stamp))
        self.neighbor_table.clear()


@register_protocol(SUPERIOR_ONLY)
class SuperiorOnlyHandoff(EpidemicHandoff):
    """Hand data only to strictly more superior neighbors (smaller level)."""

    def accepts(self, neighbor: AgentState) -> bool:
        return self.level > neighbor.level


@register_protocol(SUPERIOR_PEER)
class SuperiorPeerHandoff(SuperiorOnlyHandoff):
    """Hand data to superiors and to peers on the same level."""

    def accepts(self, neighbor: AgentState) -> bool:
        return self.level >= neighbor.level


@register_protocol(DEPOT)
class Depot(EpidemicHandoff):
    """Receive-only sink; reaching one counts as delivery."""

    sends = False

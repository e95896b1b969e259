"""Movement models: per-tick position updates of agents over the road graph.

Each model is a stateless strategy registered under a name. The hierarchy
mirrors how the models specialise one another::

    Stationary
      SimpleRandom
        PathType
          PathMemory
          Restricted
          Wait

A new model subclasses the closest existing one, overrides
``initial_node`` and/or ``next_choice`` and registers itself with
:func:`register_movement`; the settings file can then name it in ``Movement``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Optional

from .errors import NoFeasibleVertex
from .geo import GeoPoint, delay_padding, interpolate_path
from .graph import Edge, RoadGraph

STATIONARY = "Stationary"
SIMPLE_RANDOM = "SimpleRandom"
PATH_TYPE = "PathType"
PATH_MEMORY = "PathMemory"
RESTRICTED = "Restricted"
WAIT = "Wait"

# placement gives up random probing after this many draws per vertex
PLACEMENT_RETRY_FACTOR = 10


class Decision(NamedTuple):
    """One junction decision, kept for audits."""
    tick: int
    vertex: int
    candidates: tuple[tuple[int, int, int], ...]  # (neighbor, way_id, e_type)
    chosen_way: Optional[int]
    buffered: bool
    waited: bool = False


@dataclass
class Motion:
    """Per-group movement parameters, fixed for a run."""
    allowed_types: Optional[frozenset[int]]
    step_km: float
    tick_s: float
    junction_delay_s: float = 0.0
    highway_type: Optional[int] = None
    record_decisions: bool = False


@dataclass
class AgentState:
    obj_id: str
    group_id: str
    movement_model: str
    prev_node: int
    next_node: int
    curr_geo_pos: GeoPoint
    speed_kmh: float = 0.0
    tx_range_m: float = 0.0
    curr_way: Optional[int] = None
    ways_visited: list[int] = field(default_factory=list)
    time_traveled_s: float = 0.0
    mvmt_points: list[GeoPoint] = field(default_factory=list)
    mvmt_pt_index: int = 0
    buffer: list = field(default_factory=list)
    wait_flag: bool = False
    wait_start_h: Optional[float] = None
    wait_released: bool = False
    protocol: Any = None
    decisions: list[Decision] = field(default_factory=list)
    held_ids: set[str] = field(default_factory=set, repr=False)

    @property
    def level(self) -> int:
        return self.protocol.level if self.protocol is not None else 0

    @property
    def at_junction(self) -> bool:
        return not self.mvmt_points or self.mvmt_pt_index >= len(self.mvmt_points) - 1

    def has_message(self, msg_id: str) -> bool:
        return msg_id in self.held_ids

    def hold(self, entry) -> bool:
        """Append a buffer entry unless its msg_id is already held."""
        msg_id = entry.message.msg_id
        if msg_id in self.held_ids:
            return False
        self.held_ids.add(msg_id)
        self.buffer.append(entry)
        return True


def obj_sort_key(obj_id: str):
    """Natural order for agent ids: T2 sorts before T10."""
    m = re.fullmatch(r"(.*?)(\d+)", obj_id)
    return (m.group(1), int(m.group(2))) if m else (obj_id, -1)


class Choice(NamedTuple):
    vertex: int
    edge: Optional[Edge]  # None: stay at the current vertex this tick


# -- registry ---------------------------------------------------------------------

MOVEMENT_MODELS: dict[str, "Stationary"] = {}
_ALIASES: dict[str, str] = {}


def register_movement(name: str, *aliases: str):
    """Class decorator adding a movement model under ``name`` (and aliases)."""
    def wrap(cls):
        cls.name = name
        MOVEMENT_MODELS[name] = cls()
        for alias in (name, name + "Movement", *aliases):
            _ALIASES[alias] = name
        return cls
    return wrap


def resolve_movement(name: str) -> str:
    return _ALIASES[name]


def movement_for(state: AgentState) -> "Stationary":
    return MOVEMENT_MODELS[state.movement_model]


# -- models ---------------------------------------------------------------------

def _uniform(rng, items):
    return items[rng.randrange(len(items))]


@register_movement(STATIONARY)
class Stationary:
    mobile = False
    type_constrained = False

    def initial_node(self, graph: RoadGraph, allowed_types, rng) -> int:
        if not graph.vertices:
            raise NoFeasibleVertex(allowed_types or ())
        return _uniform(rng, graph.vertices)

    def next_choice(self, state, graph, motion, rng, tick) -> Choice:
        return Choice(state.next_node, None)

    def after_send(self, state: AgentState) -> None:
        """Hook run by the routing layer after this agent handed data over."""


@register_movement(SIMPLE_RANDOM)
class SimpleRandom(Stationary):
    mobile = True

    def arrival(self, state: AgentState) -> Optional[int]:
        return state.prev_node if state.prev_node != state.next_node else None

    def candidates(self, state, graph, motion):
        arrival = self.arrival(state)
        return [(v, e) for v, e in graph.neighbors(state.next_node) if v != arrival]

    def reverse(self, state, graph) -> Choice:
        """Dead end: go back the way we came, or stay if we never moved."""
        if state.curr_way is None:
            return Choice(state.next_node, None)
        edge = graph.edges[state.curr_way]
        return Choice(edge.other(state.next_node), edge)

    def pick(self, state, graph, motion, rng, tick, options, seen=None) -> Choice:
        """Uniform draw over ``options``; ``seen`` is what gets logged as the candidate set."""
        choice = Choice(*_uniform(rng, options)) if options else self.reverse(state, graph)
        self.log(state, motion, tick, options if seen is None else seen, choice)
        return choice

    def log(self, state, motion, tick, options, choice, waited=False):
        if motion.record_decisions:
            state.decisions.append(Decision(
                tick, state.next_node,
                tuple((v, e.way_id, e.e_type) for v, e in options),
                choice.edge.way_id if choice.edge is not None else None,
                bool(state.buffer), waited))

    def next_choice(self, state, graph, motion, rng, tick) -> Choice:
        return self.pick(state, graph, motion, rng, tick, self.candidates(state, graph, motion))


@register_movement(PATH_TYPE)
class PathType(SimpleRandom):
    type_constrained = True

    def initial_node(self, graph: RoadGraph, allowed_types, rng) -> int:
        if allowed_types is None:
            return super().initial_node(graph, allowed_types, rng)
        allowed = set(allowed_types)

        def feasible(v):
            return any(e.e_type in allowed for _, e in graph.neighbors(v))

        if graph.vertices:
            for _ in range(PLACEMENT_RETRY_FACTOR * len(graph.vertices)):
                v = _uniform(rng, graph.vertices)
                if feasible(v):
                    return v
        pool = [v for v in graph.vertices if feasible(v)]
        if not pool:
            raise NoFeasibleVertex(allowed)
        return _uniform(rng, pool)

    def candidates(self, state, graph, motion):
        allowed = motion.allowed_types
        return [(v, e) for v, e in super().candidates(state, graph, motion)
                if allowed is None or e.e_type in allowed]


@register_movement(PATH_MEMORY)
class PathMemory(PathType):
    def next_choice(self, state, graph, motion, rng, tick) -> Choice:
        options = self.candidates(state, graph, motion)
        visited = set(state.ways_visited)
        fresh = [(v, e) for v, e in options if e.way_id not in visited]
        return self.pick(state, graph, motion, rng, tick, fresh or options, seen=options)


@register_movement(RESTRICTED)
class Restricted(PathType):
    def next_choice(self, state, graph, motion, rng, tick) -> Choice:
        options = self.candidates(state, graph, motion)
        highways = [(v, e) for v, e in options if e.e_type == motion.highway_type]
        if state.buffer and highways:
            return self.pick(state, graph, motion, rng, tick, highways, seen=options)
        return self.pick(state, graph, motion, rng, tick, options)


@register_movement(WAIT)
class Wait(PathType):
    def next_choice(self, state, graph, motion, rng, tick) -> Choice:
        options = self.candidates(state, graph, motion)
        if state.wait_released:
            state.wait_released = False
        elif state.buffer and any(e.e_type == motion.highway_type for _, e in options):
            state.wait_flag = True
            state.wait_start_h = tick * motion.tick_s / 3600.0
            choice = Choice(state.next_node, None)
            self.log(state, motion, tick, options, choice, waited=True)
            return choice
        return self.pick(state, graph, motion, rng, tick, options)

    def after_send(self, state: AgentState) -> None:
        if state.wait_flag:
            state.wait_flag = False
            state.wait_released = True


# -- operations ---------------------------------------------------------------------

def compute_initial_node(model: str, graph: RoadGraph, allowed_types, rng) -> int:
    return MOVEMENT_MODELS[model].initial_node(graph, allowed_types, rng)


def compute_next_node(state: AgentState, graph: RoadGraph, motion: Motion, rng, tick: int = 0) -> Choice:
    return movement_for(state).next_choice(state, graph, motion, rng, tick)


def populate_way_points(state: AgentState, graph: RoadGraph, edge: Edge, step_km: float,
                        junction_delay_s: float, tick_s: float) -> AgentState:
    """Lay out the per-tick positions for traversing ``edge`` from the current vertex."""
    start = state.next_node
    points = interpolate_path(graph.movement_waypoints(edge, start), step_km)
    points.extend([points[-1]] * delay_padding(junction_delay_s, tick_s))
    state.mvmt_points = points
    state.mvmt_pt_index = 0
    state.curr_way = edge.way_id
    state.ways_visited.append(edge.way_id)
    state.prev_node = start
    state.next_node = edge.other(start)
    state.curr_geo_pos = points[0]
    return state


def update_position(state: AgentState, graph: RoadGraph, motion: Motion, rng, tick: int = 0) -> AgentState:
    """Advance one tick along the current edge, choosing a new edge at its end."""
    model = movement_for(state)
    if not model.mobile or state.wait_flag:
        return state
    before = state.curr_geo_pos
    if not state.at_junction:
        state.mvmt_pt_index += 1
        state.curr_geo_pos = state.mvmt_points[state.mvmt_pt_index]
    else:
        choice = model.next_choice(state, graph, motion, rng, tick)
        if choice.edge is None:
            return state
        populate_way_points(state, graph, choice.edge, motion.step_km,
                            motion.junction_delay_s, motion.tick_s)
    if state.curr_geo_pos != before:
        state.time_traveled_s += motion.tick_s
    return state

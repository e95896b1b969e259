"""Scenario setup and the per-tick simulation loop."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import reports
from .config import GeneralParams, GroupSpec, load_config, validate_scenario
from .errors import ConfigError, FatalInit, NoStationaryAgents, SimulationError
from .events import Event, check_expiry, create_event, schedule_events
from .geo import geodesic_distance
from .graph import RoadGraph, build_graph
from .mobility import (MOVEMENT_MODELS, AgentState, Motion, compute_initial_node, obj_sort_key,
                       update_position)
from .osm import MapTables, load_map
from .routing import DEPOT, Transfer, create_protocol, find_level
from .timer import Clock, tick_hours

log = logging.getLogger(__name__)

# clock comparisons within this many hours count as equal
_TIME_SLACK = 1e-12


@dataclass
class Scenario:
    """Everything that is fixed across runs: parameters, map and graph."""
    general: GeneralParams
    groups: list[GroupSpec]
    map: MapTables
    graph: RoadGraph
    config_path: Optional[Path] = None


@dataclass
class Controls:
    # pause/accelerate/decelerate have no meaning headless; only stop is honored
    paused: bool = False
    stopped: bool = False
    run_counter: int = 0


@dataclass
class SimulationContext:
    general: GeneralParams
    groups: list[GroupSpec]
    map: MapTables
    graph: RoadGraph
    agents: list[AgentState]
    clock: Clock
    rng: random.Random
    run_index: int = 0
    seed: int = 0
    events: list[Event] = field(default_factory=list)
    schedule: list[float] = field(default_factory=list)
    motions: dict[str, Motion] = field(default_factory=dict)
    transfers: list[Transfer] = field(default_factory=list)
    controls: Controls = field(default_factory=Controls)
    agents_by_id: dict[str, AgentState] = field(default_factory=dict)
    depots: set[str] = field(default_factory=set)
    event_sources: list[AgentState] = field(default_factory=list)
    _next_event: int = 0

    @property
    def sim_time_h(self) -> float:
        return self.clock.now_h

    @property
    def sim_tick_h(self) -> float:
        return self.clock.tick_h

    def event(self, e_id: str) -> Event:
        return self.events[int(e_id[1:]) - 1]


@dataclass
class BatchResult:
    summaries: list[reports.RunSummary]
    failures: list[tuple[int, str]]

    @property
    def ok(self) -> bool:
        return not self.failures


def load_scenario(config_path, report_dir=None, runs: Optional[int] = None) -> Scenario:
    """Parse settings and map. Raises ``ConfigError`` listing every violation."""
    config_path = Path(config_path)
    general, groups = load_config(config_path)
    if report_dir is not None:
        general.report_directory = Path(report_dir)
    if runs is not None:
        general.num_simulations = runs
    problems = validate_scenario(general, groups)
    if problems:
        raise ConfigError("invalid scenario:\n  " + "\n  ".join(problems))
    tables = load_map(general.map_path, general.path_types)
    return Scenario(general, groups, tables, build_graph(tables), config_path)


def _motion_for(group: GroupSpec, general: GeneralParams, clock: Clock,
                record_decisions: bool) -> Motion:
    constrained = MOVEMENT_MODELS[group.movement_model].type_constrained
    highway = group.restricted_to
    if highway is None:
        highway = max(general.path_types.values())
    return Motion(
        allowed_types=frozenset(group.paths) if constrained else None,
        step_km=group.speed_kmh * clock.tick_h if group.mobile else 0.0,
        tick_s=clock.tick_s,
        junction_delay_s=group.junction_delay_s,
        highway_type=highway,
        record_decisions=record_decisions,
    )


def init_sim(scenario, seed: int = 0, run_index: int = 0,
             record_decisions: bool = False) -> SimulationContext:
    """Build a fresh context: agents placed, levels set, event schedule drawn.

    ``scenario`` is a :class:`Scenario` or a path to a settings file.
    """
    try:
        if not isinstance(scenario, Scenario):
            scenario = load_scenario(scenario)
        general, groups, graph = scenario.general, scenario.groups, scenario.graph
        rng = random.Random(seed)
        v_max = max((g.speed_kmh for g in groups if g.mobile), default=0.0)
        clock = Clock(tick_hours(general.step_base_m, v_max))

        motions = {g.group_id: _motion_for(g, general, clock, record_decisions) for g in groups}
        agents = []
        for g in groups:
            level = find_level(g, general.path_types)
            for i in range(1, g.num_hosts + 1):
                agent = AgentState(f"{g.label}{i}", g.group_id, g.movement_model, -1, -1,
                                   None, speed_kmh=g.speed_kmh, tx_range_m=g.tx_range_m)
                agent.protocol = create_protocol(g.protocol, level)
                agents.append(agent)
        agents.sort(key=lambda a: obj_sort_key(a.obj_id))

        by_group = {g.group_id: g for g in groups}
        for agent in agents:
            v = compute_initial_node(agent.movement_model, graph,
                                     motions[agent.group_id].allowed_types, rng)
            agent.prev_node = agent.next_node = v
            agent.curr_geo_pos = graph.position(v)

        ctx = SimulationContext(general, groups, scenario.map, graph, agents, clock, rng,
                                run_index=run_index, seed=seed, motions=motions)
        ctx.agents_by_id = {a.obj_id: a for a in agents}
        ctx.depots = {a.obj_id for a in agents if a.protocol.kind == DEPOT}
        ctx.event_sources = [a for a in agents
                             if not by_group[a.group_id].mobile and a.obj_id not in ctx.depots]
        ctx.schedule = schedule_events(general.msg_gen_rate, general.simulation_time_hours, rng)
        if ctx.schedule and not ctx.event_sources:
            raise NoStationaryAgents()
        ctx.controls.run_counter = run_index
        return ctx
    except FatalInit:
        raise
    except (SimulationError, OSError, ValueError) as exc:
        raise FatalInit(f"cannot initialise simulation: {exc}") from exc


def _record_receipts(ctx: SimulationContext, transfers) -> None:
    now = ctx.clock.now_h
    for t in transfers:
        event = ctx.event(t.msg_id)
        if event.delivered:
            continue
        event.handler_trace.append(t.receiver)
        if t.receiver in ctx.depots and now <= event.expiry_h:
            event.delivered_h = now
            event.delivered_to = t.receiver


def step(ctx: SimulationContext) -> SimulationContext:
    """One tick: fire events, move, exchange, expire, advance the clock."""
    if ctx.controls.stopped:
        return ctx
    clock, now = ctx.clock, ctx.clock.now_h
    g = ctx.general

    while ctx._next_event < len(ctx.schedule) and ctx.schedule[ctx._next_event] <= now + _TIME_SLACK:
        create_event(ctx.schedule[ctx._next_event], ctx.event_sources, g.event_duration_h,
                     g.payload_size, ctx.rng, ctx.events, now_h=now)
        ctx._next_event += 1

    for agent in ctx.agents:
        update_position(agent, ctx.graph, ctx.motions[agent.group_id], ctx.rng, clock.tick)

    cache: dict[tuple[str, str], float] = {}

    def distance(a, b):
        key = (a.obj_id, b.obj_id) if a.obj_id < b.obj_id else (b.obj_id, a.obj_id)
        d = cache.get(key)
        if d is None:
            d = cache[key] = geodesic_distance(a.curr_geo_pos, b.curr_geo_pos)
        return d

    for agent in ctx.agents:
        sent = agent.protocol.execute_protocol(agent, ctx.agents, ctx.agents_by_id, clock, distance)
        if sent:
            ctx.transfers.extend(sent)
            _record_receipts(ctx, sent)

    for event in ctx.events:
        if not event.expired:
            check_expiry(event, now)

    clock.advance()
    return ctx


def horizon_ticks(ctx: SimulationContext) -> int:
    horizon = ctx.general.simulation_time_hours
    if horizon <= 0:
        return 0
    return math.ceil(horizon / ctx.clock.tick_h - 1e-9)


def finish(ctx: SimulationContext) -> None:
    for agent in ctx.agents:
        agent.protocol.close_contacts(ctx.clock)


def write_reports(ctx: SimulationContext, summary: reports.RunSummary, base=None) -> Path:
    base = Path(base or ctx.general.report_directory)
    reports.create_report_directory(base, [a.obj_id for a in ctx.agents])
    for agent in ctx.agents:
        reports.write_movement_log(agent, ctx.run_index, base)
    for event in ctx.events:
        reports.write_event_log(event, ctx.run_index, base)
    reports.write_transfer_log(ctx.transfers, ctx.run_index, base)
    reports.write_run_summary(summary, base)
    return base


def run(ctx: SimulationContext, write: bool = True, report_dir=None) -> reports.RunSummary:
    """Step until the configured horizon (or a stop request), then write logs."""
    for _ in range(horizon_ticks(ctx)):
        if ctx.controls.stopped:
            break
        step(ctx)
    finish(ctx)
    summary = reports.summarize_run(ctx.run_index, ctx.events, ctx.transfers, ctx.agents)
    if write:
        write_reports(ctx, summary, report_dir)
    return summary


def run_many(config, base_seed: int = 0, runs: Optional[int] = None, report_dir=None,
             write: bool = True) -> BatchResult:
    """Independent runs ``0..N-1`` seeded ``base_seed + k``; failures don't stop the batch."""
    scenario = config if isinstance(config, Scenario) else load_scenario(config, report_dir, runs)
    if runs is not None:
        scenario.general.num_simulations = runs
    if report_dir is not None:
        scenario.general.report_directory = Path(report_dir)
    result = BatchResult([], [])
    for k in range(scenario.general.num_simulations):
        try:
            ctx = init_sim(scenario, seed=base_seed + k, run_index=k)
            result.summaries.append(run(ctx, write=write))
        except (SimulationError, OSError) as exc:
            log.error("run %d failed: %s", k, exc)
            result.failures.append((k, str(exc)))
    return result

"""Deterministic, headless simulator for urban delay-tolerant networks."""

from .config import GeneralParams, GroupSpec, load_config, validate_scenario
from .engine import Scenario, SimulationContext, init_sim, load_scenario, run, run_many, step
from .graph import RoadGraph, build_graph
from .mobility import AgentState, register_movement
from .osm import MapTables, normalize_map, parse_osm
from .reports import RunSummary
from .routing import register_protocol

__version__ = "0.1.0"

__all__ = [
    "AgentState", "GeneralParams", "GroupSpec", "MapTables", "RoadGraph", "RunSummary",
    "Scenario", "SimulationContext", "build_graph", "init_sim", "load_config", "load_scenario",
    "normalize_map", "parse_osm", "register_movement", "register_protocol", "run", "run_many",
    "step", "validate_scenario",
]

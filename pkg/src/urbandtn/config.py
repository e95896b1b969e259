"""Settings file parsing.

A settings file is a flat list of ``Key = Value`` lines. ``#`` starts a
comment. Lines before the first ``Group_ID`` are general parameters; every
``Group_ID`` line opens a new host-group block that runs to the next one.
Which keys exist, and how their values are typed, comes from two schema files
(``envt_params.in`` and ``group_params.in``) holding ``Name:Type`` lines, so
new parameters can be added without touching this module.
"""

from __future__ import annotations

import logging
import math
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from .errors import (ConfigError, DuplicateParam, MalformedSchemaLine, MissingRequired,
                     PathTypeUndefined, TypeMismatch, UnknownKey)
from .mobility import STATIONARY, resolve_movement
from .routing import resolve_protocol

log = logging.getLogger(__name__)

VALUE_KINDS = ("string", "int", "real", "bool", "int-list", "pair", "path", "int-map", "size")

GENERAL_SCHEMA_FILE = "envt_params.in"
GROUP_SCHEMA_FILE = "group_params.in"
GROUP_KEY = "Group_ID"

_SIZE_UNITS = {"": 1, "B": 1, "K": 1024, "M": 1024 ** 2, "G": 1024 ** 3}
_UNBOUNDED = {"inf", "infinite", "unbounded", "none"}


@dataclass(frozen=True)
class ParamSchema:
    entries: tuple[tuple[str, str], ...] = ()

    def kind(self, name: str) -> Optional[str]:
        return dict(self.entries).get(name)

    def names(self) -> list[str]:
        return [name for name, _ in self.entries]

    def __contains__(self, name) -> bool:
        return any(name == n for n, _ in self.entries)


@dataclass
class GeneralParams:
    simulation_name: str
    num_simulations: int
    simulation_time_hours: float
    map_path: Path
    report_directory: Path
    path_types: dict[str, int]
    msg_gen_rate: tuple[int, float]
    num_host_groups: int
    gui_enabled: bool = False
    event_duration_h: float = 24.0
    payload_size: int = 5
    step_base_m: float = 5.0
    extras: dict[str, Any] = field(default_factory=dict)


@dataclass
class GroupSpec:
    group_id: str
    label: str
    paths: tuple[int, ...]
    num_hosts: int
    tx_range_m: float
    speed_kmh: float
    mobile: bool
    movement_model: str
    protocol: str
    buffer_size: Optional[int] = None  # bytes; None = unbounded, never enforced
    junction_delay_s: float = 0.0
    color: str = ""
    restricted_to: Optional[int] = None
    extras: dict[str, Any] = field(default_factory=dict)


# settings key -> (dataclass attribute, required)
GENERAL_KEYS = {
    "Simulation_Name": ("simulation_name", True),
    "No_of_Simulations": ("num_simulations", True),
    "Simulation_Time": ("simulation_time_hours", True),
    "Map": ("map_path", True),
    "Report_Directory": ("report_directory", True),
    "GUI_Enabled": ("gui_enabled", False),
    "Path_Types": ("path_types", True),
    "Random_Msg_Gen_Parameter": ("msg_gen_rate", True),
    "No_of_Hosts_Groups": ("num_host_groups", True),
    "Event_Duration": ("event_duration_h", False),
    "Payload_Size": ("payload_size", False),
    "Step_Base": ("step_base_m", False),
}

GROUP_KEYS = {
    "Group_ID": ("group_id", True),
    "Label": ("label", True),
    "Paths": ("paths", True),
    "No_of_Hosts": ("num_hosts", True),
    "TX_Range": ("tx_range_m", True),
    "Buffer_Size": ("buffer_size", False),
    "Speed": ("speed_kmh", True),
    "Mobile": ("mobile", True),
    "Movement": ("movement_model", True),
    "Junction_Delay": ("junction_delay_s", False),
    "Color": ("color", False),
    "Protocol": ("protocol", True),
    "Restricted_To": ("restricted_to", False),
}


# -- schema ----------------------------------------------------------------------

def parse_schema(text: str) -> ParamSchema:
    entries = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([a-z-]+)", line)
        if not m or m.group(2) not in VALUE_KINDS:
            raise MalformedSchemaLine(line_no, raw)
        name, kind = m.groups()
        if name in seen:
            raise DuplicateParam(name)
        seen.add(name)
        entries.append((name, kind))
    return ParamSchema(tuple(entries))


def load_schema(schema_file) -> ParamSchema:
    return parse_schema(Path(schema_file).read_text(encoding="utf-8"))


def default_schema_text(name: str) -> str:
    return resources.files("urbandtn").joinpath("data", name).read_text(encoding="utf-8")


def default_schemas() -> tuple[ParamSchema, ParamSchema]:
    return (parse_schema(default_schema_text(GENERAL_SCHEMA_FILE)),
            parse_schema(default_schema_text(GROUP_SCHEMA_FILE)))


def schemas_for(config_file) -> tuple[ParamSchema, ParamSchema]:
    """Schema files beside the settings file win over the packaged defaults."""
    base = Path(config_file).parent
    general, group = default_schemas()
    if (base / GENERAL_SCHEMA_FILE).exists():
        general = load_schema(base / GENERAL_SCHEMA_FILE)
    if (base / GROUP_SCHEMA_FILE).exists():
        group = load_schema(base / GROUP_SCHEMA_FILE)
    return general, group


# -- values ----------------------------------------------------------------------

def _unquote(s: str) -> str:
    s = s.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "'\"":
        return s[1:-1]
    return s


def _strip_brackets(s: str, opening: str, closing: str) -> str:
    s = s.strip()
    if s.startswith(opening) and s.endswith(closing):
        return s[1:-1]
    return s


def parse_size(raw: str) -> Optional[int]:
    s = raw.strip()
    if s.lower() in _UNBOUNDED:
        return None
    m = re.fullmatch(r"(\d+(?:\.\d+)?)\s*([KMGB]?)B?", s.upper())
    if not m:
        raise ValueError(raw)
    return int(float(m.group(1)) * _SIZE_UNITS[m.group(2)])


def parse_value(key: str, kind: str, raw: str, base_dir: Path) -> Any:
    try:
        if kind == "string":
            return _unquote(raw)
        if kind == "int":
            return int(raw)
        if kind == "real":
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError(raw)
            return value
        if kind == "bool":
            lowered = raw.strip().lower()
            if lowered not in ("true", "false"):
                raise ValueError(raw)
            return lowered == "true"
        if kind == "int-list":
            body = _strip_brackets(raw, "[", "]").strip()
            return tuple(int(x) for x in body.split(",")) if body else ()
        if kind == "pair":
            parts = [p.strip() for p in _strip_brackets(raw, "[", "]").split(",")]
            if len(parts) != 2:
                raise ValueError(raw)
            return (int(parts[0]), float(parts[1]))
        if kind == "path":
            p = Path(os.path.expanduser(_unquote(raw)))
            return p if p.is_absolute() else (base_dir / p).resolve()
        if kind == "int-map":
            body = _strip_brackets(raw, "{", "}").strip()
            out = {}
            for item in filter(None, (x.strip() for x in body.split(","))):
                name, value = item.rsplit(":", 1)
                name = _unquote(name)
                if not name or name in out:
                    raise ValueError(raw)
                out[name] = int(value)
            return out
        if kind == "size":
            return parse_size(raw)
    except ValueError:
        raise TypeMismatch(key, raw) from None
    raise ConfigError(f"unsupported value kind {kind!r} for {key}")


def format_value(kind: str, value: Any) -> str:
    if kind == "bool":
        return "True" if value else "False"
    if kind == "real":
        return repr(float(value))
    if kind == "int-list":
        return "[" + ", ".join(str(v) for v in value) + "]"
    if kind == "pair":
        return f"[{value[0]}, {float(value[1])!r}]"
    if kind == "int-map":
        return "{" + ", ".join(f"{k}: {v}" for k, v in value.items()) + "}"
    if kind == "size":
        return "inf" if value is None else str(value)
    return str(value)


# -- settings file ---------------------------------------------------------------------

def _split_blocks(text: str):
    general: list[tuple[int, str, str]] = []
    groups: list[list[tuple[int, str, str]]] = []
    current = general
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'Key = Value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == GROUP_KEY:
            current = []
            groups.append(current)
        current.append((line_no, key, value))
    return general, groups


def _typed_block(lines, schema: ParamSchema, base_dir: Path) -> dict[str, Any]:
    values = {}
    for _, key, raw in lines:
        kind = schema.kind(key)
        if kind is None:
            raise UnknownKey(key)
        if key in values:
            raise DuplicateParam(key)
        values[key] = parse_value(key, kind, raw, base_dir)
    return values


def _build(cls, key_map, values: dict[str, Any]):
    kwargs, extras = {}, {}
    for key, value in values.items():
        if key in key_map:
            kwargs[key_map[key][0]] = value
        else:
            extras[key] = value
    for key, (attr, required) in key_map.items():
        if required and attr not in kwargs:
            raise MissingRequired(key)
    return cls(**kwargs, extras=extras)


def parse_config(text: str, general_schema: ParamSchema, group_schema: ParamSchema,
                 base_dir=".") -> tuple[GeneralParams, list[GroupSpec]]:
    base_dir = Path(base_dir)
    overlap = set(general_schema.names()) & set(group_schema.names())
    if overlap:
        raise DuplicateParam(sorted(overlap)[0])
    general_lines, group_blocks = _split_blocks(text)

    gp = _build(GeneralParams, GENERAL_KEYS, _typed_block(general_lines, general_schema, base_dir))
    gp.msg_gen_rate = (int(gp.msg_gen_rate[0]), float(gp.msg_gen_rate[1]))
    gp.simulation_time_hours = float(gp.simulation_time_hours)
    gp.event_duration_h = float(gp.event_duration_h)
    gp.step_base_m = float(gp.step_base_m)
    if gp.gui_enabled:
        log.info("GUI_Enabled is set but this simulator is headless; ignoring")

    known_types = set(gp.path_types.values())
    groups = []
    for block in group_blocks:
        spec = _build(GroupSpec, GROUP_KEYS, _typed_block(block, group_schema, base_dir))
        try:
            spec.movement_model = resolve_movement(spec.movement_model)
        except KeyError:
            raise TypeMismatch("Movement", spec.movement_model) from None
        try:
            spec.protocol = resolve_protocol(spec.protocol)
        except KeyError:
            raise TypeMismatch("Protocol", spec.protocol) from None
        for p in spec.paths:
            if p not in known_types:
                raise PathTypeUndefined(spec.group_id, p)
        if spec.restricted_to is not None and spec.restricted_to not in known_types:
            raise PathTypeUndefined(spec.group_id, spec.restricted_to)
        spec.tx_range_m = float(spec.tx_range_m)
        spec.speed_kmh = float(spec.speed_kmh)
        spec.junction_delay_s = float(spec.junction_delay_s)
        groups.append(spec)
    return gp, groups


def load_config(config_file, general_schema: Optional[ParamSchema] = None,
                group_schema: Optional[ParamSchema] = None):
    """Read a settings file into ``(GeneralParams, [GroupSpec, ...])``.

    Relative paths inside the file resolve against the file's directory.
    Schemas default to the ``.in`` files beside the settings file, falling
    back to the packaged ones.
    """
    config_file = Path(config_file)
    if general_schema is None or group_schema is None:
        found_general, found_group = schemas_for(config_file)
        general_schema = general_schema or found_general
        group_schema = group_schema or found_group
    text = config_file.read_text(encoding="utf-8")
    return parse_config(text, general_schema, group_schema, config_file.parent.resolve())


def dump_config(gp: GeneralParams, groups, general_schema: ParamSchema,
                group_schema: ParamSchema) -> str:
    """Inverse of :func:`parse_config` for the keys the schemas declare."""
    lines = []

    def emit(obj, key_map, schema):
        for key, kind in schema.entries:
            if key in key_map:
                value = getattr(obj, key_map[key][0])
                if value is None:
                    continue
            elif key in obj.extras:
                value = obj.extras[key]
            else:
                continue
            lines.append(f"{key} = {format_value(kind, value)}")

    emit(gp, GENERAL_KEYS, general_schema)
    for spec in groups:
        lines.append("")
        # Group_ID must open the block whatever its position in the schema
        lines.append(f"{GROUP_KEY} = {spec.group_id}")
        schema = ParamSchema(tuple(e for e in group_schema.entries if e[0] != GROUP_KEY))
        emit(spec, GROUP_KEYS, schema)
    return "\n".join(lines) + "\n"


def validate_scenario(gp: GeneralParams, groups) -> list[str]:
    """Cross-field checks. Returns a list of human-readable violations."""
    problems = []
    if gp.num_simulations < 1:
        problems.append("No_of_Simulations must be >= 1")
    if gp.simulation_time_hours < 0:
        problems.append("Simulation_Time must be >= 0")
    if len(set(gp.path_types.values())) != len(gp.path_types):
        problems.append("Path_Types values must be distinct")
    if not gp.path_types:
        problems.append("Path_Types is empty")
    m, n = gp.msg_gen_rate
    if m < 1:
        problems.append("Random_Msg_Gen_Parameter m must be >= 1")
    if n <= 0:
        problems.append("Random_Msg_Gen_Parameter n must be > 0")
    if gp.num_host_groups != len(groups):
        problems.append(f"No_of_Hosts_Groups is {gp.num_host_groups} but "
                        f"{len(groups)} groups are defined")
    if gp.payload_size < 0:
        problems.append("Payload_Size must be >= 0")
    if gp.event_duration_h < 0:
        problems.append("Event_Duration must be >= 0")
    if gp.step_base_m <= 0:
        problems.append("Step_Base must be > 0")
    if not Path(gp.map_path).is_file():
        problems.append(f"map file not found: {gp.map_path}")

    known = set(gp.path_types.values())
    seen_ids, seen_labels = set(), set()
    for g in groups:
        where = f"group {g.group_id}"
        if g.group_id in seen_ids:
            problems.append(f"{where}: duplicate Group_ID")
        if g.label in seen_labels:
            problems.append(f"{where}: duplicate Label {g.label}")
        if not re.fullmatch(r"[A-Za-z0-9_-]+", g.label or ""):
            # labels become directory names and space-separated log fields
            problems.append(f"{where}: Label must be letters, digits, '_' or '-'")
        seen_ids.add(g.group_id)
        seen_labels.add(g.label)
        if g.num_hosts < 1:
            problems.append(f"{where}: No_of_Hosts must be >= 1")
        if not g.paths:
            problems.append(f"{where}: Paths is empty")
        for p in g.paths:
            if p not in known:
                problems.append(f"{where}: path type {p} not in Path_Types")
        if g.tx_range_m < 0:
            problems.append(f"{where}: TX_Range must be >= 0")
        if g.junction_delay_s < 0:
            problems.append(f"{where}: Junction_Delay must be >= 0")
        if g.speed_kmh < 0:
            problems.append(f"{where}: speed_kmh must be >= 0")
        if g.mobile:
            if g.speed_kmh <= 0:
                problems.append(f"{where}: speed_kmh must be > 0")
            if g.movement_model == STATIONARY:
                problems.append(f"{where}: mobile group cannot use Stationary movement")
        else:
            if g.movement_model != STATIONARY:
                problems.append(f"{where}: stationary group must use Stationary movement")
            if g.speed_kmh != 0:
                problems.append(f"{where}: stationary group must have speed 0")

    # agent ids are label + ordinal, so labels "T" and "T1" can both yield "T11"
    obj_ids = [f"{g.label}{i}" for g in groups for i in range(1, max(g.num_hosts, 0) + 1)]
    clashes = sorted(o for o, c in Counter(obj_ids).items() if c > 1)
    if clashes:
        problems.append(f"agent ids collide between groups: {', '.join(clashes)}")
    return problems

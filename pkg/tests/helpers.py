"""Fixture builders shared by the test modules."""

from __future__ import annotations

import textwrap
from pathlib import Path

PATH_TYPES = {"footway": 1, "residential": 2, "primary": 3}
TYPE_NAME = {v: k for k, v in PATH_TYPES.items()}

BASE_LAT, BASE_LON = 19.04, 72.85
SPACING = 0.0009  # roughly 100 m


def osm_xml(nodes, ways) -> str:
    """``nodes``: {id: (lat, lon)}; ``ways``: [(way_id, [refs], highway value or None)]."""
    out = ['<?xml version="1.0" encoding="UTF-8"?>', '<osm version="0.6">']
    for nid, (lat, lon) in nodes.items():
        out.append(f'  <node id="{nid}" lat="{lat!r}" lon="{lon!r}"/>')
    for way_id, refs, highway in ways:
        out.append(f'  <way id="{way_id}">')
        out += [f'    <nd ref="{r}"/>' for r in refs]
        if highway is not None:
            out.append(f'    <tag k="highway" v="{highway}"/>')
        out.append('    <tag k="name" v="some road"/>')
        out.append("  </way>")
    out.append("</osm>")
    return "\n".join(out) + "\n"


def write_osm(path, nodes, ways) -> Path:
    path = Path(path)
    path.write_text(osm_xml(nodes, ways), encoding="utf-8")
    return path


def pt(row, col):
    return (BASE_LAT - row * SPACING, BASE_LON + col * SPACING)


# five small normalization fixtures: name -> (nodes, ways)
def _nodes(coords):
    return {nid: pt(*rc) for nid, rc in coords.items()}


NORMALIZATION_FIXTURES = {
    "cross": (
        _nodes({1: (1, 0), 2: (1, 2), 3: (1, 1), 4: (0, 1), 5: (2, 1)}),
        [(100, [1, 3, 2], "primary"), (200, [4, 3, 5], "residential")],
    ),
    "t_junction": (
        _nodes({1: (0, 0), 2: (0, 1), 3: (0, 2), 4: (1, 1)}),
        [(100, [1, 2, 3], "primary"), (200, [2, 4], "footway")],
    ),
    "parallel": (
        _nodes({1: (0, 0), 2: (0, 1), 3: (0, 2), 4: (1, 1)}),
        [(100, [1, 2, 3], "primary"), (200, [1, 4, 3], "residential")],
    ),
    "endpoint_touch": (
        _nodes({1: (0, 0), 2: (0, 1), 3: (0, 2), 4: (0, 3), 5: (0, 4)}),
        [(100, [1, 2, 3], "primary"), (200, [3, 4, 5], "primary")],
    ),
    "no_intersection": (
        _nodes({1: (0, 0), 2: (0, 1), 3: (0, 2), 4: (2, 0), 5: (2, 1), 6: (2, 2)}),
        [(100, [1, 2, 3], "primary"), (200, [4, 5, 6], "residential")],
    ),
}


def grid_map():
    """4x4 lattice giving 14 junctions and 20 junction-to-junction edges.

    Row 0 and column 0 are primary (3); rows 1-2 and columns 2-3 residential
    (2); row 3 and a short stub of column 1 (rows 0-1) footway (1). Rows and
    columns are single long ways, so normalization has to split them.
    """
    def nid(r, c):
        return 1 + r * 4 + c

    nodes = {nid(r, c): pt(r, c) for r in range(4) for c in range(4)}
    row_type = {0: "primary", 1: "residential", 2: "residential", 3: "footway"}
    ways = [(10 + r, [nid(r, c) for c in range(4)], row_type[r]) for r in range(4)]
    ways.append((20, [nid(r, 0) for r in range(4)], "primary"))
    ways.append((21, [nid(r, 1) for r in range(2)], "footway"))
    ways.append((22, [nid(r, 2) for r in range(4)], "residential"))
    ways.append((23, [nid(r, 3) for r in range(4)], "residential"))
    return nodes, ways


def write_grid(path) -> Path:
    nodes, ways = grid_map()
    return write_osm(path, nodes, ways)


GENERAL_TEMPLATE = """\
# general parameters
Simulation_Name = {name}
No_of_Simulations = {runs}
Simulation_Time = {hours}
Map = {map}
Report_Directory = {reports}
GUI_Enabled = False
Path_Types = {{footway: 1, residential: 2, primary: 3}}
Random_Msg_Gen_Parameter = [{m}, {n}]
No_of_Hosts_Groups = {ngroups}
Event_Duration = {duration}
Payload_Size = 5
Step_Base = {step_base}
"""

GROUP_TEMPLATE = """\
Group_ID = {gid}
Label = {label}
Paths = {paths}
No_of_Hosts = {hosts}
TX_Range = {tx}
Buffer_Size = 10M
Speed = {speed}
Mobile = {mobile}
Movement = {movement}
Junction_Delay = {delay}
Color = red
Protocol = {protocol}
"""


def group(gid, label, paths, hosts, tx, speed, movement, protocol, delay=0):
    return dict(gid=gid, label=label, paths=list(paths), hosts=hosts, tx=tx, speed=speed,
                mobile=speed > 0, movement=movement, protocol=protocol, delay=delay)


def write_scenario(folder, groups, hours=0.25, rate=(2, 0.1), runs=1, duration=24.0,
                   step_base=25.0, name="test", map_file=None) -> Path:
    """Write sim.config (+ grid map unless given) into ``folder``; return the config path."""
    folder = Path(folder)
    folder.mkdir(parents=True, exist_ok=True)
    if map_file is None:
        map_file = write_grid(folder / "grid.osm")
    text = GENERAL_TEMPLATE.format(name=name, runs=runs, hours=hours, map=Path(map_file).name
                                   if Path(map_file).parent == folder else map_file,
                                   reports="logs", m=rate[0], n=rate[1], ngroups=len(groups),
                                   duration=duration, step_base=step_base)
    for g in groups:
        text += "\n" + GROUP_TEMPLATE.format(**g)
    cfg = folder / "sim.config"
    cfg.write_text(textwrap.dedent(text), encoding="utf-8")
    return cfg


def three_level_groups(protocol="Epidemic", movement="PathType"):
    """Sensors, a depot and the four-wheeler / two-wheeler / pedestrian hierarchy."""
    return [
        group("S", "S", [1, 2, 3], 2, 60, 0, "Stationary", protocol),
        group("D", "D", [3], 1, 60, 0, "Stationary", "Depot"),
        group("C", "C", [3], 2, 60, 36, movement, protocol),
        group("B", "B", [2, 3], 2, 60, 24, movement, protocol),
        group("P", "P", [1, 2, 3], 3, 60, 6, movement, protocol),
    ]

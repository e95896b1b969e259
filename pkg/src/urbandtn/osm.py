"""OpenStreetMap XML ingestion and intersection normalization."""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .errors import DanglingNodeRef, InvalidWay, MapError, XmlSyntaxError
from .geo import geodesic_distance

log = logging.getLogger(__name__)

ROAD_CLASS_TAG = "highway"
SEGMENT_ID_BASE = 1000


@dataclass
class GeoNode:
    node_id: int
    lat: float
    lon: float
    projected: Optional[tuple[float, float]] = None
    member_ways: list[int] = field(default_factory=list)

    @property
    def point(self):
        return (self.lat, self.lon)


@dataclass(frozen=True)
class Way:
    way_id: int
    node_sequence: tuple[int, ...]
    way_type: int
    length_km: float


@dataclass
class MapTables:
    nodes: dict[int, GeoNode]
    ways: dict[int, Way]
    bounds: Optional[tuple[float, float, float, float]] = None
    dropped_ways: int = 0


def compute_way_length(way, nodes) -> float:
    seq = way.node_sequence if isinstance(way, Way) else way
    return sum(geodesic_distance(nodes[a].point, nodes[b].point) for a, b in zip(seq, seq[1:]))


def compute_bounds(nodes):
    if not nodes:
        return None
    lats = [n.lat for n in nodes.values()]
    lons = [n.lon for n in nodes.values()]
    return (min(lats), min(lons), max(lats), max(lons))


def traverse_way(way_element, nodes, path_types) -> tuple[list[int], Optional[int]]:
    """Read the ``<nd ref>`` sequence and road class of one ``<way>`` element.

    The class is ``None`` when the way has no road-class tag or its value is
    not one of ``path_types``. Raises ``InvalidWay`` for fewer than two refs.
    """
    way_id = int(way_element.get("id"))
    refs = [int(nd.get("ref")) for nd in way_element.iter("nd")]
    for ref in refs:
        if ref not in nodes:
            raise DanglingNodeRef(way_id, ref)
    if len(refs) < 2:
        raise InvalidWay(way_id, f"needs at least 2 nodes, has {len(refs)}")
    way_type = None
    for tag in way_element.iter("tag"):
        if tag.get("k") == ROAD_CLASS_TAG:
            way_type = path_types.get(tag.get("v"))
            break
    return refs, way_type


def parse_osm(osm_file, path_types) -> MapTables:
    """Parse an ``.osm`` extract into node and way tables (not yet normalized)."""
    path = Path(osm_file)
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise XmlSyntaxError(exc.position[0], str(exc)) from exc
    except OSError as exc:
        raise MapError(f"cannot read map {path}: {exc}") from exc

    nodes: dict[int, GeoNode] = {}
    for el in root.iter("node"):
        node_id = int(el.get("id"))
        lat, lon = float(el.get("lat")), float(el.get("lon"))
        if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
            raise MapError(f"node {node_id} has out-of-range coordinates ({lat}, {lon})")
        nodes[node_id] = GeoNode(node_id, lat, lon)

    ways: dict[int, Way] = {}
    dropped = 0
    for el in root.iter("way"):
        try:
            refs, way_type = traverse_way(el, nodes, path_types)
        except InvalidWay as exc:
            log.warning("dropping %s", exc)
            dropped += 1
            continue
        if way_type is None:
            dropped += 1
            continue
        way_id = int(el.get("id"))
        ways[way_id] = Way(way_id, tuple(refs), way_type, compute_way_length(refs, nodes))

    for way in ways.values():
        for node_id in dict.fromkeys(way.node_sequence):
            nodes[node_id].member_ways.append(way.way_id)

    return MapTables(nodes, ways, compute_bounds(nodes), dropped)


def _split_points(ways) -> set[int]:
    # a node is a junction when it occurs more than once across all ways
    counts = Counter()
    for way in ways.values():
        seq = way.node_sequence
        counts.update(seq[:-1] if seq[0] == seq[-1] else seq)
    return {n for n, c in counts.items() if c >= 2}


def normalize_map(tables: MapTables) -> MapTables:
    """Split ways at every interior junction node.

    Ways that need no split keep their id; the pieces of a split way get
    ``way_id * 1000 + ordinal`` (ordinal from 1), so the result is stable
    and normalizing twice changes nothing.
    """
    junctions = _split_points(tables.ways)
    new_ways: dict[int, Way] = {}
    for way_id in sorted(tables.ways):
        way = tables.ways[way_id]
        seq = way.node_sequence
        cuts = [i for i in range(1, len(seq) - 1) if seq[i] in junctions]
        if not cuts:
            new_ways[way_id] = way
            continue
        bounds = [0, *cuts, len(seq) - 1]
        if len(bounds) - 1 >= SEGMENT_ID_BASE:
            raise MapError(f"way {way_id} splits into too many segments")
        for ordinal, (lo, hi) in enumerate(zip(bounds, bounds[1:]), start=1):
            piece = seq[lo:hi + 1]
            seg_id = way_id * SEGMENT_ID_BASE + ordinal
            if seg_id in tables.ways or seg_id in new_ways:
                raise MapError(f"segment id {seg_id} collides with an existing way")
            new_ways[seg_id] = Way(seg_id, piece, way.way_type,
                                   compute_way_length(piece, tables.nodes))

    nodes = {nid: replace(n, member_ways=[]) for nid, n in tables.nodes.items()}
    for seg_id in sorted(new_ways):
        for node_id in dict.fromkeys(new_ways[seg_id].node_sequence):
            nodes[node_id].member_ways.append(seg_id)
    return MapTables(nodes, new_ways, tables.bounds, tables.dropped_ways)


def dump_map(tables: MapTables) -> str:
    """One line per way: ``id type length_km node ids...``, sorted by id."""
    lines = []
    for way_id in sorted(tables.ways):
        w = tables.ways[way_id]
        lines.append(" ".join([str(w.way_id), str(w.way_type), repr(w.length_km),
                               *map(str, w.node_sequence)]))
    return "\n".join(lines) + ("\n" if lines else "")


def load_map(osm_file, path_types) -> MapTables:
    return normalize_map(parse_osm(osm_file, path_types))

"""Junction graph over normalized ways (undirected multigraph)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import NotAnEndpoint, UnknownVertex
from .geo import GeoPoint
from .osm import MapTables


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight_km: float
    e_type: int
    way_id: int

    def other(self, vertex: int) -> int:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise NotAnEndpoint(vertex, self.way_id)


class RoadGraph:
    """Vertices are way endpoints; one edge per way, parallel edges kept.

    Adjacency lists are stored pre-sorted by (neighbor id, way id) because
    mobility draws uniformly over them and must be reproducible.
    """

    def __init__(self, tables: MapTables):
        self.tables = tables
        self.edges: dict[int, Edge] = {}
        adjacency: dict[int, list[tuple[int, Edge]]] = {}
        for way_id in sorted(tables.ways):
            way = tables.ways[way_id]
            u, v = way.node_sequence[0], way.node_sequence[-1]
            edge = Edge(u, v, way.length_km, way.way_type, way_id)
            self.edges[way_id] = edge
            adjacency.setdefault(u, []).append((v, edge))
            if u != v:
                adjacency.setdefault(v, []).append((u, edge))
        for entries in adjacency.values():
            entries.sort(key=lambda item: (item[0], item[1].way_id))
        self._adj = adjacency
        self.vertices = sorted(adjacency)

    def __contains__(self, vertex) -> bool:
        return vertex in self._adj

    def __len__(self) -> int:
        return len(self.vertices)

    def degree(self, vertex: int) -> int:
        return len(self._incident(vertex))

    def _incident(self, vertex):
        try:
            return self._adj[vertex]
        except KeyError:
            raise UnknownVertex(vertex) from None

    def neighbors(self, vertex: int, allowed_types: Optional[Iterable[int]] = None):
        """Adjacent ``(vertex, edge)`` pairs, optionally filtered by road type."""
        entries = self._incident(vertex)
        if allowed_types is None:
            return list(entries)
        allowed = set(allowed_types)
        return [(n, e) for n, e in entries if e.e_type in allowed]

    def position(self, vertex: int) -> GeoPoint:
        node = self.tables.nodes[vertex]
        return GeoPoint(node.lat, node.lon)

    def movement_waypoints(self, edge: Edge, from_vertex: int) -> list[GeoPoint]:
        """Coordinates of the edge's way, oriented to start at ``from_vertex``."""
        if from_vertex not in (edge.u, edge.v):
            raise NotAnEndpoint(from_vertex, edge.way_id)
        seq = self.tables.ways[edge.way_id].node_sequence
        if seq[0] != from_vertex:
            seq = seq[::-1]
        return [self.position(n) for n in seq]

    def stats(self) -> dict:
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "total_km": sum(e.weight_km for e in self.edges.values()),
        }

    def dump_edges(self) -> str:
        lines = [f"{e.u} {e.v} {e.e_type} {e.weight_km!r} {e.way_id}"
                 for _, e in sorted(self.edges.items())]
        return "\n".join(lines) + ("\n" if lines else "")


def build_graph(tables: MapTables) -> RoadGraph:
    return RoadGraph(tables)

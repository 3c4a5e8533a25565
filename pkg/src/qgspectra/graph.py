"""Metric-graph data model.

A metric graph is a combinatorial graph with a positive length attached to
each edge.  Every edge carries a fixed orientation (tail -> head) and is
identified with the interval [0, length] in that direction.  Orientation is
never reversed silently: :func:`reverse_edge` is the only way to flip it,
because downstream quantities (s-points, traces) are orientation sensitive.

Self-loops and parallel edges are allowed; a self-loop contributes 2 to the
degree of its vertex.  All operations are pure and return new graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DuplicatePointError,
    GraphError,
    PointRangeError,
    UnsupportedDegreeError,
)

# An endpoint of an edge is ("tail", edge) or ("head", edge).  At a vertex of
# degree two the natural orientation distinguishes the "incoming" side (the
# edge whose head is the vertex, side 1) from the "outgoing" side (the edge
# whose tail is the vertex, side 2).
TAIL = "tail"
HEAD = "head"


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    length: float

    def __post_init__(self):
        if not (self.length > 0.0):
            raise GraphError(f"edge {self.id}: length must be positive, got {self.length}")


@dataclass(frozen=True)
class PointOnEdge:
    """A point on an edge, at distance x from the edge's tail."""

    edge: int
    x: float


@dataclass(frozen=True)
class Endpoint:
    """One end of an edge as seen from its incident vertex."""

    edge: int
    end: str  # TAIL or HEAD


class MetricGraph:
    """Immutable metric graph with oriented edges.

    Bonds are indexed 0..2E-1: bond 2*i is the forward copy of the i-th edge
    (in sorted id order), bond 2*i+1 the reversed copy.  Reversal is the
    involution b -> b ^ 1.
    """

    def __init__(self, vertices: Iterable[int], edges: Iterable[Edge], require_connected: bool = True):
        vs = sorted(set(int(v) for v in vertices))
        es = sorted(edges, key=lambda e: e.id)
        if len(set(e.id for e in es)) != len(es):
            raise GraphError("duplicate edge ids")
        if len(vs) != len(set(vertices)):
            raise GraphError("duplicate vertex ids")
        vset = set(vs)
        for e in es:
            if e.tail not in vset or e.head not in vset:
                raise GraphError(f"edge {e.id} references unknown vertex")
        self.vertices: tuple[int, ...] = tuple(vs)
        self.edges: tuple[Edge, ...] = tuple(es)
        self._edge_by_id = {e.id: e for e in es}
        self._edge_index = {e.id: i for i, e in enumerate(es)}
        if require_connected and self.component_count() != 1:
            raise GraphError("graph is not connected")

    # -- basic counts ----------------------------------------------------

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def total_length(self) -> float:
        return sum(e.length for e in self.edges)

    def edge(self, edge_id: int) -> Edge:
        return self._edge_by_id[edge_id]

    def endpoints_at(self, v: int) -> list[Endpoint]:
        """Edge endpoints incident to v, sorted by (edge id, end)."""
        out = []
        for e in self.edges:
            if e.tail == v:
                out.append(Endpoint(e.id, TAIL))
            if e.head == v:
                out.append(Endpoint(e.id, HEAD))
        out.sort(key=lambda p: (p.edge, p.end))
        return out

    def degree(self, v: int) -> int:
        return len(self.endpoints_at(v))

    # -- bonds ------------------------------------------------------------

    def bond_count(self) -> int:
        return 2 * self.E

    def bond_edge(self, b: int) -> Edge:
        return self.edges[b // 2]

    def bond_is_forward(self, b: int) -> bool:
        return b % 2 == 0

    @staticmethod
    def reversed_bond(b: int) -> int:
        return b ^ 1

    def bond_start(self, b: int) -> int:
        e = self.bond_edge(b)
        return e.tail if self.bond_is_forward(b) else e.head

    def bond_end(self, b: int) -> int:
        e = self.bond_edge(b)
        return e.head if self.bond_is_forward(b) else e.tail

    def incoming_bonds(self, v: int) -> list[int]:
        """Bonds terminating at v (a self-loop contributes both its bonds)."""
        out = []
        for i, e in enumerate(self.edges):
            if e.head == v:
                out.append(2 * i)
            if e.tail == v:
                out.append(2 * i + 1)
        return out

    def outgoing_bonds(self, v: int) -> list[int]:
        return [self.reversed_bond(b) for b in self.incoming_bonds(v)]

    def endpoint_of_bond_end(self, b: int) -> Endpoint:
        """The endpoint at which bond b terminates."""
        e = self.bond_edge(b)
        return Endpoint(e.id, HEAD if self.bond_is_forward(b) else TAIL)

    # -- topology ----------------------------------------------------------

    def component_count(self) -> int:
        parent = {v: v for v in self.vertices}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            ra, rb = find(e.tail), find(e.head)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in self.vertices})

    def component_labels(self) -> dict[int, int]:
        """Map vertex -> component index (components numbered by smallest vertex)."""
        parent = {v: v for v in self.vertices}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            ra, rb = find(e.tail), find(e.head)
            if ra != rb:
                parent[ra] = rb
        roots = sorted({find(v) for v in self.vertices})
        index = {r: i for i, r in enumerate(roots)}
        return {v: index[find(v)] for v in self.vertices}

    def betti(self) -> int:
        """First Betti number E - V + C (independent cycles)."""
        return self.E - self.V + self.component_count()

    def min_edge_length(self) -> float:
        return min(e.length for e in self.edges)

    # -- derived graphs ----------------------------------------------------

    def _next_vertex_id(self) -> int:
        return max(self.vertices) + 1 if self.vertices else 0

    def _next_edge_id(self) -> int:
        return max(e.id for e in self.edges) + 1 if self.edges else 0

    def subdivide(self, points: Sequence[PointOnEdge]) -> "SubdivisionResult":
        """Insert each interior point as an artificial degree-2 vertex.

        Sub-edges inherit the parent orientation, so every new vertex has one
        ingoing and one outgoing edge.  Points must be strictly interior and
        pairwise distinct per edge.
        """
        by_edge: dict[int, list[PointOnEdge]] = {}
        for p in points:
            e = self._edge_by_id.get(p.edge)
            if e is None:
                raise GraphError(f"unknown edge {p.edge}")
            if not (0.0 <= p.x <= e.length):
                raise PointRangeError(f"point x={p.x} outside [0, {e.length}] on edge {p.edge}")
            if p.x == 0.0 or p.x == e.length:
                raise PointRangeError(f"point x={p.x} on edge {p.edge} is a vertex, not interior")
            by_edge.setdefault(p.edge, []).append(p)
        for eid, ps in by_edge.items():
            xs = [p.x for p in ps]
            if len(set(xs)) != len(xs):
                raise DuplicatePointError(f"coincident subdivision points on edge {eid}")

        new_vertices = list(self.vertices)
        new_edges: list[Edge] = []
        point_vertex: dict[PointOnEdge, int] = {}
        next_v = self._next_vertex_id()
        next_e = self._next_edge_id()
        for e in self.edges:
            ps = sorted(by_edge.get(e.id, []), key=lambda p: p.x)
            if not ps:
                new_edges.append(e)
                continue
            prev_v, prev_x = e.tail, 0.0
            seg_id = e.id  # first segment keeps the original id
            for p in ps:
                v_new = next_v
                next_v += 1
                new_vertices.append(v_new)
                point_vertex[p] = v_new
                new_edges.append(Edge(seg_id, prev_v, v_new, p.x - prev_x))
                prev_v, prev_x = v_new, p.x
                seg_id = next_e
                next_e += 1
            new_edges.append(Edge(seg_id, prev_v, e.head, e.length - prev_x))
        graph = MetricGraph(new_vertices, new_edges)
        return SubdivisionResult(graph, point_vertex)

    def cut(self, locations: Sequence[PointOnEdge | int]) -> "CutResult":
        """Cut the graph at interior points and/or existing degree-2 vertices.

        Each cut location splits into two degree-1 vertices.  The copy that
        keeps the arriving edge end (side 1) is tagged HEAD, the copy keeping
        the departing end (side 2) is tagged TAIL.
        """
        interior = [p for p in locations if isinstance(p, PointOnEdge)]
        vertex_ids = [v for v in locations if not isinstance(v, PointOnEdge)]
        if interior:
            sub = self.subdivide(interior)
            base = sub.graph
            vertex_ids = list(vertex_ids) + [sub.point_vertex[p] for p in interior]
        else:
            base = self
            vertex_ids = list(vertex_ids)

        for v in vertex_ids:
            if base.degree(v) != 2:
                raise UnsupportedDegreeError(f"cut vertex {v} has degree {base.degree(v)}, need 2")

        new_vertices = list(base.vertices)
        next_v = base._next_vertex_id()
        endpoint_target: dict[tuple[int, str], int] = {}
        copies: dict[int, list[tuple[Endpoint, int]]] = {}
        for v in sorted(vertex_ids):
            eps = base.endpoints_at(v)
            side: list[tuple[Endpoint, int]] = []
            for ep in eps:
                v_new = next_v
                next_v += 1
                new_vertices.append(v_new)
                endpoint_target[(ep.edge, ep.end)] = v_new
                side.append((ep, v_new))
            new_vertices.remove(v)
            copies[v] = side

        new_edges = []
        for e in base.edges:
            tail = endpoint_target.get((e.id, TAIL), e.tail)
            head = endpoint_target.get((e.id, HEAD), e.head)
            new_edges.append(Edge(e.id, tail, head, e.length))
        graph = MetricGraph(new_vertices, new_edges, require_connected=False)
        return CutResult(graph, graph.component_count(), copies, base)

    def reverse_edge(self, edge_id: int) -> "MetricGraph":
        """Flip the orientation of one edge (s-annotations must be negated by the caller)."""
        new_edges = []
        for e in self.edges:
            if e.id == edge_id:
                new_edges.append(Edge(e.id, e.head, e.tail, e.length))
            else:
                new_edges.append(e)
        return MetricGraph(self.vertices, new_edges, require_connected=False)

    def __repr__(self):
        return f"MetricGraph(V={self.V}, E={self.E}, L={self.total_length:.6g})"


@dataclass(frozen=True)
class SubdivisionResult:
    graph: MetricGraph
    point_vertex: dict[PointOnEdge, int]


@dataclass(frozen=True)
class CutResult:
    """Result of cutting at degree-2 locations.

    ``copies[v]`` lists the two side copies of each cut vertex as
    (endpoint kept, new vertex id) pairs; a HEAD endpoint is the copy keeping
    the arriving edge (side 1), a TAIL endpoint the departing one (side 2).
    Edge ids and lengths are preserved; the total length is invariant.
    """

    graph: MetricGraph
    components: int
    copies: dict[int, list[tuple[Endpoint, int]]]
    base: MetricGraph

"""Mutable weighted undirected graphs, matchings, spanning forests.

Edge identity is a stable integer id assigned at insertion; a deleted and
re-inserted endpoint pair gets a fresh id. All weights are strictly
positive 64-bit floats; unweighted problems use weight 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

DEFAULT_TOLERANCE = 1e-9


class Error(Exception):
    """Base error for the package."""


class DataError(Error):
    """Bad input data or violated operation precondition."""


class ContractError(Error):
    """A component broke an internal invariant or an external contract."""


class BudgetError(DataError):
    """An oracle refused an input beyond its configured budget."""


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class UpdateEvent:
    """One dynamic update: edge-insert/-delete or vertex-insert/-delete.

    For vertex-insert, ``incident`` lists (neighbor, weight) pairs; weights
    may differ per incident edge.
    """

    kind: str  # "+e" | "-e" | "+v" | "-v"
    u: int = 0
    v: int = 0
    w: float = 1.0
    incident: tuple[tuple[int, float], ...] = ()

    @staticmethod
    def edge_insert(u: int, v: int, w: float = 1.0) -> "UpdateEvent":
        return UpdateEvent("+e", u, v, w)

    @staticmethod
    def edge_delete(u: int, v: int) -> "UpdateEvent":
        return UpdateEvent("-e", u, v)

    @staticmethod
    def vertex_insert(vid: int, incident: Iterable[tuple[int, float]] = ()) -> "UpdateEvent":
        return UpdateEvent("+v", u=vid, incident=tuple(incident))

    @staticmethod
    def vertex_delete(vid: int) -> "UpdateEvent":
        return UpdateEvent("-v", u=vid)


@dataclass
class DeltaReport:
    """Edges created/destroyed by one applied update."""

    added: list[tuple[int, int, int, float]] = field(default_factory=list)    # (eid, u, v, w)
    removed: list[tuple[int, int, int, float]] = field(default_factory=list)


@dataclass
class ValidityReport:
    ok: bool
    reason: str = ""
    edge: Optional[int] = None
    vertex: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SolutionStats:
    size: int
    total_weight: float
    max_edge_weight: float


class Graph:
    """Undirected simple graph with stable integer edge ids."""

    def __init__(self) -> None:
        self._vertices: set[int] = set()
        self._edges: dict[int, tuple[int, int, float]] = {}
        self._by_pair: dict[tuple[int, int], int] = {}
        self._adj: dict[int, set[int]] = {}
        self._next_id = 0

    # -- introspection ------------------------------------------------

    @property
    def vertices(self) -> set[int]:
        return self._vertices

    def num_vertices(self) -> int:
        return len(self._vertices)

    def num_edges(self) -> int:
        return len(self._edges)

    def edges(self) -> Iterator[tuple[int, int, int, float]]:
        """Yield (eid, u, v, w) in insertion order."""
        for eid, (u, v, w) in self._edges.items():
            yield eid, u, v, w

    def edge_ids(self) -> Iterator[int]:
        return iter(self._edges)

    def has_vertex(self, v: int) -> bool:
        return v in self._vertices

    def has_edge(self, u: int, v: int) -> bool:
        return _pair(u, v) in self._by_pair

    def has_edge_id(self, eid: int) -> bool:
        return eid in self._edges

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._by_pair[_pair(u, v)]
        except KeyError:
            raise DataError(f"no edge ({u},{v}) in graph") from None

    def endpoints(self, eid: int) -> tuple[int, int]:
        u, v, _ = self._edge(eid)
        return u, v

    def weight(self, eid: int) -> float:
        return self._edge(eid)[2]

    def edge(self, eid: int) -> tuple[int, int, float]:
        return self._edge(eid)

    def incident(self, v: int) -> set[int]:
        return self._adj.get(v, set())

    def degree(self, v: int) -> int:
        return len(self._adj.get(v, ()))

    def _edge(self, eid: int) -> tuple[int, int, float]:
        try:
            return self._edges[eid]
        except KeyError:
            raise DataError(f"no edge with id {eid}") from None

    # -- mutation -----------------------------------------------------

    def add_vertex(self, v: int) -> None:
        if v in self._vertices:
            raise DataError(f"vertex {v} already present")
        self._vertices.add(v)
        self._adj.setdefault(v, set())

    def ensure_vertex(self, v: int) -> None:
        if v not in self._vertices:
            self._vertices.add(v)
            self._adj.setdefault(v, set())

    def add_edge(self, u: int, v: int, w: float = 1.0) -> int:
        if u == v:
            raise DataError(f"self-loop at vertex {u} rejected")
        if not (w > 0):
            raise DataError(f"non-positive weight {w} on edge ({u},{v}) rejected")
        key = _pair(u, v)
        if key in self._by_pair:
            raise DataError(f"duplicate edge ({u},{v})")
        self.ensure_vertex(u)
        self.ensure_vertex(v)
        eid = self._next_id
        self._next_id += 1
        self._edges[eid] = (u, v, float(w))
        self._by_pair[key] = eid
        self._adj[u].add(eid)
        self._adj[v].add(eid)
        return eid

    def remove_edge_id(self, eid: int) -> tuple[int, int, float]:
        u, v, w = self._edge(eid)
        del self._edges[eid]
        del self._by_pair[_pair(u, v)]
        self._adj[u].discard(eid)
        self._adj[v].discard(eid)
        return u, v, w

    def remove_edge(self, u: int, v: int) -> int:
        eid = self.edge_id(u, v)
        self.remove_edge_id(eid)
        return eid

    def remove_vertex(self, v: int) -> list[tuple[int, int, int, float]]:
        if v not in self._vertices:
            raise DataError(f"vertex {v} not present")
        removed = []
        for eid in sorted(self._adj.get(v, ())):
            a, b, w = self._edge(eid)
            removed.append((eid, a, b, w))
        for eid, a, b, w in removed:
            self.remove_edge_id(eid)
        self._vertices.discard(v)
        self._adj.pop(v, None)
        return removed

    def apply_update(self, ev: UpdateEvent) -> DeltaReport:
        """Apply one dynamic update; errors name the offending element."""
        delta = DeltaReport()
        if ev.kind == "+e":
            if self.has_edge(ev.u, ev.v):
                raise DataError(f"edge-insert targets present edge ({ev.u},{ev.v})")
            eid = self.add_edge(ev.u, ev.v, ev.w)
            delta.added.append((eid, *self._edges[eid]))
        elif ev.kind == "-e":
            if not self.has_edge(ev.u, ev.v):
                raise DataError(f"edge-delete targets absent edge ({ev.u},{ev.v})")
            eid = self.edge_id(ev.u, ev.v)
            u, v, w = self.remove_edge_id(eid)
            delta.removed.append((eid, u, v, w))
        elif ev.kind == "+v":
            if self.has_vertex(ev.u):
                raise DataError(f"vertex-insert targets present vertex {ev.u}")
            self.add_vertex(ev.u)
            for nbr, w in ev.incident:
                eid = self.add_edge(ev.u, nbr, w)
                delta.added.append((eid, *self._edges[eid]))
        elif ev.kind == "-v":
            if not self.has_vertex(ev.u):
                raise DataError(f"vertex-delete targets absent vertex {ev.u}")
            for eid, a, b, w in self.remove_vertex(ev.u):
                delta.removed.append((eid, a, b, w))
        else:
            raise DataError(f"unknown update kind {ev.kind!r}")
        return delta

    # -- checks -------------------------------------------------------

    def audit(self) -> None:
        """Full-structure invariant check; raises ContractError on breach."""
        for eid, (u, v, w) in self._edges.items():
            if u == v:
                raise ContractError(f"self-loop {eid}")
            if u not in self._vertices or v not in self._vertices:
                raise ContractError(f"edge {eid} has missing endpoint")
            if not w > 0:
                raise ContractError(f"edge {eid} has non-positive weight")
            if self._by_pair.get(_pair(u, v)) != eid:
                raise ContractError(f"pair index out of sync for edge {eid}")
            if eid not in self._adj[u] or eid not in self._adj[v]:
                raise ContractError(f"adjacency out of sync for edge {eid}")
        if len(self._by_pair) != len(self._edges):
            raise ContractError("pair index size mismatch")
        for v, eids in self._adj.items():
            for eid in eids:
                if eid not in self._edges or v not in self._edges[eid][:2]:
                    raise ContractError(f"stale adjacency entry {eid} at vertex {v}")

    def aspect_ratio(self) -> float:
        if not self._edges:
            raise DataError("undefined aspect ratio: graph has no edges")
        weights = [w for (_, _, w) in self._edges.values()]
        return max(weights) / min(weights)

    def copy(self) -> "Graph":
        g = Graph()
        g._vertices = set(self._vertices)
        g._edges = dict(self._edges)
        g._by_pair = dict(self._by_pair)
        g._adj = {v: set(s) for v, s in self._adj.items()}
        g._next_id = self._next_id
        return g

    def components(self) -> dict[int, int]:
        """Connected-component label per vertex (smallest member id)."""
        label = {}
        for start in self._vertices:
            if start in label:
                continue
            stack, members = [start], [start]
            seen = {start}
            while stack:
                x = stack.pop()
                for eid in self._adj[x]:
                    a, b, _ = self._edges[eid]
                    y = b if a == x else a
                    if y not in seen:
                        seen.add(y)
                        members.append(y)
                        stack.append(y)
            lab = min(members)
            for m in members:
                label[m] = lab
        return label


class Matching:
    """Edge-id set with the matching invariant plus a vertex index."""

    def __init__(self, g: Graph, edge_ids: Iterable[int] = ()) -> None:
        self.g = g
        self.edges: dict[int, None] = {}   # insertion-ordered set
        self.vertex_index: dict[int, int] = {}
        for eid in edge_ids:
            self.add(eid)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, eid: int) -> bool:
        return eid in self.edges

    def edge_ids(self) -> list[int]:
        return list(self.edges)

    def matched_edge(self, v: int) -> Optional[int]:
        return self.vertex_index.get(v)

    def add(self, eid: int) -> None:
        u, v, _ = self.g.edge(eid)
        if eid in self.edges:
            raise DataError(f"edge {eid} already in matching")
        for x in (u, v):
            if x in self.vertex_index:
                raise DataError(f"vertex {x} already matched by edge {self.vertex_index[x]}")
        self.edges[eid] = None
        self.vertex_index[u] = eid
        self.vertex_index[v] = eid

    def remove(self, eid: int) -> None:
        if eid not in self.edges:
            raise DataError(f"edge {eid} not in matching")
        del self.edges[eid]
        u, v, _ = self.g.edge(eid)
        del self.vertex_index[u]
        del self.vertex_index[v]

    def discard_dead(self, eid: int, endpoints: tuple[int, int]) -> bool:
        """Drop an edge whose graph edge was already deleted. O(1)."""
        if eid not in self.edges:
            return False
        del self.edges[eid]
        for x in endpoints:
            if self.vertex_index.get(x) == eid:
                del self.vertex_index[x]
        return True

    def copy(self) -> "Matching":
        m = Matching.__new__(Matching)
        m.g = self.g
        m.edges = dict(self.edges)
        m.vertex_index = dict(self.vertex_index)
        return m


class SpanningForest:
    """Edge-id set meant to be acyclic and span every component of g."""

    def __init__(self, g: Graph, edge_ids: Iterable[int] = ()) -> None:
        self.g = g
        self.edges: dict[int, None] = {}
        for eid in edge_ids:
            if eid in self.edges:
                raise DataError(f"edge {eid} listed twice in forest")
            g.edge(eid)  # existence check
            self.edges[eid] = None

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, eid: int) -> bool:
        return eid in self.edges

    def edge_ids(self) -> list[int]:
        return list(self.edges)

    def component_labels(self) -> dict[int, int]:
        """Vertex -> forest-component label (smallest member id)."""
        uf = UnionFind(self.g.vertices)
        for eid in self.edges:
            u, v, _ = self.g.edge(eid)
            uf.union(u, v)
        return uf.labels()


class UnionFind:
    def __init__(self, items: Iterable[int] = ()) -> None:
        self.parent: dict[int, int] = {}
        self.rank: dict[int, int] = {}
        for x in items:
            self.add(x)

    def add(self, x: int) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True

    def labels(self) -> dict[int, int]:
        root_min: dict[int, int] = {}
        for x in self.parent:
            r = self.find(x)
            root_min[r] = min(root_min.get(r, x), x)
        return {x: root_min[self.find(x)] for x in self.parent}


# -- validation and stats ---------------------------------------------


def validate_matching(g: Graph, m: Matching | Iterable[int]) -> ValidityReport:
    """ok iff no two edges share an endpoint and all edges exist in g."""
    eids = m.edge_ids() if isinstance(m, Matching) else list(m)
    seen_vertices: dict[int, int] = {}
    for eid in eids:
        if not g.has_edge_id(eid):
            return ValidityReport(False, "missing edge", edge=eid)
        u, v, _ = g.edge(eid)
        for x in (u, v):
            if x in seen_vertices:
                return ValidityReport(False, "shared endpoint", edge=eid, vertex=x)
            seen_vertices[x] = eid
    return ValidityReport(True)


def validate_forest(g: Graph, f: SpanningForest | Iterable[int]) -> ValidityReport:
    """ok iff acyclic and forest components equal graph components."""
    eids = f.edge_ids() if isinstance(f, SpanningForest) else list(f)
    uf = UnionFind(g.vertices)
    for eid in eids:
        if not g.has_edge_id(eid):
            return ValidityReport(False, "missing edge", edge=eid)
        u, v, _ = g.edge(eid)
        if not uf.union(u, v):
            return ValidityReport(False, "cycle", edge=eid)
    graph_labels = g.components()
    forest_labels = uf.labels()
    for v in g.vertices:
        if graph_labels[v] != forest_labels[v]:
            return ValidityReport(False, "does not span", vertex=v)
    return ValidityReport(True)


def solution_stats(g: Graph, s: Matching | SpanningForest) -> SolutionStats:
    """Size/total/max stats; rejects invalid solutions."""
    if isinstance(s, Matching):
        report = validate_matching(g, s)
    elif isinstance(s, SpanningForest):
        report = validate_forest(g, s)
    else:
        raise DataError(f"unsupported solution type {type(s).__name__}")
    if not report:
        raise DataError(f"invalid solution: {report.reason} "
                        f"(edge={report.edge}, vertex={report.vertex})")
    return edge_set_stats(g, s.edge_ids())


def edge_set_stats(g: Graph, eids: Iterable[int]) -> SolutionStats:
    total = 0.0
    mx = 0.0
    n = 0
    for eid in eids:
        w = g.weight(eid)
        total += w
        mx = max(mx, w)
        n += 1
    return SolutionStats(n, total, mx)

"""Simple connected graphs: parsing, validation, and the metric queries
(degree, BFS distance, restricted adjacency) every other module builds on.

Vertices are dense 0-based integers; the edge-list parser infers the vertex
count from the largest id it sees. Graphs are immutable after construction.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from .errors import EdgeListParseError, GraphValidationError, UsageError

DEFAULT_MAX_N = 4096


def _max_n() -> int:
    raw = os.environ.get("LOOPWALK_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LOOPWALK_MAX_N must be an integer, got {raw!r}")


@dataclass(frozen=True)
class Graph:
    """Simple connected undirected graph.

    edges is a sorted tuple of (a, b) pairs with a < b; adjacency[i] is the
    sorted tuple of neighbors of i.
    """

    n: int
    edges: tuple
    adjacency: tuple

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def has_edge(self, a: int, b: int) -> bool:
        if a > b:
            a, b = b, a
        return (a, b) in self._edge_set

    @property
    def _edge_set(self):
        # cached on first use; object.__setattr__ because frozen
        es = getattr(self, "_edge_set_cache", None)
        if es is None:
            es = frozenset(self.edges)
            object.__setattr__(self, "_edge_set_cache", es)
        return es


@dataclass(frozen=True)
class VertexPair:
    """Source/target pair with its BFS distance d >= 1."""

    u: int
    v: int
    d: int


@dataclass(frozen=True)
class RestrictedAdjacency:
    """Adjacency of the graph with u, v deleted.

    interior maps local index -> original vertex id (ascending order).
    matrix is the (n-2)x(n-2) 0/1 interior adjacency; b_u / b_v are 0/1
    indicator vectors over the interior marking neighbors of u and of v.
    """

    interior: tuple
    matrix: tuple
    b_u: tuple
    b_v: tuple


def from_edges(edges, n=None) -> Graph:
    """Build and validate a Graph from an iterable of (a, b) pairs."""
    norm = []
    seen = set()
    max_id = -1
    for a, b in edges:
        a, b = int(a), int(b)
        if a == b:
            raise GraphValidationError(f"self-loop at vertex {a} (loops enter only via Q)")
        if a > b:
            a, b = b, a
        if (a, b) in seen:
            raise GraphValidationError(f"duplicate edge ({a}, {b})")
        if a < 0:
            raise GraphValidationError(f"negative vertex id {a}")
        seen.add((a, b))
        norm.append((a, b))
        max_id = max(max_id, b)
    if n is None:
        n = max_id + 1
    if n < 1:
        raise GraphValidationError("graph must have at least one vertex")
    if max_id >= n:
        raise GraphValidationError(f"vertex id {max_id} out of range for n={n}")
    cap = _max_n()
    if n > cap:
        raise GraphValidationError(f"n={n} exceeds vertex cap {cap} (set LOOPWALK_MAX_N to raise)")

    adj = [[] for _ in range(n)]
    for a, b in norm:
        adj[a].append(b)
        adj[b].append(a)
    g = Graph(
        n=n,
        edges=tuple(sorted(norm)),
        adjacency=tuple(tuple(sorted(xs)) for xs in adj),
    )
    _check_connected(g)
    return g


def _check_connected(g: Graph) -> None:
    seen = [False] * g.n
    seen[0] = True
    q = deque([0])
    while q:
        x = q.popleft()
        for y in g.adjacency[x]:
            if not seen[y]:
                seen[y] = True
                q.append(y)
    if not all(seen):
        inside = seen.index(True)
        outside = seen.index(False)
        raise GraphValidationError(
            f"graph is disconnected: no path between vertex {inside} and vertex {outside}"
        )


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated integer pairs, one edge per line.

    Lines starting with '#' and blank lines are ignored.
    """
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"line {lineno}: expected two integers, got {line!r}")
        edges.append((a, b))
    if not edges:
        raise EdgeListParseError("no edges found in input")
    return from_edges(edges)


def canonical_edge_list(g: Graph) -> str:
    """Canonical text form: edges sorted lexicographically, one per line."""
    return "\n".join(f"{a} {b}" for a, b in g.edges) + "\n"


def max_degree(g: Graph) -> int:
    return max(len(xs) for xs in g.adjacency)


def bfs_distances(g: Graph, src: int):
    """List of BFS distances from src (graph is connected, so all finite)."""
    if not 0 <= src < g.n:
        raise UsageError(f"vertex {src} out of range [0, {g.n})")
    dist = [-1] * g.n
    dist[src] = 0
    q = deque([src])
    while q:
        x = q.popleft()
        for y in g.adjacency[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def distance(g: Graph, u: int, v: int) -> int:
    if not 0 <= v < g.n:
        raise UsageError(f"vertex {v} out of range [0, {g.n})")
    return bfs_distances(g, u)[v]


def vertex_pair(g: Graph, u: int, v: int) -> VertexPair:
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise UsageError(f"vertex pair ({u}, {v}) out of range [0, {g.n})")
    if u == v:
        raise UsageError("source and target must be distinct vertices")
    return VertexPair(u=u, v=v, d=distance(g, u, v))


def restricted_adjacency(g: Graph, pair: VertexPair) -> RestrictedAdjacency:
    """Adjacency restricted to V \\ {u, v}, plus boundary indicator vectors."""
    u, v = pair.u, pair.v
    interior = tuple(x for x in range(g.n) if x != u and x != v)
    index = {x: i for i, x in enumerate(interior)}
    k = len(interior)
    matrix = [[0] * k for _ in range(k)]
    for a, b in g.edges:
        if a in index and b in index:
            matrix[index[a]][index[b]] = 1
            matrix[index[b]][index[a]] = 1
    b_u = tuple(1 if g.has_edge(u, x) else 0 for x in interior)
    b_v = tuple(1 if g.has_edge(v, x) else 0 for x in interior)
    return RestrictedAdjacency(
        interior=interior,
        matrix=tuple(tuple(row) for row in matrix),
        b_u=b_u,
        b_v=b_v,
    )


# Small built-in family used by tests and the scripts.

def path_graph(n: int) -> Graph:
    return from_edges([(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return from_edges([(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return from_edges([(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return from_edges([(i, j) for i in range(n) for j in range(i + 1, n)])

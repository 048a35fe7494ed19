"""Undirected graphs, builtin families, and shortest-path metrics."""

from __future__ import annotations

import operator
from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "GraphError",
    "Graph",
    "ThetaSpec",
    "make_theta",
    "make_path",
    "make_cycle",
    "distance_matrix",
    "is_connected",
    "is_isometrically_embedded",
    "parse_edgelist",
    "format_edgelist",
    "read_edgelist",
    "write_edgelist",
    "graph_from_uri",
    "theta_spec_from_uri",
]


class GraphError(ValueError):
    """Invalid graph construction, file, or an operation on an unsuitable graph."""


def _vertex(value) -> int:
    try:
        return operator.index(value)
    except TypeError:
        raise GraphError(f"vertex must be an integer, got {value!r}") from None


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1, immutable after construction.

    Edges are stored as lexicographically sorted (u, v) pairs with u < v.
    Loops and parallel edges are rejected.  ``labels``, when given, holds one
    display string per vertex; labels are presentation only and do not take
    part in equality.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = _vertex(self.n)
        if n < 1:
            raise GraphError(f"vertex count must be positive, got {n}")
        object.__setattr__(self, "n", n)
        canon = []
        seen = set()
        for e in self.edges:
            try:
                u, v = e
            except (TypeError, ValueError):
                raise GraphError(f"edge must be a pair of vertices, got {e!r}") from None
            u, v = _vertex(u), _vertex(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise GraphError(f"loop at vertex {u} is not allowed")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v))
        canon.sort()
        object.__setattr__(self, "edges", tuple(canon))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise GraphError(f"expected {n} labels, got {len(labels)}")
            object.__setattr__(self, "labels", labels)
        adj = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))
        object.__setattr__(self, "_dist", None)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of v in ascending order."""
        v = _vertex(v)
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} out of range for {self.n} vertices")
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        u, v = _vertex(u), _vertex(v)
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_set()

    def _edge_set(self) -> frozenset:
        cached = getattr(self, "_edges_frozen", None)
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edges_frozen", cached)
        return cached


def _bfs_row(adj, n: int, source: int) -> list[int]:
    row = [-1] * n
    row[source] = 0
    queue = deque((source,))
    while queue:
        u = queue.popleft()
        du = row[u] + 1
        for w in adj[u]:
            if row[w] < 0:
                row[w] = du
                queue.append(w)
    return row


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs shortest-path distances of a connected graph.

    Returns an immutable integer matrix, computed once per graph and shared by
    later calls.  Raises GraphError naming a separated vertex pair when g is
    disconnected.
    """
    cached = g._dist
    if cached is not None:
        return cached
    adj = g._adj
    n = g.n
    rows = []
    for s in range(n):
        row = _bfs_row(adj, n, s)
        if s == 0 and -1 in row:
            t = row.index(-1)
            raise GraphError(f"graph is not connected: vertices 0 and {t} have no joining path")
        rows.append(row)
    d = np.array(rows, dtype=np.int64)
    d.setflags(write=False)
    object.__setattr__(g, "_dist", d)
    return d


def is_connected(g: Graph) -> bool:
    return _bfs_row(g._adj, g.n, 0).count(-1) == 0


@dataclass(frozen=True)
class ThetaSpec:
    """Leg lengths (alpha, beta, gamma) of a theta graph.

    A theta graph is the union of three internally disjoint paths with common
    endpoints; legs must be positive and at most one may equal 1 (two legs of
    length 1 would create a parallel edge).
    """

    alpha: int
    beta: int
    gamma: int

    def __post_init__(self):
        legs = tuple(_vertex(x) for x in (self.alpha, self.beta, self.gamma))
        if min(legs) < 1:
            raise GraphError(f"leg lengths must be positive, got {legs}")
        if sum(1 for x in legs if x == 1) > 1:
            raise GraphError(f"at most one leg may have length 1, got {legs}")
        object.__setattr__(self, "alpha", legs[0])
        object.__setattr__(self, "beta", legs[1])
        object.__setattr__(self, "gamma", legs[2])

    @property
    def legs(self) -> tuple[int, int, int]:
        return (self.alpha, self.beta, self.gamma)

    @property
    def n_vertices(self) -> int:
        return self.alpha + self.beta + self.gamma - 1

    @property
    def n_edges(self) -> int:
        return self.alpha + self.beta + self.gamma

    def normalized(self) -> "ThetaSpec":
        """The same graph with legs sorted ascending."""
        a, b, c = sorted(self.legs)
        return ThetaSpec(a, b, c)

    def uri(self) -> str:
        return f"theta:{self.alpha},{self.beta},{self.gamma}"

    @classmethod
    def parse(cls, text: str) -> "ThetaSpec":
        parts = text.split(",")
        if len(parts) != 3:
            raise GraphError(f"expected three comma-separated leg lengths, got {text!r}")
        try:
            legs = [int(p.strip()) for p in parts]
        except ValueError:
            raise GraphError(f"leg lengths must be integers, got {text!r}") from None
        return cls(*legs)

    def _leg_length(self, kind: str) -> int:
        return {"x": self.alpha, "y": self.beta, "z": self.gamma}[kind]

    def _interior_base(self, kind: str) -> int:
        # interior vertices sit after the two junctions, grouped x then y then z
        if kind == "x":
            return 2
        if kind == "y":
            return self.alpha + 1
        return self.alpha + self.beta

    def vertex_index(self, name: str) -> int:
        """Index of a path-position name such as "x0", "y2" or "z11".

        Position 0 on every leg is the bottom junction (index 0) and the full
        leg length is the top junction (index 1); interior positions follow in
        path order, legs grouped x, y, z.
        """
        name = name.strip()
        kind, digits = name[:1], name[1:]
        if kind not in ("x", "y", "z") or not digits.isdigit():
            raise GraphError(f"invalid theta vertex name {name!r}")
        j = int(digits)
        length = self._leg_length(kind)
        if j > length:
            raise GraphError(f"position {name!r} exceeds leg length {length}")
        if j == 0:
            return 0
        if j == length:
            return 1
        return self._interior_base(kind) + j - 1

    def path_vertices(self, kind: str) -> tuple[int, ...]:
        """Vertex indices along one leg, bottom junction to top junction."""
        if kind not in ("x", "y", "z"):
            raise GraphError(f"leg must be 'x', 'y' or 'z', got {kind!r}")
        length = self._leg_length(kind)
        base = self._interior_base(kind)
        return (0, *range(base, base + length - 1), 1)


def make_theta(spec, beta: int | None = None, gamma: int | None = None) -> Graph:
    """Theta graph for a ThetaSpec (or three leg lengths given directly).

    Vertex 0 and 1 are the junctions of degree 3; interior vertices follow in
    path order along the x, y and z legs.
    """
    if beta is not None or gamma is not None:
        spec = ThetaSpec(spec, beta, gamma)
    elif not isinstance(spec, ThetaSpec):
        spec = ThetaSpec(*spec)
    edges = []
    for kind in ("x", "y", "z"):
        seq = spec.path_vertices(kind)
        edges.extend(zip(seq, seq[1:]))
    labels = [""] * spec.n_vertices
    labels[0] = "x0=y0=z0"
    labels[1] = f"x{spec.alpha}=y{spec.beta}=z{spec.gamma}"
    for kind in ("x", "y", "z"):
        for j in range(1, spec._leg_length(kind)):
            labels[spec.vertex_index(f"{kind}{j}")] = f"{kind}{j}"
    return Graph(spec.n_vertices, tuple(edges), tuple(labels))


def make_path(n: int) -> Graph:
    """Path graph on n >= 1 vertices."""
    n = _vertex(n)
    if n < 1:
        raise GraphError(f"path needs at least 1 vertex, got {n}")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def make_cycle(m: int) -> Graph:
    """Cycle graph on m >= 3 vertices."""
    m = _vertex(m)
    if m < 3:
        raise GraphError(f"cycle needs at least 3 vertices, got {m}")
    edges = [(i, i + 1) for i in range(m - 1)]
    edges.append((m - 1, 0))
    return Graph(m, tuple(edges))


def is_isometrically_embedded(h: Graph, g: Graph, vertex_map) -> bool:
    """Whether vertex_map realizes h inside g with all distances preserved.

    vertex_map is a sequence over h's vertices (or an equivalent mapping).  It
    must be injective and must send every edge of h to an edge of g; either
    violation raises GraphError.  Returns True iff every pairwise distance in
    h equals the distance between the image vertices in g.
    """
    if isinstance(vertex_map, Mapping):
        try:
            phi = [_vertex(vertex_map[v]) for v in range(h.n)]
        except KeyError as missing:
            raise GraphError(f"vertex map has no image for vertex {missing}") from None
    elif isinstance(vertex_map, Sequence) or isinstance(vertex_map, np.ndarray):
        phi = [_vertex(x) for x in vertex_map]
        if len(phi) != h.n:
            raise GraphError(f"vertex map must cover all {h.n} vertices, got {len(phi)}")
    else:
        raise GraphError(f"vertex map must be a sequence or mapping, got {type(vertex_map)!r}")
    for img in phi:
        if not 0 <= img < g.n:
            raise GraphError(f"image vertex {img} out of range for {g.n} vertices")
    if len(set(phi)) != len(phi):
        raise GraphError("vertex map is not injective")
    for u, v in h.edges:
        if not g.has_edge(phi[u], phi[v]):
            raise GraphError(f"edge ({u}, {v}) maps to the non-edge ({phi[u]}, {phi[v]})")
    dh = distance_matrix(h)
    dg = distance_matrix(g)
    idx = np.asarray(phi)
    return bool((dh == dg[np.ix_(idx, idx)]).all())


def _data_lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_edgelist(text: str) -> Graph:
    """Parse the edge-list format: first line the vertex count, then one
    "u v" pair per line; '#' starts a comment and blank lines are skipped."""
    lines = list(_data_lines(text))
    if not lines:
        raise GraphError("edge list is empty")
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphError(f"first line must be the vertex count, got {lines[0]!r}") from None
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"expected 'u v' on edge line, got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphError(f"edge endpoints must be integers, got {line!r}") from None
    return Graph(n, tuple(edges))


def format_edgelist(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_edgelist(path) -> Graph:
    return parse_edgelist(Path(path).read_text())


def write_edgelist(g: Graph, path) -> None:
    Path(path).write_text(format_edgelist(g))


def theta_spec_from_uri(uri: str) -> ThetaSpec | None:
    """The ThetaSpec for a "theta:A,B,C" URI, or None for any other argument."""
    if uri.startswith("theta:"):
        return ThetaSpec.parse(uri[len("theta:"):])
    return None


def graph_from_uri(uri: str) -> Graph:
    """Graph named by a builtin URI (theta:A,B,C, path:N, cycle:N) or a file path."""
    if uri.startswith("theta:"):
        return make_theta(ThetaSpec.parse(uri[len("theta:"):]))
    for prefix, builder in (("path:", make_path), ("cycle:", make_cycle)):
        if uri.startswith(prefix):
            arg = uri[len(prefix):]
            try:
                count = int(arg)
            except ValueError:
                raise GraphError(f"expected an integer in {uri!r}") from None
            return builder(count)
    path = Path(uri)
    if not path.exists():
        raise GraphError(f"no builtin URI or file named {uri!r}")
    return read_edgelist(path)

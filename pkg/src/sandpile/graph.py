"""Graphs with a sink, their Laplacians and subgraph embeddings."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .linalg import IntMatrix, det_exact, inverse_rational

SINK = "sink"

_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class GraphError(ValueError):
    pass


class MorphismError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class SinkedGraph:
    """Finite loop-free multigraph on the non-sink vertices plus a sink.

    ``adjacency[i][j]`` is the edge multiplicity between non-sink vertices
    and ``sink_edges[i]`` the number of edges from vertex i to the sink.
    Vertices with a sink edge form the boundary, the rest the interior.
    """

    vertices: tuple
    adjacency: tuple[tuple[int, ...], ...]
    sink_edges: tuple[int, ...]
    coords: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        n = len(self.vertices)
        if n == 0:
            raise GraphError("graph has no non-sink vertices")
        if len(set(self.vertices)) != n:
            raise GraphError("duplicate vertex ids")
        if len(self.adjacency) != n or any(len(r) != n for r in self.adjacency):
            raise GraphError("adjacency must be square over the vertex list")
        if len(self.sink_edges) != n:
            raise GraphError("sink_edges length mismatch")
        if self.coords is not None and len(self.coords) != n:
            raise GraphError("coords length mismatch")
        for i in range(n):
            if self.adjacency[i][i]:
                raise GraphError(f"self-loop at {self.vertices[i]!r}")
            if self.sink_edges[i] < 0:
                raise GraphError("negative sink multiplicity")
            for j in range(i + 1, n):
                a = self.adjacency[i][j]
                if a < 0 or a != self.adjacency[j][i]:
                    raise GraphError("adjacency must be symmetric and non-negative")
        if not any(self.sink_edges):
            raise GraphError("no vertex is joined to the sink")
        # every vertex must reach the sink
        seen = {i for i in range(n) if self.sink_edges[i]}
        todo = deque(seen)
        while todo:
            i = todo.popleft()
            for j, _ in self.neighbors[i]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        if len(seen) != n:
            raise GraphError("graph with sink is disconnected")

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        return tuple(
            tuple((j, m) for j, m in enumerate(row) if m) for row in self.adjacency
        )

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(row) + s for row, s in zip(self.adjacency, self.sink_edges))

    @cached_property
    def boundary(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.sink_edges) if s)

    @cached_property
    def interior(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.sink_edges) if not s)

    @cached_property
    def laplacian(self) -> IntMatrix:
        deg = self.degrees
        return IntMatrix(
            ([-deg[i] if i == j else m for j, m in enumerate(row)] for i, row in enumerate(self.adjacency)),
            cols=len(self),
        )

    @cached_property
    def det(self) -> int:
        """``|det Δ|``, the number of spanning trees of the graph with sink."""
        return abs(det_exact(self.laplacian))

    @cached_property
    def inverse_laplacian(self) -> tuple[tuple[tuple[int, ...], ...], int]:
        """``(N, d)`` with ``Δ^{-1} = N / d`` and ``d = |det Δ|``."""
        d = self.det
        inv = inverse_rational(self.laplacian)
        N = tuple(tuple(int(x * d) for x in row) for row in inv)
        assert all((x * d).denominator == 1 for row in inv for x in row)
        return N, d

    def apply_laplacian(self, f: Sequence) -> tuple:
        """Δ·f for an integer or rational vector f."""
        deg = self.degrees
        return tuple(
            sum(m * f[j] for j, m in nb) - deg[i] * f[i] for i, nb in enumerate(self.neighbors)
        )

    def to_json(self) -> dict:
        n = len(self)
        out = {
            "vertices": [list(v) if isinstance(v, tuple) else v for v in self.vertices],
            "adjacency": [
                [i, j, self.adjacency[i][j]] for i in range(n) for j in range(i + 1, n) if self.adjacency[i][j]
            ],
            "sink": [[i, s] for i, s in enumerate(self.sink_edges) if s],
        }
        if self.coords is not None:
            out["coords"] = [list(c) for c in self.coords]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping) -> SinkedGraph:
        try:
            vertices = tuple(tuple(v) if isinstance(v, list) else v for v in data["vertices"])
            n = len(vertices)
            adj = [[0] * n for _ in range(n)]
            for i, j, m in data.get("adjacency", ()):
                if i == j:
                    raise GraphError("self-loop in adjacency list")
                adj[i][j] += int(m)
                adj[j][i] += int(m)
            sink = [0] * n
            for i, m in data.get("sink", ()):
                sink[i] += int(m)
            coords = data.get("coords")
            if coords is not None:
                coords = tuple((int(x), int(y)) for x, y in coords)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"malformed graph JSON: {exc}") from exc
        return cls(vertices, tuple(map(tuple, adj)), tuple(sink), coords)


def reduced_laplacian(graph: SinkedGraph) -> IntMatrix:
    """Adjacency minus degree over the non-sink vertices (diagonal ``-deg``)."""
    return graph.laplacian


def interior_laplacian(graph: SinkedGraph) -> IntMatrix:
    """Rows of the reduced Laplacian at interior vertices (may have 0 rows)."""
    return graph.laplacian.select_rows(graph.interior)


def from_edge_list(edges: Iterable[Sequence], vertices: Sequence[Hashable] | None = None,
                   sink: Hashable = SINK, coords=None) -> SinkedGraph:
    """Build a graph from ``(u, v)`` or ``(u, v, multiplicity)`` triples.

    Edges touching ``sink`` become sink edges. Vertex order follows
    ``vertices`` when given, first appearance otherwise.
    """
    order = list(vertices) if vertices is not None else []
    known = set(order)
    parsed = []
    for e in edges:
        u, v, m = (*e, 1) if len(e) == 2 else e
        if u == v:
            raise GraphError(f"self-loop at {u!r}")
        if m <= 0:
            raise GraphError("edge multiplicity must be positive")
        for w in (u, v):
            if w != sink and w not in known:
                if vertices is not None:
                    raise GraphError(f"edge endpoint {w!r} not in vertex list")
                known.add(w)
                order.append(w)
        parsed.append((u, v, m))
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    adj = [[0] * n for _ in range(n)]
    s = [0] * n
    for u, v, m in parsed:
        if u == sink:
            s[idx[v]] += m
        elif v == sink:
            s[idx[u]] += m
        else:
            adj[idx[u]][idx[v]] += m
            adj[idx[v]][idx[u]] += m
    return SinkedGraph(tuple(order), tuple(map(tuple, adj)), tuple(s), coords)


def lattice_domain(points: Iterable[tuple[int, int]]) -> SinkedGraph:
    """Finite subset of Z^2 with every missing lattice neighbour wired to the sink.

    Vertices are ordered row-major (y outer, x inner).
    """
    pts = sorted({(int(x), int(y)) for x, y in points}, key=lambda p: (p[1], p[0]))
    if not pts:
        raise GraphError("empty domain")
    idx = {p: i for i, p in enumerate(pts)}
    seen = {pts[0]}
    todo = [pts[0]]
    while todo:
        x, y = todo.pop()
        for dx, dy in _STEPS:
            q = (x + dx, y + dy)
            if q in idx and q not in seen:
                seen.add(q)
                todo.append(q)
    if len(seen) != len(pts):
        raise GraphError("lattice domain is not 4-connected")
    n = len(pts)
    adj = [[0] * n for _ in range(n)]
    sink = [4] * n
    for p, i in idx.items():
        for dx, dy in _STEPS:
            j = idx.get((p[0] + dx, p[1] + dy))
            if j is not None:
                adj[i][j] = 1
                sink[i] -= 1
    return SinkedGraph(tuple(pts), tuple(map(tuple, adj)), tuple(sink), tuple(pts))


def rectangle_graph(p: int, q: int) -> SinkedGraph:
    """Lattice points of the open rectangle ``(0, p) x (0, q)``."""
    if p < 2 or q < 2:
        raise GraphError(f"rectangle ({p}, {q}) has no interior lattice points")
    return lattice_domain((x, y) for y in range(1, q) for x in range(1, p))


def path_graph(n: int) -> SinkedGraph:
    """Integer points of ``(0, n)``; both ends are joined to the sink."""
    if n < 2:
        raise GraphError("path needs n >= 2")
    k = n - 1
    adj = [[int(abs(i - j) == 1) for j in range(k)] for i in range(k)]
    sink = [0] * k
    sink[0] += 1
    sink[-1] += 1
    return SinkedGraph(tuple(range(1, n)), tuple(map(tuple, adj)), tuple(sink))


def diamond_points(radius: int, center: tuple[int, int] = (0, 0)) -> set[tuple[int, int]]:
    cx, cy = center
    return {
        (cx + x, cy + y)
        for x in range(-radius, radius + 1)
        for y in range(-radius, radius + 1)
        if abs(x) + abs(y) <= radius
    }


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Counter-clockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _in_hull(hull, p) -> bool:
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        a, b = hull
        return (_cross(a, b, p) == 0
                and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))
    return all(_cross(hull[i], hull[(i + 1) % len(hull)], p) >= 0 for i in range(len(hull)))


def is_convex_domain(points: Iterable[tuple[int, int]]) -> bool:
    """True if the set equals the lattice points of its real convex hull."""
    pts = set(points)
    if not pts:
        return False
    hull = convex_hull(pts)
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if (x, y) not in pts and _in_hull(hull, (x, y)):
                return False
    return True


@dataclass(frozen=True)
class Embedding:
    """Injective vertex map under which the source Laplacian is a principal
    submatrix of the target Laplacian.

    ``vertex_map[i]`` is the target index of source vertex i.
    """

    source: SinkedGraph
    target: SinkedGraph
    vertex_map: tuple[int, ...]


def embed(sub: SinkedGraph, sup: SinkedGraph, vertex_map: Mapping | Sequence | None = None) -> Embedding:
    """Validate and build an embedding.

    ``vertex_map`` maps source vertex ids to target vertex ids (a mapping),
    or lists target ids in source order. ``None`` means identity on ids.
    """
    if vertex_map is None:
        targets = list(sub.vertices)
    elif isinstance(vertex_map, Mapping):
        try:
            targets = [vertex_map[v] for v in sub.vertices]
        except KeyError as exc:
            raise MorphismError(f"vertex {exc.args[0]!r} is not mapped") from None
    else:
        targets = list(vertex_map)
    if len(targets) != len(sub):
        raise MorphismError("vertex map has wrong length")
    try:
        image = tuple(sup.index[t] for t in targets)
    except KeyError as exc:
        raise MorphismError(f"target vertex {exc.args[0]!r} does not exist") from None
    if len(set(image)) != len(image):
        raise MorphismError("vertex map is not injective")
    L1, L2 = sub.laplacian, sup.laplacian
    for i, a in enumerate(image):
        for j, b in enumerate(image):
            if L1[i, j] != L2[a, b]:
                raise MorphismError(
                    f"Laplacian entry ({sub.vertices[i]!r}, {sub.vertices[j]!r}) is {L1[i, j]}"
                    f" but {L2[a, b]} in the target"
                )
    return Embedding(sub, sup, image)


def translate_embedding(sub: SinkedGraph, sup: SinkedGraph, offset: tuple[int, int] = (0, 0)) -> Embedding:
    """Embed one lattice domain in another by translating coordinates."""
    if sub.coords is None or sup.coords is None:
        raise MorphismError("translation embeddings need lattice coordinates")
    pos = {c: v for c, v in zip(sup.coords, sup.vertices)}
    dx, dy = offset
    try:
        return embed(sub, sup, [pos[(x + dx, y + dy)] for x, y in sub.coords])
    except KeyError as exc:
        raise MorphismError(f"point {exc.args[0]} is outside the target domain") from None


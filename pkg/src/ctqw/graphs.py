"""Simple undirected graphs: named families, Laplacians, complements, file I/O.

Vertices are 0-indexed.  Edges are stored as a frozenset of ``(u, v)`` pairs
with ``u < v``; loops and duplicate edges are rejected at construction so that
malformed input fails loudly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EdgeListError, InvalidOrderError, UnsupportedFamilyError

FAMILY_KINDS = ("cycle", "complete", "star", "path", "wheel", "complete_bipartite")

_FAMILY_MIN_ORDER = {
    "cycle": 3,
    "complete": 1,
    "star": 2,
    "path": 1,
    "wheel": 4,
    "complete_bipartite": 2,
}


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise EdgeListError(f"vertex count must be >= 1, got {self.n}")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise EdgeListError(f"edge ({u}, {v}) out of range for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph, rejecting loops and duplicates (also reversed ones)."""
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise EdgeListError(f"loop edge ({u}, {v}) not allowed")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise EdgeListError(f"duplicate edge ({u}, {v})")
            seen.add(key)
        return cls(n, frozenset(seen))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency_lists(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return nbrs


@dataclass(frozen=True)
class GraphFamily:
    """A named graph family instance: kind + order (+ part sizes for bipartite)."""

    kind: str
    n: int
    parts: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise UnsupportedFamilyError(
                f"unknown family {self.kind!r}; expected one of {FAMILY_KINDS}"
            )
        if self.n < _FAMILY_MIN_ORDER[self.kind]:
            raise InvalidOrderError(
                f"{self.kind} graph needs n >= {_FAMILY_MIN_ORDER[self.kind]}, got {self.n}"
            )
        if self.kind == "complete_bipartite":
            parts = self.parts if self.parts is not None else (self.n // 2, self.n - self.n // 2)
            if len(parts) != 2 or parts[0] < 1 or parts[1] < 1:
                raise InvalidOrderError(f"bipartite part sizes must be >= 1, got {parts}")
            if parts[0] + parts[1] != self.n:
                raise InvalidOrderError(
                    f"bipartite part sizes {parts} must sum to n={self.n}"
                )
            object.__setattr__(self, "parts", (int(parts[0]), int(parts[1])))
        elif self.parts is not None:
            raise InvalidOrderError(f"{self.kind} graph takes no part sizes")


def build_family(family: GraphFamily) -> Graph:
    """Canonical labeled graph for a family.

    Conventions: cycle vertices in ring order 0..n-1; star and wheel hubs are
    vertex 0; bipartite parts are 0..a-1 and a..n-1.
    """
    n = family.n
    kind = family.kind
    if kind == "cycle":
        edges = [(k, (k + 1) % n) for k in range(n)]
    elif kind == "complete":
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif kind == "star":
        edges = [(0, v) for v in range(1, n)]
    elif kind == "path":
        edges = [(k, k + 1) for k in range(n - 1)]
    elif kind == "wheel":
        rim = [(k, k + 1 if k + 1 < n else 1) for k in range(1, n)]
        edges = [(0, v) for v in range(1, n)] + rim
    elif kind == "complete_bipartite":
        a, b = family.parts
        edges = [(u, v) for u in range(a) for v in range(a, a + b)]
    else:  # pragma: no cover - guarded by GraphFamily
        raise UnsupportedFamilyError(kind)
    return Graph.from_edges(n, edges)


def cycle_graph(n: int) -> Graph:
    return build_family(GraphFamily("cycle", n))


def complete_graph(n: int) -> Graph:
    return build_family(GraphFamily("complete", n))


def star_graph(n: int) -> Graph:
    return build_family(GraphFamily("star", n))


def adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def laplacian(g: Graph) -> np.ndarray:
    """Degree matrix minus adjacency matrix; rows sum to zero exactly."""
    lap = -adjacency(g)
    lap[np.diag_indices(g.n)] = g.degrees().astype(float)
    return lap


def complement(g: Graph) -> Graph:
    edges = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if (u, v) not in g.edges
    ]
    return Graph.from_edges(g.n, edges)


def connected_component_count(g: Graph) -> int:
    nbrs = g.adjacency_lists()
    seen = [False] * g.n
    count = 0
    for root in range(g.n):
        if seen[root]:
            continue
        count += 1
        stack = [root]
        seen[root] = True
        while stack:
            u = stack.pop()
            for v in nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
    return count


def frobenius_delta(g: Graph) -> float:
    """Frobenius norm of L - L^2/n, a size measure for the quadratic term."""
    lap = laplacian(g)
    delta = lap - (lap @ lap) / g.n
    return math.sqrt(float(np.sum(delta * delta)))


def read_edge_list(path) -> Graph:
    """Parse the edge-list file format.

    Line 1 holds the vertex count; every following non-empty line holds one
    edge ``u v`` with ``0 <= u < v < n``.  ``#`` starts a comment.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    body: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            body.append((lineno, text))
    if not body:
        raise EdgeListError(f"{path}: empty edge-list file")
    first_lineno, first = body[0]
    try:
        n = int(first)
    except ValueError as exc:
        raise EdgeListError(f"{path}:{first_lineno}: vertex count expected, got {first!r}") from exc
    edges = []
    for lineno, text in body[1:]:
        fields = text.split()
        if len(fields) != 2:
            raise EdgeListError(f"{path}:{lineno}: expected 'u v', got {text!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError as exc:
            raise EdgeListError(f"{path}:{lineno}: non-integer vertex in {text!r}") from exc
        if not u < v:
            raise EdgeListError(f"{path}:{lineno}: edges must satisfy u < v, got {u} {v}")
        edges.append((u, v))
    try:
        return Graph.from_edges(n, edges)
    except EdgeListError as exc:
        raise EdgeListError(f"{path}: {exc}") from exc


def write_edge_list(g: Graph, path) -> None:
    """Write the canonical form: header line, then sorted 'u v' lines."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n}\n")
        for u, v in sorted(g.edges):
            fh.write(f"{u} {v}\n")

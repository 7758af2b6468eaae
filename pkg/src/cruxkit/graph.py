"""Immutable simple graphs on vertices ``0..n-1`` plus vertex-set helpers.

Everything else in the package builds on :class:`Graph`.  Edges are stored
as a sorted tuple of pairs ``(u, v)`` with ``u < v``; the position of an edge
in that tuple is its *canonical edge index*, which is what the percolation
sampler keys its randomness on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EdgeListParseError, PreconditionError

__all__ = [
    "Graph",
    "VertexSet",
    "InducedSubgraphView",
    "average_degree",
    "external_neighbourhood",
    "edge_boundary",
    "read_edge_list",
    "write_edge_list",
]


class Graph:
    """Simple undirected graph with dense integer vertex ids.

    >>> g = Graph(3, [(0, 1), (2, 1)])
    >>> g.edges
    ((0, 1), (1, 2))
    >>> g.adj[1]
    (0, 2)
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise PreconditionError("vertex count must be non-negative")
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise PreconditionError(f"duplicate edge {key}")
            seen.add(key)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in nbrs)

    @classmethod
    def _trusted(cls, n: int, edges: tuple[tuple[int, int], ...]) -> "Graph":
        # edges must already be sorted, unique, u < v, in range
        g = cls.__new__(cls)
        g.n = n
        g.edges = edges
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        g.adj = tuple(tuple(sorted(a)) for a in nbrs)
        return g

    # -- basic statistics -------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adj)

    def average_degree(self) -> Fraction:
        return average_degree(self)

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.n else 0

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.n else 0

    # -- lookups ----------------------------------------------------------

    @cached_property
    def adjsets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adj)

    @cached_property
    def bitmasks(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as a Python-int bitset."""
        out = []
        for a in self.adj:
            m = 0
            for w in a:
                m |= 1 << w
            out.append(m)
        return tuple(out)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_array(self) -> np.ndarray:
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjsets[u]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def vertices(self) -> range:
        return range(self.n)

    # -- derived graphs ---------------------------------------------------

    def view(self, vertices: Iterable[int] | "VertexSet") -> "InducedSubgraphView":
        return InducedSubgraphView(self, VertexSet.of(self.n, vertices))

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Materialize ``G[vertices]`` relabelled to ``0..k-1``.

        Returns the new graph and the tuple mapping new id -> old id.
        """
        labels = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(labels)}
        edges = []
        for v in labels:
            i = pos[v]
            for w in self.adj[v]:
                j = pos.get(w)
                if j is not None and i < j:
                    edges.append((i, j))
        edges.sort()
        return Graph._trusted(len(labels), tuple(edges)), labels

    def spanning_subgraph(self, keep: Iterable[int] | np.ndarray) -> "Graph":
        """Subgraph on all ``n`` vertices keeping the edges with the given canonical indices."""
        idx = sorted(set(int(i) for i in keep))
        return Graph._trusted(self.n, tuple(self.edges[i] for i in idx))

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={len(self.edges)})"


@dataclass(frozen=True)
class VertexSet:
    """A set of vertex ids bound to a universe ``0..universe-1``."""

    members: frozenset[int]
    universe: int

    def __post_init__(self):
        for v in self.members:
            if not 0 <= v < self.universe:
                raise PreconditionError(f"vertex {v} outside universe of size {self.universe}")

    @classmethod
    def of(cls, universe: int, items: Iterable[int] | "VertexSet" = ()) -> "VertexSet":
        if isinstance(items, VertexSet):
            if items.universe != universe:
                raise PreconditionError("universe mismatch")
            return items
        return cls(frozenset(int(v) for v in items), universe)

    @classmethod
    def from_mask(cls, universe: int, mask: int) -> "VertexSet":
        out = []
        v = 0
        while mask:
            if mask & 1:
                out.append(v)
            mask >>= 1
            v += 1
        return cls(frozenset(out), universe)

    @property
    def mask(self) -> int:
        m = 0
        for v in self.members:
            m |= 1 << v
        return m

    def _coerce(self, other) -> frozenset[int]:
        if isinstance(other, VertexSet):
            if other.universe != self.universe:
                raise PreconditionError("universe mismatch")
            return other.members
        return VertexSet.of(self.universe, other).members

    def union(self, other) -> "VertexSet":
        return VertexSet(self.members | self._coerce(other), self.universe)

    def intersection(self, other) -> "VertexSet":
        return VertexSet(self.members & self._coerce(other), self.universe)

    def difference(self, other) -> "VertexSet":
        return VertexSet(self.members - self._coerce(other), self.universe)

    def complement(self) -> "VertexSet":
        return VertexSet(frozenset(range(self.universe)) - self.members, self.universe)

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __invert__ = complement

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def __repr__(self) -> str:
        return f"VertexSet({sorted(self.members)}, universe={self.universe})"


@dataclass(frozen=True)
class InducedSubgraphView:
    """``base[vertices]`` without copying adjacency."""

    base: Graph
    vertices: VertexSet

    def __post_init__(self):
        if self.vertices.universe != self.base.n:
            raise PreconditionError("view vertex set must live in the base graph's universe")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: int) -> list[int]:
        vs = self.vertices.members
        return [w for w in self.base.adj[v] if w in vs]

    def degree(self, v: int) -> int:
        vs = self.vertices.members
        return sum(1 for w in self.base.adj[v] if w in vs)

    def has_edge(self, u: int, v: int) -> bool:
        vs = self.vertices.members
        return u in vs and v in vs and self.base.has_edge(u, v)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices.members
        return [(u, v) for (u, v) in self.base.edges if u in vs and v in vs]

    @property
    def num_edges(self) -> int:
        vs = self.vertices.members
        return sum(1 for v in vs for w in self.base.adj[v] if w in vs) // 2

    def average_degree(self) -> Fraction:
        return average_degree(self)

    @property
    def min_degree(self) -> int:
        return min((self.degree(v) for v in self.vertices.members), default=0)

    def materialize(self) -> tuple[Graph, tuple[int, ...]]:
        return self.base.induced(self.vertices.members)


def average_degree(g: Graph | InducedSubgraphView) -> Fraction:
    """Exact ``2 e(G) / |G|``."""
    if g.n == 0:
        raise PreconditionError("average degree of the empty graph is undefined")
    return Fraction(2 * g.num_edges, g.n)


def external_neighbourhood(g: Graph, u: Iterable[int] | VertexSet) -> VertexSet:
    """Vertices outside ``u`` with at least one neighbour in ``u``."""
    us = VertexSet.of(g.n, u)
    inside = us.members
    out = set()
    for v in inside:
        for w in g.adj[v]:
            if w not in inside:
                out.add(w)
    return VertexSet(frozenset(out), g.n)


def edge_boundary(g: Graph, u: Iterable[int] | VertexSet) -> list[tuple[int, int]]:
    """Edges with exactly one endpoint in ``u``, as canonical ``(a, b)`` pairs."""
    inside = VertexSet.of(g.n, u).members
    return [(a, b) for (a, b) in g.edges if (a in inside) != (b in inside)]


def read_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"`` (``0 <= u < v < n``).

    Blank lines and anything after ``#`` are ignored.
    """
    header = None
    n = m = 0
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, f"expected two integers, got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer token in {raw!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise EdgeListParseError(lineno, "negative count in header")
            header = lineno
            n, m = a, b
            continue
        if a == b:
            raise EdgeListParseError(lineno, f"self-loop at vertex {a}")
        if not (0 <= a < b < n):
            if 0 <= b < a < n:
                raise EdgeListParseError(lineno, f"edge must be written with u < v, got {a} {b}")
            raise EdgeListParseError(lineno, f"vertex id out of range for n={n}")
        if (a, b) in seen:
            raise EdgeListParseError(lineno, f"duplicate edge {a} {b}")
        seen.add((a, b))
        edges.append((a, b))
    if header is None:
        raise EdgeListParseError(1, "missing 'n m' header")
    if len(edges) != m:
        raise EdgeListParseError(header, f"header declares {m} edges, found {len(edges)}")
    edges.sort()
    return Graph._trusted(n, tuple(edges))


def write_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.num_edges}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"

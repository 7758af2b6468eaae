"""Host graph constructions and the seeded random-subgraph sampler.

Labelling conventions (tests rely on these):

* ``hypercube(m)``: vertex ``v`` is the integer whose bits are the
  coordinates; ``u ~ v`` iff ``u ^ v`` is a power of two.
* ``hamming(m, r)``: vertex ``v = sum(x_i * r**i)`` for coordinates
  ``x_i in 0..r-1``.  ``hamming(m, 2) == hypercube(m)``.
* ``projective_incidence(q)``: points of PG(2, q) are ``0..N-1`` and lines
  are ``N..2N-1`` with ``N = q*q + q + 1``; both are indexed by normalised
  homogeneous triples in the order ``(0,0,1)``, ``(0,1,a)`` for ``a`` in
  ``0..q-1``, then ``(1,a,b)`` lexicographically.
* ``complete_bipartite(a, b)``: parts ``0..a-1`` and ``a..a+b-1``.
* ``cycle(n)``: ``i ~ i+1`` and ``n-1 ~ 0``; ``path(n)`` has ``n`` vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import rng
from .errors import PreconditionError
from .graph import Graph

MAX_VERTICES = 1 << 24

__all__ = [
    "HostSpec",
    "PercolationConfig",
    "hypercube",
    "hamming",
    "complete",
    "complete_bipartite",
    "cycle",
    "path",
    "star",
    "petersen",
    "disjoint_union",
    "projective_incidence",
    "is_prime",
    "is_c4_free",
    "sample_subgraph",
    "two_round_split",
    "gnp",
]


@dataclass(frozen=True)
class PercolationConfig:
    p: float
    seed: int = 0
    trial_id: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise PreconditionError(f"p must lie in [0, 1], got {self.p}")


def hypercube(m: int) -> Graph:
    if not 1 <= m <= 24:
        raise PreconditionError(f"hypercube dimension must be in 1..24, got {m}")
    edges = []
    for v in range(1 << m):
        for b in range(m):
            w = v | (1 << b)
            if w != v:
                edges.append((v, w))
    # generated in lexicographic order already
    return Graph._trusted(1 << m, tuple(edges))


def hamming(m: int, r: int) -> Graph:
    if r < 2 or m < 1:
        raise PreconditionError("hamming graph needs m >= 1 and r >= 2")
    if r**m > MAX_VERTICES:
        raise PreconditionError(f"hamming({m}, {r}) exceeds the 2^24 vertex guard")
    n = r**m
    edges = []
    for v in range(n):
        rest, place = v, 1
        for _ in range(m):
            digit = rest % r
            rest //= r
            for other in range(digit + 1, r):
                edges.append((v, v + (other - digit) * place))
            place *= r
    edges.sort()
    return Graph._trusted(n, tuple(edges))


def complete(n: int) -> Graph:
    if n < 0:
        raise PreconditionError("n must be non-negative")
    return Graph._trusted(n, tuple(combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph._trusted(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def star(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def cycle(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise PreconditionError("a path needs at least one vertex")
    return Graph._trusted(n, tuple((i, i + 1) for i in range(n - 1)))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph._trusted(offset, tuple(edges))


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def _projective_points(q: int) -> list[tuple[int, int, int]]:
    pts = [(0, 0, 1)]
    pts.extend((0, 1, a) for a in range(q))
    pts.extend((1, a, b) for a in range(q) for b in range(q))
    return pts


def projective_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q) over the prime field ``F_q``."""
    if not is_prime(q):
        raise PreconditionError(f"q must be prime, got {q}")
    pts = _projective_points(q)
    N = len(pts)
    P = np.asarray(pts, dtype=np.int64)
    incident = (P @ P.T) % q == 0
    rows, cols = np.nonzero(incident)
    edges = sorted((int(i), N + int(j)) for i, j in zip(rows, cols))
    return Graph._trusted(2 * N, tuple(edges))


def is_c4_free(g: Graph) -> bool:
    """True iff no two vertices have two common neighbours."""
    seen: set[tuple[int, int]] = set()
    for v in range(g.n):
        for a, b in combinations(g.adj[v], 2):
            if (a, b) in seen:
                return False
            seen.add((a, b))
    return True


def sample_subgraph(g: Graph, cfg: PercolationConfig) -> Graph:
    """Keep edge ``i`` iff ``rng.uniform(seed, trial_id, i) < p``."""
    u = rng.uniforms(cfg.seed, cfg.trial_id, g.num_edges)
    return g.spanning_subgraph(np.nonzero(u < cfg.p)[0])


def two_round_split(g: Graph, cfg: PercolationConfig, theta: float) -> tuple[Graph, Graph]:
    """Coupled samples at ``p' = (1 - theta) p`` and at ``p``.

    Both rounds read the same per-edge uniform ``u``; the ``p`` graph keeps
    ``u < p`` and the ``p'`` graph keeps ``u < (1 - theta) p``.  Given that an
    edge survives at rate ``p`` it survives at rate ``p'`` with probability
    exactly ``1 - theta``, independently over edges, so this is the same as
    deleting each edge of ``G_p`` with probability ``theta``.
    """
    if not 0.0 < theta < 1.0:
        raise PreconditionError("theta must lie strictly between 0 and 1")
    u = rng.uniforms(cfg.seed, cfg.trial_id, g.num_edges)
    low = g.spanning_subgraph(np.nonzero(u < (1.0 - theta) * cfg.p)[0])
    high = g.spanning_subgraph(np.nonzero(u < cfg.p)[0])
    return low, high


def gnp(n: int, p: float, seed: int, trial_id: int = 0) -> Graph:
    """Erdős–Rényi ``G(n, p)`` as ``complete(n)`` percolated with the package PRNG."""
    return sample_subgraph(complete(n), PercolationConfig(p, seed, trial_id))


_BUILDERS = {
    "hypercube": (hypercube, ("m",)),
    "hamming": (hamming, ("m", "r")),
    "complete": (complete, ("n",)),
    "complete_bipartite": (complete_bipartite, ("a", "b")),
    "projective_incidence": (projective_incidence, ("q",)),
    "cycle": (cycle, ("n",)),
    "path": (path, ("n",)),
}


@dataclass(frozen=True)
class HostSpec:
    """Named host family plus its integer parameters."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _BUILDERS:
            raise PreconditionError(f"unknown host kind {self.kind!r}; choose from {sorted(_BUILDERS)}")
        missing = [k for k in _BUILDERS[self.kind][1] if k not in self.params]
        if missing:
            raise PreconditionError(f"{self.kind} needs parameter(s) {', '.join(missing)}")

    def build(self) -> Graph:
        fn, names = _BUILDERS[self.kind]
        return fn(*(int(self.params[k]) for k in names))

    @staticmethod
    def kinds() -> list[str]:
        return sorted(_BUILDERS)

    @staticmethod
    def parameter_names(kind: str) -> tuple[str, ...]:
        return _BUILDERS[kind][1]

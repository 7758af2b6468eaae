"""Balanced separators and recursive (s, t)-separability decomposition.

A separator of an ``n``-vertex graph is a partition ``V = A | B | S`` with no
``A``-``B`` edge and ``|A|, |B| <= 2n/3``.  ``A`` or ``B`` may be empty (a
clique on ``n >= 3`` vertices has one of size ``n - floor(2n/3)``);
``proper=True`` asks for both sides to be non-empty.

:func:`separability_decompose` runs the halving recursion: split every
piece of size at least ``t`` with a separator of at most ``|piece|/s``
vertices.  Either every piece gets below ``t`` (and the union ``S*`` of the
separators has at most ``4n^2/(st)`` vertices) or some piece admits no such
separator, and that piece is returned as evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CruxkitError, PreconditionError
from .graph import Graph, VertexSet
from .rng import KeyedRandom

EXACT_LIMIT = 18
SWEEP_ROOTS = 32

__all__ = [
    "Separator",
    "SeparatorNode",
    "SeparatorDecomposition",
    "SeparabilityVerdict",
    "SeparabilityParams",
    "find_balanced_separator",
    "separability_decompose",
    "separability_corollary_params",
    "is_balanced_separator",
    "component_sizes",
]


@dataclass(frozen=True)
class Separator:
    S: tuple[int, ...]
    A: tuple[int, ...]
    B: tuple[int, ...]
    mode: str

    @property
    def size(self) -> int:
        return len(self.S)

    @property
    def imbalance(self) -> int:
        return max(len(self.A), len(self.B))


def is_balanced_separator(g: Graph, S, A, B, proper: bool = False) -> bool:
    """Explicit check of the separator definition."""
    S, A, B = set(S), set(A), set(B)
    if S & A or S & B or A & B or len(S) + len(A) + len(B) != g.n:
        return False
    if 3 * len(A) > 2 * g.n or 3 * len(B) > 2 * g.n:
        return False
    if proper and (not A or not B):
        return False
    return not any(w in B for v in A for w in g.adj[v])


def component_sizes(g: Graph) -> list[int]:
    if g.n == 0:
        return []
    return sorted(np.bincount(_labels(g)).tolist(), reverse=True)


def _labels(g: Graph) -> np.ndarray:
    e = g.edge_array
    if len(e) == 0:
        return np.arange(g.n)
    m = csr_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    return connected_components(m, directed=False)[1]


def _mask_components(bm: tuple[int, ...], alive: int) -> list[int]:
    comps = []
    while alive:
        low = alive & -alive
        comp, frontier = low, low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= bm[b.bit_length() - 1]
                f ^= b
            nxt &= alive & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        alive &= ~comp
    return comps


def _pack(sizes: list[int], total: int, limit: int, proper: bool, base_a: int = 0, base_b: int = 0):
    """Split ``sizes`` into two bins on top of ``base_a``/``base_b`` so both stay
    ``<= limit``, minimising the larger bin (then the A-share).  Returns the
    indices going to bin A, or None.

    Bounded knapsack over distinct sizes with binary splitting; reachable
    sums are Python-int bitsets.
    """
    rest = sum(sizes)
    by_size: dict[int, list[int]] = {}
    for i, w in enumerate(sizes):
        by_size.setdefault(w, []).append(i)
    items = []  # (weight, size, multiplicity)
    for w in sorted(by_size):
        c, k = len(by_size[w]), 1
        while c > 0:
            take = min(k, c)
            items.append((w * take, w, take))
            c -= take
            k *= 2
    reach = [1]
    for weight, _, _ in items:
        reach.append(reach[-1] | (reach[-1] << weight))
    final = reach[-1]
    best = None
    for x in range(rest + 1):
        if not final >> x & 1:
            continue
        a, b = base_a + x, base_b + rest - x
        if a > limit or b > limit or (proper and (a == 0 or b == 0)):
            continue
        if best is None or max(a, b) < best[0]:
            best = (max(a, b), x)
    if best is None:
        return None
    x = best[1]
    used: dict[int, int] = {}
    for i in range(len(items), 0, -1):
        if not reach[i - 1] >> x & 1:
            weight, w, take = items[i - 1]
            x -= weight
            used[w] = used.get(w, 0) + take
    return tuple(sorted(j for w, c in used.items() for j in by_size[w][:c]))


def _split_from_components(g: Graph, S: set[int], comps: list[list[int]], proper: bool):
    limit = (2 * g.n) // 3
    sizes = [len(c) for c in comps]
    idx = _pack(sizes, g.n, limit, proper)
    if idx is None:
        return None
    chosen = set(idx)
    A = sorted(v for i in chosen for v in comps[i])
    B = sorted(v for i, c in enumerate(comps) if i not in chosen for v in c)
    return sorted(S), A, B


def _exact(g: Graph, budget: int, proper: bool) -> Separator | None:
    n = g.n
    bm = g.bitmasks
    full = (1 << n) - 1
    limit = (2 * n) // 3
    for k in range(0, min(budget, n) + 1):
        best = None
        for S in combinations(range(n), k):
            smask = 0
            for v in S:
                smask |= 1 << v
            comps = _mask_components(bm, full & ~smask)
            sizes = [c.bit_count() for c in comps]
            idx = _pack(sizes, n, limit, proper)
            if idx is None:
                continue
            chosen = set(idx)
            a = sum(sizes[i] for i in chosen)
            key = (max(a, n - k - a), S)
            if best is None or key < best[0]:
                best = (key, S, comps, chosen)
        if best is not None:
            _, S, comps, chosen = best
            amask = 0
            for i in chosen:
                amask |= comps[i]
            A = tuple(v for v in range(n) if amask >> v & 1)
            B = tuple(v for v in range(n) if v not in set(S) and not amask >> v & 1)
            return Separator(tuple(S), A, B, "exact")
    return None


def _bfs_layers(g: Graph, root: int, allowed: np.ndarray) -> list[list[int]]:
    seen = {root}
    layers = [[root]]
    while True:
        nxt = []
        for v in layers[-1]:
            for w in g.adj[v]:
                if allowed[w] and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            return layers
        layers.append(nxt)


def _prune(g: Graph, S: set[int], A: set[int], B: set[int], limit: int) -> None:
    # move separator vertices that touch only one side onto that side
    changed = True
    while changed:
        changed = False
        for v in sorted(S):
            touches_a = any(w in A for w in g.adj[v])
            touches_b = any(w in B for w in g.adj[v])
            if not touches_b and len(A) < limit:
                S.discard(v)
                A.add(v)
                changed = True
            elif not touches_a and len(B) < limit:
                S.discard(v)
                B.add(v)
                changed = True


def _heuristic(g: Graph, budget: int, proper: bool, seed: int, roots: int) -> Separator | None:
    n = g.n
    limit = (2 * n) // 3
    labels = _labels(g)
    comps_by_label: dict[int, list[int]] = {}
    for v in range(n):
        comps_by_label.setdefault(int(labels[v]), []).append(v)
    comps = sorted(comps_by_label.values(), key=lambda c: (-len(c), c[0]))
    best: Separator | None = None

    def offer(S, A, B):
        nonlocal best
        if len(S) > budget or not is_balanced_separator(g, S, A, B, proper):
            return
        cand = Separator(tuple(sorted(S)), tuple(sorted(A)), tuple(sorted(B)), "heuristic")
        if best is None or (cand.size, cand.imbalance) < (best.size, best.imbalance):
            best = cand

    split = _split_from_components(g, set(), comps, proper)
    if split is not None:
        offer(*split)
        return best
    if budget == 0:
        return None
    # sweep BFS layers inside the largest component: each small layer is a
    # candidate S, and the components of G - S are packed into the two sides
    big = comps[0]
    allowed = np.zeros(n, dtype=bool)
    allowed[big] = True
    e = g.edge_array
    adj = csr_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(n, n))
    rnd = KeyedRandom(seed, 0x534550)
    starts = rnd.sample(big, min(roots, len(big)))
    tried: set[tuple[int, ...]] = set()
    for r in starts:
        for layer in _bfs_layers(g, r, allowed):
            key = tuple(sorted(layer))
            if len(layer) > budget or key in tried:
                continue
            tried.add(key)
            alive = np.ones(n, dtype=bool)
            alive[layer] = False
            keep = np.nonzero(alive)[0]
            labels = connected_components(adj[keep][:, keep], directed=False)[1]
            groups: dict[int, list[int]] = {}
            for v, lab in zip(keep.tolist(), labels.tolist()):
                groups.setdefault(lab, []).append(v)
            split = _split_from_components(g, set(layer), list(groups.values()), proper)
            if split is None:
                continue
            S, A, B = (set(x) for x in split)
            _prune(g, S, A, B, limit)
            offer(S, A, B)
    return best


def find_balanced_separator(
    g: Graph,
    budget: int,
    mode: str = "auto",
    proper: bool = True,
    seed: int = 0,
    roots: int = SWEEP_ROOTS,
) -> Separator | None:
    """Smallest balanced separator with at most ``budget`` vertices, or None.

    ``mode="exact"`` (default for ``n <= 18``) enumerates vertex sets by size
    and, among the smallest separators, returns the one with the smaller
    larger side (then the lexicographically first).  ``mode="heuristic"``
    packs components and sweeps BFS layers from ``roots`` random roots,
    moving separator vertices that touch one side only onto that side.
    ``proper`` (default) requires both sides non-empty.
    """
    if g.n < 3:
        raise PreconditionError("separator search needs n >= 3")
    return _find(g, budget, mode, proper, seed, roots)


def _find(g: Graph, budget: int, mode: str, proper: bool, seed: int, roots: int) -> Separator | None:
    if budget < 0:
        return None
    if mode == "auto":
        mode = "exact" if g.n <= EXACT_LIMIT else "heuristic"
    if mode == "exact":
        if g.n > EXACT_LIMIT:
            raise PreconditionError(f"exact separator search is limited to n <= {EXACT_LIMIT}")
        return _exact(g, budget, proper)
    if mode == "heuristic":
        return _heuristic(g, budget, proper, seed, roots)
    raise PreconditionError(f"unknown mode {mode!r}")


@dataclass
class SeparatorNode:
    vertices: tuple[int, ...]
    depth: int
    separator: tuple[int, ...] | None = None
    children: list["SeparatorNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.separator is None

    def to_dict(self, elide_above: int = 10_000) -> dict:
        out = {"size": len(self.vertices), "depth": self.depth}
        if len(self.vertices) <= elide_above:
            out["vertices"] = list(self.vertices)
        if self.separator is not None:
            out["separator"] = list(self.separator)
            out["children"] = [c.to_dict(elide_above) for c in self.children]
        return out

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass
class SeparatorDecomposition:
    root: SeparatorNode
    aggregate: VertexSet
    max_leaf: int
    depth: int


@dataclass
class SeparabilityVerdict:
    """``separable`` is True when the recursion finished; otherwise
    ``evidence`` is the largest piece (of at least ``t`` vertices) for which
    no separator within ``|piece|/s`` was found."""

    separable: bool
    s_used: int
    t_used: int
    decomposition: SeparatorDecomposition
    evidence: VertexSet | None = None
    evidence_record: dict | None = None
    size_bound: float = 0.0

    def to_dict(self, elide_above: int = 10_000) -> dict:
        d = self.decomposition
        out = {
            "separable": self.separable,
            "s": self.s_used,
            "t": self.t_used,
            "aggregate_size": len(d.aggregate),
            "size_bound": self.size_bound,
            "max_leaf": d.max_leaf,
            "depth": d.depth,
            "tree": d.root.to_dict(elide_above),
        }
        if self.evidence is not None:
            out["evidence"] = {"size": len(self.evidence), **(self.evidence_record or {})}
            if len(self.evidence) <= elide_above:
                out["evidence"]["vertices"] = self.evidence.sorted()
        return out


def separability_decompose(g: Graph, s: int, t: int, mode: str = "auto", seed: int = 0) -> SeparabilityVerdict:
    """Recursive halving with per-piece budget ``floor(|piece| / s)``.

    Every piece of size ``>= t`` is split; separators may leave one side
    empty.  All pieces are explored even after a failure so the largest
    stuck piece can be reported.  On success the aggregate ``S*`` is checked
    against ``4 n^2 / (s t)`` and every component of ``g - S*`` against ``t``.
    """
    if int(s) != s or int(t) != t or s < 1 or t < 1:
        raise PreconditionError("s and t must be positive integers")
    s, t = int(s), int(t)
    n = g.n
    root = SeparatorNode(tuple(range(n)), 0)
    stack = [root]
    aggregate: set[int] = set()
    failures: list[tuple[SeparatorNode, dict]] = []
    while stack:
        node = stack.pop()
        if len(node.vertices) < t:
            continue
        sub, labels = g.induced(node.vertices)
        budget = sub.n // s
        sep = _find(sub, budget, mode, False, seed, SWEEP_ROOTS)
        if sep is None:
            used = mode if mode != "auto" else ("exact" if sub.n <= EXACT_LIMIT else "heuristic")
            failures.append((node, {"budget": budget, "mode": used}))
            continue
        if not is_balanced_separator(sub, sep.S, sep.A, sep.B):
            raise CruxkitError("separator search returned an invalid split")
        node.separator = tuple(labels[v] for v in sep.S)
        aggregate.update(node.separator)
        for side in (sep.A, sep.B):
            child = SeparatorNode(tuple(labels[v] for v in side), node.depth + 1)
            node.children.append(child)
            stack.append(child)
    leaves = [nd for nd in root.walk() if nd.is_leaf]
    decomp = SeparatorDecomposition(
        root,
        VertexSet(frozenset(aggregate), n),
        max((len(nd.vertices) for nd in leaves), default=0),
        max((nd.depth for nd in leaves), default=0),
    )
    bound = 4 * n * n / (s * t)
    if failures:
        node, rec = max(failures, key=lambda f: (len(f[0].vertices), f[0].vertices))
        return SeparabilityVerdict(False, s, t, decomp, VertexSet(frozenset(node.vertices), n), rec, bound)
    if len(aggregate) > bound + 1e-9:
        raise CruxkitError(f"|S*| = {len(aggregate)} exceeds 4n^2/(st) = {bound}")
    internal_depth = max((nd.depth for nd in root.walk() if not nd.is_leaf), default=-1)
    if internal_depth > 0 and internal_depth > math.log(n / t, 1.5) + 1e-9:
        raise CruxkitError("recursion deeper than log_{3/2}(n/t)")
    rest = [v for v in range(n) if v not in aggregate]
    if rest and max(component_sizes(g.induced(rest)[0])) >= t:
        raise CruxkitError("a component of G - S* has at least t vertices")
    return SeparabilityVerdict(True, s, t, decomp, None, None, bound)


@dataclass(frozen=True)
class SeparabilityParams:
    s: int
    t: int
    threshold: tuple[float, float]
    piece_min: float
    budget_ratio: float


def separability_corollary_params(n: int, psi: float) -> SeparabilityParams:
    """``s = ceil(4 psi^3)``, ``t = ceil(n / psi)``.

    If ``g`` is not ``(n/psi^2, n/psi)``-separable the recursion must stall
    on a piece with at least ``n/psi`` vertices and no separator of size
    ``|piece| / (4 psi^3)``.
    """
    if psi < 1:
        raise PreconditionError("psi must be at least 1")
    return SeparabilityParams(
        s=math.ceil(4 * psi**3 - 1e-9),
        t=math.ceil(n / psi - 1e-9),
        threshold=(n / psi**2, n / psi),
        piece_min=n / psi,
        budget_ratio=1 / (4 * psi**3),
    )

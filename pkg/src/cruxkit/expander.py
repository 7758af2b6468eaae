"""Sublinear expansion: the rate function, verification, extraction of an
expander subgraph, and a shortest connector that avoids a forbidden set.

All logarithms are natural.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal

import numpy as np

from .errors import CruxkitError, PreconditionError
from .graph import Graph, VertexSet, average_degree
from .rng import KeyedRandom

EXHAUSTIVE_LIMIT = 20
SLACK = 1e-12

__all__ = [
    "ExpanderParams",
    "ExtractionParams",
    "ExpanderReport",
    "ConnectorResult",
    "rho",
    "verify_expander",
    "extract_expander",
    "connect_avoiding",
    "local_expansion_holds",
    "diameter_bound",
]


@dataclass(frozen=True)
class ExpanderParams:
    epsilon: float
    t: float

    def __post_init__(self):
        if self.epsilon <= 0 or self.t <= 0:
            raise PreconditionError("epsilon and t must be positive")

    def rho(self, x: float) -> float:
        return rho(x, self.epsilon, self.t)


@dataclass(frozen=True)
class ExtractionParams:
    C: float
    epsilon: float

    def __post_init__(self):
        if self.C <= 30:
            raise PreconditionError("extraction needs C > 30")
        if self.epsilon > 1 / (10 * self.C) + SLACK:
            raise PreconditionError("extraction needs epsilon <= 1/(10C)")
        if self.delta >= 1:
            raise PreconditionError("delta = C*epsilon/log 3 must be below 1")

    @property
    def delta(self) -> float:
        return self.C * self.epsilon / math.log(3)


def rho(x: float, epsilon: float, t: float) -> float:
    """Expansion rate: 0 below ``t/5``, else ``epsilon / log(15x/t)**2``."""
    if x < 0:
        raise PreconditionError("x must be non-negative")
    if x < t / 5:
        return 0.0
    return epsilon / math.log(15 * x / t) ** 2


def diameter_bound(n: int, epsilon: float, t: float) -> float:
    """Connector length guaranteed in an n-vertex (epsilon, t)-expander."""
    return (2 / epsilon) * math.log(15 * n / t) ** 3


@dataclass(frozen=True)
class ExpanderReport:
    """Outcome of verification or extraction.

    ``verified`` is ``"exhaustive"``, ``"sampled"`` or ``"failed"``; on
    failure ``witness`` is a set ``X`` with ``t/2 <= |X| <= |H|/2`` and
    ``|N(X)| < rho(|X|) |X|``.  Vertex ids refer to the input graph.
    """

    verified: Literal["exhaustive", "sampled", "failed"]
    subgraph: VertexSet
    achieved_density: Fraction
    min_degree: int
    trials: int = 0
    witness: VertexSet | None = None
    witness_boundary: int | None = None
    iterations: int = 0
    target_density: float | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.verified != "failed"

    def to_dict(self) -> dict:
        return {
            "verified": self.verified,
            "trials": self.trials,
            "subgraph": self.subgraph.sorted(),
            "size": len(self.subgraph),
            "achieved_density": float(self.achieved_density),
            "min_degree": self.min_degree,
            "witness": self.witness.sorted() if self.witness is not None else None,
            "witness_boundary": self.witness_boundary,
            "iterations": self.iterations,
            "target_density": self.target_density,
            "notes": list(self.notes),
        }


def _size_range(n: int, t: float) -> tuple[int, int]:
    return math.ceil(t / 2 - SLACK), n // 2


def _need_table(n: int, params: ExpanderParams) -> np.ndarray:
    return np.array([params.rho(s) * s for s in range(n + 1)]) - SLACK


def _neighbourhood_table(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For every subset mask of V(g): the mask, its size and ``|N(X)|``."""
    n = g.n
    if n > 24:
        raise PreconditionError("subset tables are limited to n <= 24")
    dtype = np.uint32
    nbr = np.zeros(1 << n, dtype=dtype)
    for i, b in enumerate(g.bitmasks):
        lo = 1 << i
        nbr[lo : 2 * lo] = nbr[:lo] | dtype(b)
    masks = np.arange(1 << n, dtype=dtype)
    sizes = np.bitwise_count(masks)
    ext = np.bitwise_count(nbr & ~masks)
    return masks, sizes, ext


def _exhaustive_violation(g: Graph, params: ExpanderParams) -> tuple[int | None, int, int]:
    """Best violating mask (lowest ``|N|/|X|``), its boundary, and number of sets checked."""
    lo, hi = _size_range(g.n, params.t)
    if lo > hi:
        return None, 0, 0
    masks, sizes, ext = _neighbourhood_table(g)
    in_range = (sizes >= lo) & (sizes <= hi)
    need = _need_table(g.n, params)[sizes]
    bad = np.nonzero(in_range & (ext < need))[0]
    checked = int(in_range.sum())
    if bad.size == 0:
        return None, 0, checked
    ratio = ext[bad] / sizes[bad]
    order = np.lexsort((bad, sizes[bad], ratio))
    i = bad[order[0]]
    return int(masks[i]), int(ext[i]), checked


def _greedy_from(bm: tuple[int, ...], n: int, start: int, lo: int, hi: int, need: np.ndarray):
    full = (1 << n) - 1
    X = 1 << start
    C = X | bm[start]
    ext = (C ^ X).bit_count()
    size = 1
    while True:
        if lo <= size <= hi and ext < need[size]:
            return X, ext
        if size >= hi:
            return None
        frontier = C & ~X
        best_w, best_ext = -1, None
        f = frontier
        while f:
            low = f & -f
            w = low.bit_length() - 1
            f ^= low
            e2 = ext - 1 + (bm[w] & ~C).bit_count()
            if best_ext is None or e2 < best_ext:
                best_w, best_ext = w, e2
        if best_w < 0:
            rest = full & ~X
            if not rest:
                return None
            low = rest & -rest
            best_w = low.bit_length() - 1
            best_ext = ext + (bm[best_w] & ~C).bit_count()
        X |= 1 << best_w
        C |= (1 << best_w) | bm[best_w]
        ext = best_ext
        size += 1


def _sampled_violation(g: Graph, params: ExpanderParams, k: int, seed: int, max_seeds: int | None):
    n = g.n
    lo, hi = _size_range(n, params.t)
    if lo > hi:
        return None, 0, 0
    bm = g.bitmasks
    need = _need_table(n, params)
    rnd = KeyedRandom(seed, 0)
    checked = 0
    best = None
    for _ in range(k):
        size = lo + rnd.randrange(hi - lo + 1)
        members = rnd.sample(list(range(n)), size)
        X = 0
        for v in members:
            X |= 1 << v
        C = X
        for v in members:
            C |= bm[v]
        ext = (C & ~X).bit_count()
        checked += 1
        if ext < need[size]:
            cand = (ext / size, size, X, ext)
            if best is None or cand < best:
                best = cand
    starts = list(range(n))
    if max_seeds is not None and max_seeds < n:
        rnd.shuffle(starts)
        starts = sorted(starts[:max_seeds])
    for v in starts:
        checked += 1
        found = _greedy_from(bm, n, v, lo, hi, need)
        if found is not None:
            X, ext = found
            size = X.bit_count()
            cand = (ext / size, size, X, ext)
            if best is None or cand < best:
                best = cand
            break
    if best is None:
        return None, 0, checked
    return best[2], best[3], checked


def verify_expander(
    g: Graph,
    params: ExpanderParams,
    mode: Literal["exhaustive", "sampled", "auto"] = "auto",
    k: int = 200,
    seed: int = 0,
    max_seeds: int | None = None,
) -> ExpanderReport:
    """Check ``|N(X)| >= rho(|X|) |X|`` for sets ``t/2 <= |X| <= n/2``.

    ``exhaustive`` scans every qualifying set (``n <= 20``).  ``sampled``
    checks ``k`` random qualifying sets plus a greedy local search from each
    vertex that grows ``X`` by the frontier vertex adding the fewest new
    neighbours; passing it is evidence, not proof.  ``auto`` picks
    exhaustive whenever allowed.
    """
    if mode == "auto":
        mode = "exhaustive" if g.n <= EXHAUSTIVE_LIMIT else "sampled"
    if mode == "exhaustive":
        if g.n > EXHAUSTIVE_LIMIT:
            raise PreconditionError(f"exhaustive verification needs n <= {EXHAUSTIVE_LIMIT}")
        mask, boundary, checked = _exhaustive_violation(g, params)
    elif mode == "sampled":
        mask, boundary, checked = _sampled_violation(g, params, k, seed, max_seeds)
    else:
        raise PreconditionError(f"unknown verification mode {mode!r}")
    full = VertexSet(frozenset(range(g.n)), g.n)
    dens = average_degree(g) if g.n else Fraction(0)
    if mask is None:
        return ExpanderReport(mode, full, dens, g.min_degree, trials=checked)
    return ExpanderReport(
        "failed",
        full,
        dens,
        g.min_degree,
        trials=checked,
        witness=VertexSet.from_mask(g.n, mask),
        witness_boundary=boundary,
    )


def local_expansion_holds(g: Graph, k: float, t: int) -> bool:
    """Exhaustively check ``|N(W)| >= t`` for all ``k/2 <= |W| <= k`` (n <= 20)."""
    if g.n > EXHAUSTIVE_LIMIT:
        raise PreconditionError(f"exhaustive check needs n <= {EXHAUSTIVE_LIMIT}")
    _, sizes, ext = _neighbourhood_table(g)
    sel = (sizes >= math.ceil(k / 2 - SLACK)) & (sizes <= math.floor(k + SLACK))
    return bool(np.all(ext[sel] >= t))


def _peel_to_half_density(g: Graph, H: set[int]) -> None:
    # remove vertices of degree < d(H)/2, i.e. deg * |H| < e(H); each removal raises d(H)
    deg = {v: sum(1 for w in g.adj[v] if w in H) for v in H}
    e = sum(deg.values()) // 2
    changed = True
    while changed and H:
        changed = False
        for v in sorted(H):
            if deg[v] * len(H) < e:
                H.discard(v)
                e -= deg[v]
                for w in g.adj[v]:
                    if w in H:
                        deg[w] -= 1
                del deg[v]
                changed = True


def _density(g: Graph, S: set[int]) -> Fraction:
    if not S:
        return Fraction(0)
    return Fraction(sum(1 for v in S for w in g.adj[v] if w in S), len(S))


def extract_expander(
    g: Graph,
    epsilon: float,
    t: float,
    C: float = 40.0,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    samples: int = 200,
    seed: int = 0,
    max_seeds: int | None = None,
) -> ExpanderReport:
    """Find ``H`` with ``d(H) >= (1-delta) d(G)``, ``delta(H) >= d(H)/2`` and,
    as far as verification reaches, the ``(epsilon, t)``-expander property.

    Loop: peel low-degree vertices; look for a violating set ``X``; if one
    exists, move to whichever of ``G[X + N(X)]`` and ``H - X`` is denser
    (ties go to the smaller set, then to ``X + N(X)``) provided it keeps
    density ``>= (1-delta) d(G)``.  Every move shrinks ``H``.
    """
    ext_params = ExtractionParams(C, epsilon)
    params = ExpanderParams(epsilon, t)
    if g.n == 0:
        raise PreconditionError("cannot extract from the empty graph")
    target = (1 - ext_params.delta) * float(average_degree(g))
    H = set(range(g.n))
    cap = g.n * g.n
    notes = []
    for it in range(1, cap + 1):
        _peel_to_half_density(g, H)
        sub, labels = g.induced(H)
        mode = "exhaustive" if len(H) <= exhaustive_limit else "sampled"
        rep = verify_expander(sub, params, mode=mode, k=samples, seed=seed + it, max_seeds=max_seeds)
        members = VertexSet(frozenset(H), g.n)
        if rep.ok:
            return ExpanderReport(
                rep.verified, members, rep.achieved_density, rep.min_degree,
                trials=rep.trials, iterations=it, target_density=target, notes=tuple(notes),
            )
        X = {labels[i] for i in rep.witness}
        NX = {w for v in X for w in g.adj[v] if w in H and w not in X}
        A = X | NX
        B = H - X
        options = []
        for tag, S in (("A", A), ("B", B)):
            dS = _density(g, S)
            if S and float(dS) >= target - SLACK:
                options.append((-dS, len(S), tag, S))
        if not options:
            notes.append("no cut side keeps the target density; stopping with the current subgraph")
            return ExpanderReport(
                "failed", members, rep.achieved_density, rep.min_degree,
                trials=rep.trials, witness=VertexSet(frozenset(X), g.n),
                witness_boundary=rep.witness_boundary, iterations=it,
                target_density=target, notes=tuple(notes),
            )
        options.sort(key=lambda o: o[:3])
        H = set(options[0][3])
    raise CruxkitError("extraction exceeded its n^2 iteration cap")


@dataclass(frozen=True)
class ConnectorResult:
    path: tuple[int, ...] | None
    hypothesis_met: bool
    length_bound: float | None

    @property
    def connected(self) -> bool:
        return self.path is not None

    @property
    def length(self) -> int | None:
        return None if self.path is None else len(self.path) - 1

    @property
    def within_bound(self) -> bool | None:
        if self.path is None or self.length_bound is None:
            return None
        return self.length <= self.length_bound + SLACK


def shortest_connector(
    g: Graph,
    sources: Iterable[int],
    targets: Iterable[int],
    blocked: Iterable[int] = (),
) -> tuple[int, ...] | None:
    """Multi-source BFS path from ``sources`` to ``targets`` avoiding ``blocked``.

    Only the first vertex lies in ``sources`` and only the last in
    ``targets``.  Sources are seeded in increasing id order and neighbours are
    scanned in increasing order, so the result is deterministic.
    """
    blocked = set(blocked)
    tset = set(targets) - blocked
    srcs = sorted(set(sources) - blocked)
    if not srcs or not tset:
        return None
    for s in srcs:
        if s in tset:
            return (s,)
    parent = {s: None for s in srcs}
    queue = deque(srcs)
    while queue:
        v = queue.popleft()
        for w in g.adj[v]:
            if w in parent or w in blocked:
                continue
            parent[w] = v
            if w in tset:
                out = [w]
                while parent[out[-1]] is not None:
                    out.append(parent[out[-1]])
                return tuple(reversed(out))
            queue.append(w)
    return None


def connect_avoiding(
    g: Graph,
    x1: Iterable[int],
    x2: Iterable[int],
    w: Iterable[int] = (),
    params: ExpanderParams | None = None,
    verified: bool = False,
) -> ConnectorResult:
    """Shortest ``x1``-``x2`` path in ``G - w``.

    When ``params`` are given the small-diameter hypotheses are evaluated
    (``|x1|, |x2| >= x >= t/2`` and ``|w| <= rho(x) x / 4``).  With
    ``verified=True`` (caller vouches that ``g`` is an expander) a path longer
    than ``(2/eps) log^3(15n/t)`` raises.
    """
    x1, x2, w = set(x1), set(x2), set(w)
    met, bound = False, None
    if params is not None:
        x = min(len(x1), len(x2))
        met = x >= params.t / 2 and len(w) <= params.rho(x) * x / 4 + SLACK
        bound = diameter_bound(g.n, params.epsilon, params.t)
    path = shortest_connector(g, x1, x2, w)
    res = ConnectorResult(path, met, bound)
    if met and verified:
        if path is None:
            raise CruxkitError("expander hypotheses hold but no avoiding path exists")
        if not res.within_bound:
            raise CruxkitError(f"connector of length {res.length} exceeds the bound {bound:.3f}")
    return res

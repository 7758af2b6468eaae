"""Long-cycle algorithms.

* :func:`greedy_min_degree_cycle` realises the folklore ``delta(H) + 1`` bound.
* :func:`posa_rotation_cycle` is a rotation-extension search used wherever a
  long cycle is wanted; it is heuristic and never claims optimality.
* :func:`cycle_via_crux_pipeline` chains crux -> expander extraction ->
  rotation search and reports the bounds that apply.
* :func:`dfs_stack_cycle` follows the DFS-stack argument for cycles in
  sublinear expanders.
* :func:`chord_splice_cycle` joins interleaved ancestor-descendant chords of
  a DFS forest into one cycle.

Every returned cycle is checked by :func:`validate_cycle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .crux import EXACT_LIMIT as CRUX_EXACT_LIMIT
from .crux import CruxCertificate, as_alpha, crux_exact, crux_upper_heuristic
from .errors import CruxkitError, PreconditionError
from .expander import (
    ExpanderParams,
    ExpanderReport,
    extract_expander,
    local_expansion_holds,
    verify_expander,
)
from .graph import Graph
from .rng import KeyedRandom

METHODS = ("greedy_min_degree", "posa_rotation", "dfs_stack", "chord_splice", "pipeline", "kernel_exact")

__all__ = [
    "InvalidCycle",
    "CycleResult",
    "BoundReport",
    "DfsForest",
    "validate_cycle",
    "dfs_forest",
    "greedy_min_degree_cycle",
    "posa_rotation_cycle",
    "longest_cycle_kernel",
    "cycle_via_crux_pipeline",
    "dfs_stack_cycle",
    "chord_splice_cycle",
    "stack_cycle_floor",
]


class InvalidCycle(CruxkitError):
    pass


def validate_cycle(g: Graph, vertices: Sequence[int]) -> None:
    """Raise :class:`InvalidCycle` unless ``vertices`` is a cycle of ``g``."""
    k = len(vertices)
    if k < 3:
        raise InvalidCycle(f"a cycle needs at least 3 vertices, got {k}")
    if len(set(vertices)) != k:
        raise InvalidCycle("repeated vertex")
    adj = g.adjsets
    for i in range(k):
        u, v = vertices[i], vertices[(i + 1) % k]
        if not (0 <= u < g.n) or v not in adj[u]:
            raise InvalidCycle(f"{u} and {v} are not adjacent")


@dataclass(frozen=True)
class CycleResult:
    """A cycle (or the report that none was found: ``vertices == ()``).

    ``guarantee`` is True only when the hypotheses of the bound in
    ``bound_claimed`` were verified for this input.
    """

    vertices: tuple[int, ...]
    method: str
    bound_claimed: float | None = None
    guarantee: bool = False
    meets_target: bool | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def found(self) -> bool:
        return bool(self.vertices)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "length": self.length,
            "method": self.method,
            "bound_claimed": self.bound_claimed,
            "guarantee": self.guarantee,
            "meets_target": self.meets_target,
            "notes": list(self.notes),
        }


def _result(g: Graph, vertices: Sequence[int] | None, method: str, **kw) -> CycleResult:
    if method not in METHODS:
        raise ValueError(method)
    if vertices:
        validate_cycle(g, vertices)
        return CycleResult(tuple(vertices), method, **kw)
    return CycleResult((), method, **kw)


@dataclass(frozen=True)
class BoundReport:
    crux_bound: float
    expander_bound_a: float
    expander_bound_b: float
    posa_t: int
    K: float
    c_alpha_lower: int
    c_alpha_upper: int
    epsilon: float
    C: float
    expansion_certified: bool

    def __post_init__(self):
        if min(self.crux_bound, self.expander_bound_a, self.expander_bound_b, self.posa_t) < 0:
            raise CruxkitError("bounds must be non-negative")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class DfsForest:
    """DFS forest: ``parent[v]`` is ``-1`` for roots and unvisited vertices."""

    parent: tuple[int, ...]
    order: tuple[int, ...]
    roots: tuple[int, ...]
    depth: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parent)

    def tree_edges(self) -> list[tuple[int, int]]:
        return sorted((min(v, p), max(v, p)) for v, p in enumerate(self.parent) if p >= 0)

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.parent]
        for v in self.order:
            p = self.parent[v]
            if p >= 0:
                ch[p].append(v)
        return ch

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff ``a`` lies on the tree path from ``b`` to its root (``a == b`` counts)."""
        if self.depth[a] > self.depth[b]:
            return False
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
        return a == b

    def path_to_root(self, v: int) -> list[int]:
        out = [v]
        while self.parent[out[-1]] >= 0:
            out.append(self.parent[out[-1]])
        return out

    def descendant_counts(self) -> list[int]:
        cnt = [1] * self.n
        for v in reversed(self.order):
            p = self.parent[v]
            if p >= 0:
                cnt[p] += cnt[v]
        return cnt


def dfs_forest(g: Graph, vertices: Iterable[int] | None = None) -> DfsForest:
    """Plain DFS forest of ``g`` (or ``g[vertices]``), lowest id first."""
    allowed = None if vertices is None else set(vertices)
    n = g.n
    parent = [-1] * n
    depth = [0] * n
    seen = [False] * n
    order, roots = [], []
    ptr = [0] * n
    candidates = range(n) if allowed is None else sorted(allowed)
    for r in candidates:
        if seen[r]:
            continue
        seen[r] = True
        roots.append(r)
        order.append(r)
        stack = [r]
        while stack:
            v = stack[-1]
            nb = g.adj[v]
            i = ptr[v]
            while i < len(nb) and (seen[nb[i]] or (allowed is not None and nb[i] not in allowed)):
                i += 1
            ptr[v] = i
            if i == len(nb):
                stack.pop()
                continue
            w = nb[i]
            seen[w] = True
            parent[w] = v
            depth[w] = depth[v] + 1
            order.append(w)
            stack.append(w)
    return DfsForest(tuple(parent), tuple(order), tuple(roots), tuple(depth))


# -- folklore greedy ----------------------------------------------------------


def _peel_below(g: Graph, alive: list[bool], deg: list[int], too_low) -> None:
    stack = [v for v in range(g.n) if alive[v] and too_low(deg[v])]
    for v in stack:
        alive[v] = False
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
                if too_low(deg[w]):
                    alive[w] = False
                    stack.append(w)


def greedy_min_degree_cycle(g: Graph) -> CycleResult:
    """Peel to ``delta(H) >= d(G)/2``, walk a maximal path, close it at the
    farthest back-neighbour of the endpoint.  Length ``>= delta(H) + 1``."""
    if g.n == 0:
        return _result(g, None, "greedy_min_degree", notes=("empty graph",))
    n, e = g.n, g.num_edges
    alive = [True] * n
    deg = list(g.degrees)
    _peel_below(g, alive, deg, lambda d: d * n < e)  # deg < d(G)/2
    _peel_below(g, alive, deg, lambda d: d < 2)  # cycles live in the 2-core
    H = [v for v in range(n) if alive[v]]
    if not H:
        return _result(g, None, "greedy_min_degree", notes=("graph is a forest",))
    delta_h = min(deg[v] for v in H)
    pos = {H[0]: 0}
    path = [H[0]]
    while True:
        v = path[-1]
        nxt = next((w for w in g.adj[v] if alive[w] and w not in pos), None)
        if nxt is None:
            break
        pos[nxt] = len(path)
        path.append(nxt)
    v = path[-1]
    far = min(pos[w] for w in g.adj[v] if alive[w])
    cyc = path[far:]
    return _result(g, cyc, "greedy_min_degree", bound_claimed=float(delta_h + 1), guarantee=True,
                   meets_target=len(cyc) >= delta_h + 1)


# -- rotation-extension ---------------------------------------------------------


def _two_core(g: Graph, within: set[int] | None = None) -> list[bool]:
    alive = [within is None or v in within for v in range(g.n)]
    deg = [sum(1 for w in g.adj[v] if alive[w]) if alive[v] else 0 for v in range(g.n)]
    _peel_below(g, alive, deg, lambda d: d < 2)
    return alive


def _blocks(g: Graph, alive: list[bool]) -> list[list[int]]:
    """Biconnected blocks (at least 3 vertices) of the alive subgraph, largest first."""
    G = nx.Graph()
    G.add_edges_from((u, v) for u, v in g.edges if alive[u] and alive[v])
    blocks = [sorted(b) for b in nx.biconnected_components(G) if len(b) >= 3]
    blocks.sort(key=lambda b: (-len(b), b[0]))
    return blocks


def _components(g: Graph, alive: list[bool]) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if not alive[s] or seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], [s]
        while queue:
            v = queue.pop()
            for w in g.adj[v]:
                if alive[w] and not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


class _Rotator:
    """Mutable path state for rotation-extension inside one component."""

    def __init__(self, g: Graph, inside: list[bool], rnd: KeyedRandom):
        self.adj = g.adj
        self.inside = inside
        self.rnd = rnd
        self.path: list[int] = []
        self.pos: dict[int, int] = {}
        self.best: list[int] = []

    def reset(self, path: list[int]) -> None:
        self.path = list(path)
        self.pos = {v: i for i, v in enumerate(self.path)}

    def _outside(self, v: int) -> list[int]:
        return [w for w in self.adj[v] if self.inside[w] and w not in self.pos]

    def _extend(self) -> bool:
        v = self.path[-1]
        ext = self._outside(v)
        if not ext:
            return False
        # fewest onward options first; random tie-break keeps restarts diverse
        scored = [(len(self._outside(w)), self.rnd.random(), w) for w in ext]
        w = min(scored)[2]
        self.pos[w] = len(self.path)
        self.path.append(w)
        return True

    def _close(self) -> None:
        # farthest back-neighbour of the endpoint closes the longest cycle available here
        v = self.path[-1]
        far = min((self.pos[w] for w in self.adj[v] if w in self.pos), default=len(self.path) - 1)
        if len(self.path) - far > len(self.best) and len(self.path) - far >= 3:
            self.best = self.path[far:]

    def _reverse(self) -> None:
        self.path.reverse()
        self.pos = {v: i for i, v in enumerate(self.path)}

    def _rotate(self) -> bool:
        v = self.path[-1]
        L = len(self.path)
        pivots = [self.pos[w] for w in self.adj[v] if w in self.pos and self.pos[w] < L - 2]
        if not pivots:
            return False
        i = pivots[self.rnd.randrange(len(pivots))]
        tail = self.path[i + 1 :]
        tail.reverse()
        self.path[i + 1 :] = tail
        for j in range(i + 1, L):
            self.pos[self.path[j]] = j
        return True

    def grow(self, rotation_budget: int) -> None:
        budget = rotation_budget
        while True:
            while self._extend():
                pass
            self._close()
            if self._outside(self.path[0]):
                self._reverse()
                continue
            self._reverse()
            self._close()
            self._reverse()
            moved = False
            while budget > 0:
                budget -= 1
                if not self._rotate():
                    break
                self._close()
                if self._outside(self.path[-1]):
                    moved = True
                    break
            if not moved:
                return

    def open_best(self) -> list[int] | None:
        """Turn the best cycle into a longer path through an outside neighbour."""
        cyc = self.best
        on = set(cyc)
        for i, c in enumerate(cyc):
            for w in self.adj[c]:
                if self.inside[w] and w not in on:
                    return [w] + cyc[i:] + cyc[:i]
        return None


def posa_rotation_cycle(
    g: Graph,
    target_t: float | None = None,
    restarts: int | None = None,
    seed: int = 0,
    rotation_budget: int | None = None,
) -> CycleResult:
    """Best cycle found by rotation-extension with restarts.

    Works block by block (every cycle lies inside one biconnected block),
    largest first.  Each
    restart grows a path by extension, rotates the endpoint when stuck and
    records the longest cycle closed by an endpoint back-edge; the best
    cycle is then opened through an outside neighbour and regrown while that
    keeps improving.  ``restarts`` defaults to ``n`` (8 for ``n > 256``); ``meets_target`` reports ``length >= target_t + 1``.
    """
    comps = _blocks(g, _two_core(g))
    if not comps:
        return _result(g, None, "posa_rotation", meets_target=False if target_t is not None else None,
                       notes=("no cycle: the graph is a forest",))
    if restarts is None:
        restarts = g.n if g.n <= 256 else 8
    rnd = KeyedRandom(seed, 0x505341)
    best: list[int] = []
    for comp in comps:
        if len(comp) <= len(best):
            break
        inside = [False] * g.n
        for v in comp:
            inside[v] = True
        budget = rotation_budget if rotation_budget is not None else 4 * len(comp)
        rot = _Rotator(g, inside, rnd)
        starts = list(comp)
        rnd.shuffle(starts)
        for r in range(max(1, restarts)):
            rot.reset([starts[r % len(starts)]])
            rot.best = []
            rot.grow(budget)
            for _ in range(len(comp)):
                if len(rot.best) == len(comp):
                    break
                opened = rot.open_best()
                if opened is None:
                    break
                before = len(rot.best)
                rot.reset(opened)
                rot.grow(budget)
                if len(rot.best) <= before:
                    break
            if len(rot.best) > len(best):
                best = list(rot.best)
            if len(best) == len(comp):
                break
    meets = None if target_t is None else len(best) >= target_t + 1
    return _result(g, best, "posa_rotation", bound_claimed=None if target_t is None else target_t + 1,
                   meets_target=meets)


# -- exact search on sparse blocks ----------------------------------------------


def _kernel(g: Graph, block: list[int]):
    """Contract the degree-2 chains of a block: kernel vertices (degree >= 3)
    and chains ``(x, y, internal vertices)``.  None for a bare cycle."""
    inb = set(block)
    deg = {v: sum(1 for w in g.adj[v] if w in inb) for v in block}
    K = [v for v in block if deg[v] >= 3]
    if not K:
        return None
    chains, seen = [], set()
    for x in K:
        for w in g.adj[x]:
            if w not in inb or (x, w) in seen:
                continue
            prev, cur, internal = x, w, []
            while deg[cur] == 2:
                internal.append(cur)
                a, b = (z for z in g.adj[cur] if z in inb)
                prev, cur = cur, (b if a == prev else a)
            seen.add((x, w))
            seen.add((cur, internal[-1] if internal else x))
            chains.append((x, cur, internal))
    return K, chains


class _BudgetExceeded(Exception):
    pass


def _kernel_longest(K: list[int], chains, budget: int) -> list[int]:
    idx = {v: i for i, v in enumerate(K)}
    inc: list[list[tuple[int, int]]] = [[] for _ in K]
    for e, (x, y, internal) in enumerate(chains):
        inc[idx[x]].append((e, idx[y]))
        inc[idx[y]].append((e, idx[x]))
    weight = [len(c[2]) + 1 for c in chains]
    best = [0, None]
    steps = [0]
    used_v = [False] * len(K)
    path: list[tuple[int, int]] = []  # (edge, vertex reached)

    def dfs(s: int, v: int, length: int, last_edge: int) -> None:
        steps[0] += 1
        if steps[0] > budget:
            raise _BudgetExceeded
        for e, w in inc[v]:
            if e == last_edge:
                continue
            if w == s:
                if length + weight[e] > best[0]:
                    best[0] = length + weight[e]
                    best[1] = (s, list(path) + [(e, s)])
            elif w > s and not used_v[w]:
                used_v[w] = True
                path.append((e, w))
                dfs(s, w, length + weight[e], e)
                path.pop()
                used_v[w] = False

    for s in range(len(K)):
        used_v[s] = True
        dfs(s, s, 0, -1)
        used_v[s] = False
    s, walk = best[1]
    out, at = [], s
    for e, w in walk:
        x, _, internal = chains[e]
        out.append(K[at])
        out.extend(internal if K[at] == x else reversed(internal))
        at = w
    return out


def longest_cycle_kernel(g: Graph, max_cyclomatic: int = 24, node_budget: int = 2_000_000) -> CycleResult | None:
    """Exact longest cycle for sparse graphs, or None when out of reach.

    Blocks are searched largest first.  In each block the degree-2 chains are
    contracted to weighted edges and every cycle of the small kernel is
    enumerated.  A block whose cyclomatic number exceeds ``max_cyclomatic``,
    or whose search exceeds ``node_budget`` steps, makes the call give up,
    since the answer could no longer be certified.
    """
    blocks = _blocks(g, _two_core(g))
    if not blocks:
        return _result(g, None, "kernel_exact", guarantee=True, notes=("the graph is a forest",))
    best: list[int] = []
    for block in blocks:
        if len(block) <= len(best):
            break
        inb = set(block)
        e_b = sum(1 for v in block for w in g.adj[v] if w in inb) // 2
        if e_b - len(block) + 1 > max_cyclomatic:
            return None
        ker = _kernel(g, block)
        if ker is None:
            cyc = _cycle_order(g, block)
        else:
            try:
                cyc = _kernel_longest(*ker, node_budget)
            except _BudgetExceeded:
                return None
        if len(cyc) > len(best):
            best = cyc
    return _result(g, best, "kernel_exact", guarantee=True)


def _cycle_order(g: Graph, block: list[int]) -> list[int]:
    inb = set(block)
    out, prev = [block[0]], None
    while True:
        nxt = next(w for w in g.adj[out[-1]] if w in inb and w != prev)
        if nxt == block[0]:
            return out
        prev = out[-1]
        out.append(nxt)


# -- crux pipeline ------------------------------------------------------------


def cycle_via_crux_pipeline(
    g: Graph,
    alpha,
    epsilon: float | None = None,
    C: float = 40.0,
    seed: int = 0,
    crux: CruxCertificate | None = None,
    host: tuple | None = None,
) -> tuple[CycleResult, BoundReport]:
    """crux -> ``(epsilon, n_c/2)``-expander ``H`` -> rotation search on ``H``.

    Defaults follow the long-cycle-in-crux argument: ``epsilon = (1-alpha)/500``
    and ``C = 40``.  ``n_c`` is the exact crux when ``n <= 24``, otherwise the
    heuristic certificate's lower bound (so every reported bound stays valid);
    ``host`` is forwarded to :func:`crux_upper_heuristic`.
    """
    a = as_alpha(alpha)
    alpha_f = float(a)
    eps = (1 - alpha_f) / 500 if epsilon is None else float(epsilon)
    if g.num_edges == 0:
        raise PreconditionError("pipeline needs at least one edge")
    if crux is None:
        crux = crux_exact(g, a) if g.n <= CRUX_EXACT_LIMIT else crux_upper_heuristic(g, a, host)
    n_c = crux.lower_bound
    rep = extract_expander(g, eps, n_c / 2, C, seed=seed)
    H, labels = g.induced(rep.subgraph.members)
    target = eps / 32 * n_c
    # with t = 1 the rotation argument only promises a "cycle" of length 2, so certify at t >= 2
    t_cert = max(math.ceil(target), 2)
    certified = rep.verified == "exhaustive" and H.n <= 18 and local_expansion_holds(H, H.n / 2, t_cert)
    inner = posa_rotation_cycle(H, target_t=target, seed=seed)
    verts = [labels[v] for v in inner.vertices]
    n_h = H.n
    bounds = BoundReport(
        crux_bound=(1 - alpha_f) / 16000 * n_c,
        expander_bound_a=eps / 32 * n_c,
        expander_bound_b=eps * n_h / (1200 * math.log(n_h) ** 2) if n_h > 1 else 0.0,
        posa_t=t_cert,
        K=n_h / n_c,
        c_alpha_lower=crux.lower_bound,
        c_alpha_upper=crux.upper_bound,
        epsilon=eps,
        C=C,
        expansion_certified=certified,
    )
    notes = [f"expander verification: {rep.verified}"] + list(rep.notes)
    res = _result(g, verts, "pipeline", bound_claimed=bounds.crux_bound, guarantee=certified,
                  meets_target=len(verts) >= bounds.crux_bound, notes=tuple(notes))
    return res, bounds


# -- DFS-stack cycle in an expander -----------------------------------------------


def stack_cycle_floor(n: int, epsilon: float) -> float:
    """``epsilon n / (1200 log^2 n)``."""
    if n < 2:
        return 0.0
    return epsilon * n / (1200 * math.log(n) ** 2)


def _tree_path_down(parent: Sequence[int], top: int, bottom: int) -> list[int]:
    out = [bottom]
    while out[-1] != top:
        out.append(parent[out[-1]])
    out.reverse()
    return out


def _connector_max_span(g: Graph, index: dict[int, int], sources: Iterable[int], targets: set[int],
                        blocked: set[int]) -> tuple[int, ...] | None:
    """Shortest path from ``sources`` to ``targets`` avoiding ``blocked``;
    among shortest ones the pair maximising ``index[b] - index[a]`` wins."""
    srcs = sorted((s for s in sources if s not in blocked), key=lambda s: index[s])
    if not srcs:
        return None
    parent: dict[int, int | None] = {s: None for s in srcs}
    root = {s: s for s in srcs}
    layer = srcs
    while layer:
        hits = [v for v in layer if v in targets]
        if hits:
            b = max(hits, key=lambda v: (index[v] - index[root[v]], -v))
            out = [b]
            while parent[out[-1]] is not None:
                out.append(parent[out[-1]])
            return tuple(reversed(out))
        nxt = []
        for v in layer:
            for w in g.adj[v]:
                if w in parent or w in blocked:
                    continue
                parent[w] = v
                root[w] = root[v]
                nxt.append(w)
        layer = nxt
    return None


@dataclass
class _TimedDfs:
    parent: list[int]
    depth: list[int]
    order: list[int]
    roots: list[int]
    push: list[int]
    pop: list[int]
    sizes: list[int]  # stack size after each event
    tops: list[int]  # stack top after each event (-1 when empty)
    popped_after: list[int]  # vertices popped after each event

    def forest(self) -> DfsForest:
        return DfsForest(tuple(self.parent), tuple(self.order), tuple(self.roots), tuple(self.depth))

    def is_descendant(self, v: int, u: int) -> bool:
        return self.push[u] < self.push[v] and self.pop[v] < self.pop[u]


def _timed_dfs(g: Graph) -> _TimedDfs:
    n = g.n
    parent, depth = [-1] * n, [0] * n
    push, pop = [-1] * n, [-1] * n
    ptr = [0] * n
    order, roots, sizes, tops, popped_after = [], [], [], [], []
    stack: list[int] = []
    popped = 0

    def tick():
        sizes.append(len(stack))
        tops.append(stack[-1] if stack else -1)
        popped_after.append(popped)

    for r in range(n):
        if push[r] >= 0:
            continue
        push[r] = len(sizes)
        roots.append(r)
        order.append(r)
        stack.append(r)
        tick()
        while stack:
            v = stack[-1]
            nb = g.adj[v]
            i = ptr[v]
            while i < len(nb) and push[nb[i]] >= 0:
                i += 1
            ptr[v] = i
            if i == len(nb):
                stack.pop()
                pop[v] = len(sizes)
                popped += 1
            else:
                w = nb[i]
                parent[w], depth[w] = v, depth[v] + 1
                push[w] = len(sizes)
                order.append(w)
                stack.append(w)
            tick()
    return _TimedDfs(parent, depth, order, roots, push, pop, sizes, tops, popped_after)


def _back_edge_fallback(g: Graph, forest: DfsForest) -> list[int] | None:
    best = None
    for u, v in g.edges:
        if forest.parent[u] == v or forest.parent[v] == u:
            continue
        a, b = (u, v) if forest.depth[u] < forest.depth[v] else (v, u)
        span = forest.depth[b] - forest.depth[a] + 1
        if best is None or span > best[0]:
            best = (span, a, b)
    if best is None:
        return None
    return _tree_path_down(forest.parent, best[1], best[2])


def _case_a(g: Graph, T: _TimedDfs, seg: int) -> list[int] | None:
    t_best = max(range(len(T.sizes)), key=lambda i: (T.sizes[i], -i))
    top = T.tops[t_best]
    Q = T.forest().path_to_root(top)[::-1]
    i = (len(Q) - seg) // 2
    mid = set(Q[i : i + seg])
    A, B = Q[:i], set(Q[i + seg :])
    index = {v: k for k, v in enumerate(Q)}
    conn = _connector_max_span(g, index, A, B, mid)
    if conn is None:
        return None
    return Q[index[conn[0]] : index[conn[-1]] + 1] + list(reversed(conn[1:-1]))


def _case_b(g: Graph, T: _TimedDfs, seg: int) -> list[int] | None:
    n = g.n
    third = n // 3
    start = next((i for i, p in enumerate(T.popped_after) if p >= third), None)
    if start is None or T.sizes[start] == 0:
        return None
    # window: the stack at ``start`` plus the stacks after the next third-1 pushes
    pushes_after = [v for v in T.order if T.push[v] > start]
    window_pushes = pushes_after[: max(third - 1, 0)]
    end = T.push[window_pushes[-1]] if window_pushes else start
    tau = min(range(start, end + 1), key=lambda i: (T.sizes[i], i))
    u = T.tops[tau]
    if u < 0:
        return None
    P = T.forest().path_to_root(u)[::-1]
    if len(P) <= seg:
        return None
    Pp = set(P[-seg:])
    rest = set(P[:-seg])
    endpoints = [T.tops[start]] + window_pushes
    before = sum(1 for e in endpoints if e != u and T.push[e] <= tau)
    after = sum(1 for e in endpoints if T.push[e] > tau)
    desc = [v for v in T.order if T.is_descendant(v, u)]
    if before >= after:
        W = [v for v in desc if T.pop[v] <= tau]
        Z = rest | {v for v in range(n) if T.push[v] > tau}
    else:
        W = [v for v in desc if T.push[v] > tau]
        Z = rest | {v for v in range(n) if 0 <= T.pop[v] <= tau}
    if not W:
        return None
    index = {v: T.push[v] for v in range(n)}
    conn = _connector_max_span(g, index, W, Z, Pp)
    if conn is None or conn[-1] not in rest:
        return None
    down = _tree_path_down(T.parent, u, conn[0])
    return P[P.index(conn[-1]) :] + down[1:] + list(reversed(conn[1:-1]))


def dfs_stack_cycle(
    g: Graph,
    epsilon: float,
    t: float,
    expander_status: str | ExpanderReport | None = None,
    seed: int = 0,
) -> CycleResult:
    """Cycle through the DFS stack, following the expander argument.

    Let ``L = epsilon n / (1200 log^2 n)`` (at least one vertex is used).

    (a) If the DFS stack ever holds ``max(n/100, L+2)`` vertices, take the
        longest stack path, delete its middle ``L`` vertices and join the two
        halves by a shortest avoiding path, keeping the widest span.
    (b) Otherwise watch the ``n/3`` stack paths seen once ``n/3`` vertices
        are finished; their common prefix ``P`` is the shallowest stack in
        that window.  Delete the last ``L`` vertices ``P'`` of ``P`` and join
        the majority side (finished or unexplored descendants of the end of
        ``P``) to ``P - P'``.

    ``guarantee`` is on iff ``n >= 150 t``, ``epsilon <= 1/500`` and the
    graph passed expander verification (run here unless ``expander_status``
    is given).  When neither case closes a cycle the longest DFS back-edge
    cycle is returned with ``guarantee=False``.
    """
    n = g.n
    if n < 3:
        return _result(g, None, "dfs_stack", notes=("fewer than 3 vertices",))
    floor_val = stack_cycle_floor(n, epsilon)
    seg = max(int(math.floor(floor_val)), 1)
    if expander_status is None:
        rep = verify_expander(g, ExpanderParams(epsilon, t), mode="auto", seed=seed,
                              max_seeds=None if n <= 256 else 64)
        status = rep.verified
    elif isinstance(expander_status, ExpanderReport):
        status = expander_status.verified
    else:
        status = expander_status
    hyp = n >= 150 * t and epsilon <= 1 / 500 + 1e-15 and status in ("exhaustive", "sampled")
    notes = [f"expander status: {status}"]
    claimed = float(math.ceil(floor_val))

    T = _timed_dfs(g)
    cyc = None
    if max(T.sizes) >= max(n // 100, seg + 2):
        cyc = _case_a(g, T, seg)
        notes.append("case (a): long stack path" if cyc else "case (a) connector failed")
    if cyc is None:
        cyc = _case_b(g, T, seg)
        notes.append("case (b): common stack prefix" if cyc else "case (b) did not close a cycle")
    ok = hyp
    if cyc is None:
        cyc = _back_edge_fallback(g, T.forest())
        notes.append("fallback: longest DFS back-edge cycle")
        ok = False
    return _result(g, cyc, "dfs_stack", bound_claimed=claimed, guarantee=ok,
                   meets_target=bool(cyc) and len(cyc) >= claimed, notes=tuple(notes))


# -- chord splicing -----------------------------------------------------------


def chain_is_valid(chain: Sequence[tuple[int, int]]) -> bool:
    """Interleaving conditions for a chord chain on one vertical path.

    Chords are ``(top, bottom)`` depth positions listed bottom-first, with
    tops ``a_k`` and bottoms ``b_k``: ``a_0 < b_1 <= b_0``, then
    ``a_k < b_{k+1} <= a_{k-1}``, and finally ``a_{r-1} <= a_{r-2}``.
    """
    r = len(chain)
    if r == 0 or len(set(chain)) != r:
        return False
    if any(b - a < 2 for a, b in chain):
        return False
    if r == 1:
        return True
    if not chain[0][0] < chain[1][1] <= chain[0][1]:
        return False
    for k in range(1, r - 1):
        if not chain[k][0] < chain[k + 1][1] <= chain[k - 1][0]:
            return False
    return chain[r - 1][0] <= chain[r - 2][0]


def chain_length(chain: Sequence[tuple[int, int]]) -> int:
    """Vertices on the cycle of a valid chain: the segments ``[b_1, b_0]``,
    ``[b_{k+2}, a_k]`` and ``[a_{r-1}, a_{r-2}]`` joined by the chords."""
    r = len(chain)
    if r == 1:
        a, b = chain[0]
        return b - a + 1
    total = chain[0][1] - chain[1][1] + 1
    for k in range(r - 2):
        total += chain[k][0] - chain[k + 2][1] + 1
    total += chain[r - 2][0] - chain[r - 1][0] + 1
    return total


def _chain_positions(chain: Sequence[tuple[int, int]]) -> list[int]:
    """Depth positions of the chain cycle in traversal order."""
    r = len(chain)
    if r == 1:
        a, b = chain[0]
        return list(range(a, b + 1))
    a = [c[0] for c in chain]
    b = [c[1] for c in chain]
    segs = [(b[1], b[0])] + [(b[k + 2], a[k]) for k in range(r - 2)] + [(a[r - 1], a[r - 2])]
    nbr: dict[int, list[int]] = {}
    for lo, hi in segs:
        nbr.setdefault(lo, [])
        for x in range(lo, hi):
            nbr.setdefault(x, []).append(x + 1)
            nbr.setdefault(x + 1, []).append(x)
    for x, y in chain:
        nbr[x].append(y)
        nbr[y].append(x)
    if any(len(v) != 2 for v in nbr.values()):
        raise CruxkitError("chord chain does not trace a cycle")
    walk, prev, cur = [b[0]], None, b[0]
    while True:
        x, y = nbr[cur]
        nxt = y if x == prev else x
        if nxt == b[0]:
            break
        walk.append(nxt)
        prev, cur = cur, nxt
    if len(walk) != len(nbr):
        raise CruxkitError("chord chain splits into several cycles")
    return walk


def _best_chain_dp(chords: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Longest valid chain (exact; cubic in the chord count).

    States are the last two chords.  The newest bottom strictly decreases
    along any chain, so processing states by that bottom is a valid order.
    """
    best_len, best = 0, []
    for c in chords:
        if c[1] - c[0] + 1 > best_len:
            best_len, best = c[1] - c[0] + 1, [c]
    val: dict[tuple[int, int], int] = {}
    back: dict[tuple[int, int], tuple[int, int] | None] = {}
    for i, (ai, bi) in enumerate(chords):
        for j, (aj, bj) in enumerate(chords):
            if i != j and ai < bj <= bi:
                val[(i, j)] = bi - bj + 1
                back[(i, j)] = None
    bottoms = sorted({c[1] for c in chords}, reverse=True)
    by_b: dict[int, list[tuple[int, int]]] = {}
    for key in val:
        by_b.setdefault(chords[key[1]][1], []).append(key)
    for bot in bottoms:
        for key in sorted(by_b.get(bot, ())):
            i, j = key
            v = val[key]
            ai, aj = chords[i][0], chords[j][0]
            if aj <= ai and v + ai - aj + 1 > best_len:
                best_len = v + ai - aj + 1
                seq = [j, i]
                cur = back[key]
                while cur is not None:
                    seq.append(cur[0])
                    cur = back[cur]
                best = [chords[s] for s in reversed(seq)]
            for l, (al, bl) in enumerate(chords):
                if aj < bl <= ai and l != i and l != j:
                    nk = (j, l)
                    if v + ai - bl + 1 > val.get(nk, -1):
                        if nk not in val:
                            by_b.setdefault(bl, []).append(nk)
                        val[nk] = v + ai - bl + 1
                        back[nk] = key
    return best


def _greedy_chain(chords: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Start from the deepest chord; each next chord must interleave and
    rises highest among those that do."""
    chain = [max(chords, key=lambda c: (c[1], -c[0]))]
    while True:
        a_k = chain[-1][0]
        upper = chain[0][1] if len(chain) == 1 else chain[-2][0]
        cands = [c for c in chords if a_k < c[1] <= upper and c[0] < a_k and c not in chain]
        if not cands:
            return chain
        chain.append(min(cands, key=lambda c: (c[0], -c[1])))


DP_CHORD_LIMIT = 60


def chord_splice_cycle(forest: DfsForest, chords: Iterable[tuple[int, int]], g: Graph | None = None) -> CycleResult:
    """Longest interleaved-chord cycle over the root-to-leaf paths of ``forest``.

    Every chord must join a vertex to one of its proper ancestors.  On each
    vertical path the chords lying on it are chained greedily from the
    bottom; with at most ``DP_CHORD_LIMIT`` chords an exact search over
    chains also runs and the better answer is kept.  ``g`` defaults to the
    forest plus the chords.
    """
    chords = list(chords)
    parent, depth = forest.parent, forest.depth
    if g is None:
        g = Graph(forest.n, set(forest.tree_edges()) | {(min(u, v), max(u, v)) for u, v in chords})
    by_bottom: dict[int, list[int]] = {}
    for u, v in chords:
        a, b = (u, v) if depth[u] < depth[v] else (v, u)
        if a == b or not forest.is_ancestor(a, b) or parent[b] == a:
            raise PreconditionError(f"chord ({u}, {v}) does not join a vertex to a proper non-parent ancestor")
        by_bottom.setdefault(b, []).append(a)
    if not by_bottom:
        return _result(g, None, "chord_splice", notes=("no chords",))
    children = forest.children()
    best_len, best_cycle = 0, None
    for leaf in forest.order:
        if children[leaf]:
            continue
        path = forest.path_to_root(leaf)[::-1]
        d0 = depth[path[0]]
        on = sorted({(depth[a] - d0, depth[v] - d0) for v in path for a in by_bottom.get(v, ())})
        if not on:
            continue
        chain = _greedy_chain(on)
        single = max(on, key=lambda c: c[1] - c[0])
        if not chain_is_valid(chain) or chain_length(chain) < single[1] - single[0] + 1:
            chain = [single]
        if len(on) <= DP_CHORD_LIMIT:
            dp = _best_chain_dp(on)
            if chain_length(dp) > chain_length(chain):
                chain = dp
        length = chain_length(chain)
        if length > best_len:
            best_len = length
            best_cycle = [path[x] for x in _chain_positions(chain)]
    return _result(g, best_cycle, "chord_splice")

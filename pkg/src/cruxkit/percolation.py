"""Random subgraphs: DFS with unrevealed edges, vertex diagnostics, giant
components and the two long-cycle experiments.

Edge presence always comes from the package PRNG keyed by
``(seed, trial_id, edge index)``, so the lazily revealed DFS and
:func:`cruxkit.generators.sample_subgraph` see the same random graph.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import rng
from .cycles import DfsForest, chord_splice_cycle, longest_cycle_kernel, posa_rotation_cycle, validate_cycle
from .errors import PreconditionError
from .generators import PercolationConfig, hypercube, is_c4_free, is_prime, projective_incidence, sample_subgraph
from .graph import Graph, VertexSet
from .separators import separability_corollary_params, separability_decompose

__all__ = [
    "RevealedDfs",
    "VertexDiagnostics",
    "ClassificationReport",
    "ComponentReport",
    "FullSetExpansion",
    "ExperimentTable",
    "dfs_with_unrevealed",
    "classify_vertices",
    "claim41_expansion_check",
    "full_set_expansion_sweep",
    "giant_component",
    "hypercube_cycle_experiment",
    "c4free_cycle_experiment",
    "loglog_slope",
]


def _frac(x) -> Fraction:
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


@dataclass
class RevealedDfs:
    """DFS forest of ``G_p`` built by lazy probing of host edges.

    ``outcomes`` maps each probed host edge index to its presence; the
    never-probed edges form ``Q`` (``unrevealed``).
    """

    host: Graph
    cfg: PercolationConfig
    forest: DfsForest
    outcomes: dict[int, bool]
    unrevealed: tuple[int, ...]
    k: int
    epsilon_diag: float | None = None
    _u: np.ndarray = field(default=None, repr=False)

    def q_edges(self) -> list[tuple[int, int]]:
        return [self.host.edges[i] for i in self.unrevealed]

    def q_degrees(self) -> np.ndarray:
        deg = np.zeros(self.host.n, dtype=np.int64)
        if self.unrevealed:
            e = self.host.edge_array[list(self.unrevealed)]
            np.add.at(deg, e[:, 0], 1)
            np.add.at(deg, e[:, 1], 1)
        return deg

    def present_chords(self) -> list[tuple[int, int]]:
        """Edges of ``Q`` that turn out to be in ``G_p`` when revealed."""
        return [self.host.edges[i] for i in self.unrevealed if self._u[i] < self.cfg.p]

    def revealed_graph(self) -> Graph:
        """``G_p`` after revealing ``Q``: tree edges plus the present chords."""
        keep = [i for i, ok in self.outcomes.items() if ok]
        keep += [i for i in self.unrevealed if self._u[i] < self.cfg.p]
        return self.host.spanning_subgraph(sorted(keep))

    def ancestor_violations(self) -> list[tuple[int, int]]:
        tin, tout = _intervals(self.forest)
        bad = []
        for u, v in self.q_edges():
            if not (tin[u] <= tin[v] <= tout[u] or tin[v] <= tin[u] <= tout[v]):
                bad.append((u, v))
        return bad


def _intervals(forest: DfsForest) -> tuple[np.ndarray, np.ndarray]:
    n = forest.n
    tin = np.full(n, -1, dtype=np.int64)
    tin[list(forest.order)] = np.arange(len(forest.order))
    tout = tin + np.asarray(forest.descendant_counts(), dtype=np.int64) - 1
    return tin, tout


def dfs_with_unrevealed(host: Graph, cfg: PercolationConfig, epsilon_diag: float | None = None) -> RevealedDfs:
    """DFS of ``G_p`` that probes host edges only when it needs them.

    The top vertex ``v`` lists its host edges to unexplored vertices in
    increasing order and reveals them one at a time until one is present
    (that neighbour is pushed) or the list runs out (``v`` is popped).
    Roots are taken lowest id first.
    """
    n = host.n
    u = rng.uniforms(cfg.seed, cfg.trial_id, host.num_edges)
    index = host.edge_index
    p = cfg.p
    parent = [-1] * n
    depth = [0] * n
    seen = [False] * n
    ptr = [0] * n
    order: list[int] = []
    roots: list[int] = []
    outcomes: dict[int, bool] = {}
    for r in range(n):
        if seen[r]:
            continue
        seen[r] = True
        roots.append(r)
        order.append(r)
        stack = [r]
        while stack:
            v = stack[-1]
            nb = host.adj[v]
            i = ptr[v]
            pushed = False
            while i < len(nb):
                w = nb[i]
                i += 1
                if seen[w]:
                    continue
                e = index[(v, w) if v < w else (w, v)]
                ok = bool(u[e] < p)
                outcomes[e] = ok
                if ok:
                    seen[w] = True
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    order.append(w)
                    stack.append(w)
                    pushed = True
                    break
            ptr[v] = i
            if not pushed:
                stack.pop()
    forest = DfsForest(tuple(parent), tuple(order), tuple(roots), tuple(depth))
    unrevealed = tuple(i for i in range(host.num_edges) if i not in outcomes)
    return RevealedDfs(host, cfg, forest, outcomes, unrevealed, host.min_degree, epsilon_diag, u)


@dataclass(frozen=True)
class VertexDiagnostics:
    full: bool
    poor: bool
    light: bool
    q_degree: int
    descendants: int
    near_descendants: int
    long_chords: int

    @property
    def rich(self) -> bool:
        return not self.poor


@dataclass
class ClassificationReport:
    """Per-vertex labels plus the aggregate fractions the proofs reason about.

    * full: at least ``(1-eps)k`` incident edges in ``Q``
    * poor: at most ``eps k^2`` descendants (``v`` counts as its own)
    * light: at most ``(1-9eps)k^2`` descendants within tree distance
      ``(1-10eps)k^2``
    * long_chords: ``Q``-edges at tree distance ``>= (1-20eps)k^2``
    """

    vertices: list[VertexDiagnostics]
    epsilon: float
    k: int
    full_fraction: float
    poor_fraction: float
    light_fraction: float
    long_chord_total: int

    def full_vertices(self) -> list[int]:
        return [v for v, d in enumerate(self.vertices) if d.full]

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "k": self.k,
            "full_fraction": self.full_fraction,
            "poor_fraction": self.poor_fraction,
            "light_fraction": self.light_fraction,
            "long_chord_total": self.long_chord_total,
        }


def classify_vertices(r: RevealedDfs, eps: float) -> ClassificationReport:
    e = _frac(eps)
    if not 0 < e < 1:
        raise PreconditionError("eps must lie in (0,1)")
    k = r.k
    n = r.host.n
    k2 = k * k
    qdeg = r.q_degrees()
    forest = r.forest
    tin, tout = _intervals(forest)
    depth = np.asarray(forest.depth, dtype=np.int64)
    by_tin = np.empty(n, dtype=np.int64)
    by_tin[tin] = depth
    radius = (1 - 10 * e) * k2
    near = np.zeros(n, dtype=np.int64)
    for v in range(n):
        seg = by_tin[tin[v] : tout[v] + 1]
        near[v] = int(np.count_nonzero((seg - depth[v]) <= math.floor(radius))) if radius >= 0 else 0
    desc = tout - tin + 1
    long_cut = (1 - 20 * e) * k2
    chords = np.zeros(n, dtype=np.int64)
    for a, b in r.q_edges():
        if abs(int(depth[a]) - int(depth[b])) >= long_cut:
            chords[a] += 1
            chords[b] += 1
    out = []
    for v in range(n):
        out.append(VertexDiagnostics(
            full=int(qdeg[v]) >= (1 - e) * k,
            poor=int(desc[v]) <= e * k2,
            light=int(near[v]) <= (1 - 9 * e) * k2,
            q_degree=int(qdeg[v]),
            descendants=int(desc[v]),
            near_descendants=int(near[v]),
            long_chords=int(chords[v]),
        ))
    frac = lambda key: sum(1 for d in out if getattr(d, key)) / n if n else 0.0
    return ClassificationReport(out, float(eps), k, frac("full"), frac("poor"), frac("light"), int(chords.sum()) // 2)


@dataclass(frozen=True)
class FullSetExpansion:
    measured: int
    bound: float
    vacuous: bool

    @property
    def holds(self) -> bool:
        return self.measured >= self.bound


def claim41_expansion_check(host: Graph, r: RevealedDfs, A: Iterable[int], eps: float, C: float,
                            diagnostics: ClassificationReport | None = None,
                            check_c4: bool = True) -> FullSetExpansion:
    """``|N_Q(A)|`` against ``(1-5eps)k^2`` for a set ``A`` of ``ceil(Ck)`` full vertices.

    ``N_Q(A)`` is every vertex joined to ``A`` by an unrevealed edge.  The
    bound is flagged vacuous when it exceeds ``n``.
    """
    A = sorted(set(A))
    need = math.ceil(C * r.k - 1e-9)
    if len(A) != need:
        raise PreconditionError(f"|A| must be ceil(C k) = {need}, got {len(A)}")
    if check_c4 and not is_c4_free(host):
        raise PreconditionError("host must be C4-free")
    diag = diagnostics if diagnostics is not None else classify_vertices(r, eps)
    if not all(diag.vertices[v].full for v in A):
        raise PreconditionError("every vertex of A must be full")
    members = set(A)
    nbrs = set()
    for a, b in r.q_edges():
        if a in members:
            nbrs.add(b)
        if b in members:
            nbrs.add(a)
    bound = float((1 - 5 * _frac(eps)) * r.k * r.k)
    return FullSetExpansion(len(nbrs), bound, bound > host.n)


def full_set_expansion_sweep(host: Graph, r: RevealedDfs, eps: float, C: float, samples: int, seed: int = 0) -> dict:
    """Sample ``samples`` sets of full vertices and count violations.

    Violations are findings (the claim is a w.h.p. statement), never errors.
    Returns ``feasible=False`` when there are fewer than ``ceil(Ck)`` full
    vertices.
    """
    diag = classify_vertices(r, eps)
    full = diag.full_vertices()
    need = math.ceil(C * r.k - 1e-9)
    bound = float((1 - 5 * _frac(eps)) * r.k * r.k)
    if need > len(full):
        return {"feasible": False, "need": need, "full": len(full), "bound": bound,
                "vacuous": bound > host.n, "samples": 0, "violations": 0, "min_measured": None}
    c4 = is_c4_free(host)
    if not c4:
        raise PreconditionError("host must be C4-free")
    kr = rng.KeyedRandom(seed, 0x4131)
    worst, bad = None, 0
    for _ in range(samples):
        res = claim41_expansion_check(host, r, kr.sample(full, need), eps, C, diag, check_c4=False)
        bad += not res.holds
        worst = res.measured if worst is None else min(worst, res.measured)
    return {"feasible": True, "need": need, "full": len(full), "bound": bound, "vacuous": bound > host.n,
            "samples": samples, "violations": bad, "min_measured": worst}


@dataclass(frozen=True)
class ComponentReport:
    sizes: tuple[int, ...]
    largest: int
    fraction: float
    members: VertexSet

    def to_dict(self) -> dict:
        return {"largest": self.largest, "fraction": self.fraction, "components": len(self.sizes)}


def giant_component(g: Graph) -> ComponentReport:
    """Exact component sizes (descending) and the largest component."""
    if g.n == 0:
        return ComponentReport((), 0, 0.0, VertexSet(frozenset(), 0))
    e = g.edge_array
    if len(e):
        m = csr_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
        labels = connected_components(m, directed=False)[1]
    else:
        labels = np.arange(g.n)
    counts = np.bincount(labels)
    # ties broken towards the component holding the smallest vertex
    first = np.full(len(counts), g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n))
    big = int(min(range(len(counts)), key=lambda c: (-counts[c], first[c])))
    members = VertexSet(frozenset(np.nonzero(labels == big)[0].tolist()), g.n)
    sizes = tuple(sorted(counts.tolist(), reverse=True))
    return ComponentReport(sizes, sizes[0], sizes[0] / g.n, members)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x`` (points with ``y <= 0`` dropped)."""
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2:
        return float("nan")
    a = np.asarray(pts)
    return float(np.polyfit(a[:, 0], a[:, 1], 1)[0])


@dataclass
class ExperimentTable:
    columns: tuple[str, ...]
    rows: list[dict]
    summary: dict

    def csv_lines(self, timing: bool = True) -> list[str]:
        cols = [c for c in self.columns if timing or c != "runtime_ms"]
        lines = [",".join(cols)]
        for row in self.rows:
            lines.append(",".join(_fmt(row[c]) for c in cols))
        return lines


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(round(x, 10))
    return str(x)


HYPERCUBE_COLUMNS = ("trial_id", "m", "p", "n", "c1", "c1_fraction", "h_size", "cycle_len", "method", "floor",
                     "greedy_floor", "runtime_ms")
KERNEL_CYCLOMATIC = 30
KERNEL_BUDGET = 300_000


@lru_cache(maxsize=8)
def _hypercube(m: int) -> Graph:
    return hypercube(m)


@lru_cache(maxsize=8)
def _projective(q: int) -> Graph:
    return projective_incidence(q)


def _run(fn, jobs: list[tuple], workers: int) -> list[dict]:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _hypercube_trial(m: int, pm: float, s: int, t: int, seed: int, trial: int, restarts: int | None) -> dict:
    t0 = time.perf_counter()
    host = _hypercube(m)
    n = host.n
    gp = sample_subgraph(host, PercolationConfig(pm, seed, trial))
    comp = giant_component(gp)
    verdict = separability_decompose(gp, s, t, seed=seed)
    h_size, cyc_len, method = 0, 0, "none"
    if not verdict.separable:
        H, labels = gp.induced(verdict.evidence.members)
        core = giant_component(H)
        h_size = len(verdict.evidence)
        sub, sub_labels = H.induced(core.members.members)
        res = longest_cycle_kernel(sub, KERNEL_CYCLOMATIC, KERNEL_BUDGET)
        if res is None:
            res = posa_rotation_cycle(sub, seed=seed * 1_000_003 + trial, restarts=restarts)
        method = res.method
        if res.found:
            cyc = [labels[sub_labels[v]] for v in res.vertices]
            validate_cycle(gp, cyc)
            cyc_len = len(cyc)
    return {
        "trial_id": trial,
        "m": m,
        "p": pm,
        "n": n,
        "c1": comp.largest,
        "c1_fraction": comp.fraction,
        "h_size": h_size,
        "cycle_len": cyc_len,
        "method": method,
        "floor": n / (4 * float(m) ** 32),
        "greedy_floor": m + 1,
        "runtime_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


def hypercube_cycle_experiment(
    ms: Sequence[int],
    eps: float,
    trials: int,
    seed: int,
    psi=None,
    p: float | None = None,
    restarts: int | None = None,
    workers: int = 1,
) -> ExperimentTable:
    """Long cycles in ``Q^m_p`` through non-separability.

    Per trial: sample ``Q^m_p`` with ``p = (1+eps)/m`` (or the given ``p``),
    decompose at ``s = ceil(4 psi^3)``, ``t = ceil(n/psi)`` (``psi`` defaults
    to ``m^8``), take the stuck piece ``H`` and search its largest component
    for a long cycle.  Sparse blocks are solved exactly with
    :func:`longest_cycle_kernel`; otherwise rotation-extension is used.
    ``floor`` is ``n/(4 m^32)`` and ``greedy_floor`` is ``m + 1``.
    """
    jobs = []
    for m in ms:
        pm = (1 + eps) / m if p is None else p
        ps = float(m) ** 8 if psi is None else (psi(m) if callable(psi) else float(psi))
        params = separability_corollary_params(1 << m, ps)
        jobs += [(m, pm, params.s, params.t, seed, trial, restarts) for trial in range(trials)]
    rows = _run(_hypercube_trial, jobs, workers)
    rows.sort(key=lambda r: (r["m"], r["trial_id"]))
    summary = {}
    for m in ms:
        mine = [r for r in rows if r["m"] == m]
        summary[m] = {
            "mean_c1_fraction": float(np.mean([r["c1_fraction"] for r in mine])) if mine else 0.0,
            "mean_cycle": float(np.mean([r["cycle_len"] for r in mine])) if mine else 0.0,
            "min_cycle": min((r["cycle_len"] for r in mine), default=0),
        }
    return ExperimentTable(HYPERCUBE_COLUMNS, rows, summary)


C4FREE_COLUMNS = ("trial_id", "q", "k", "c", "p", "n", "c1", "h_size", "splice_len", "posa_len", "cycle_len",
                  "ratio", "floor", "runtime_ms")


def _c4free_trial(q: int, c: float, seed: int, trial: int, restarts: int | None) -> dict:
    t0 = time.perf_counter()
    host = _projective(q)
    k = q + 1
    pc = min(1.0, c / k)
    r = dfs_with_unrevealed(host, PercolationConfig(pc, seed, trial))
    gp = r.revealed_graph()
    chords = r.present_chords()
    spl = chord_splice_cycle(r.forest, chords, gp) if chords else None
    comp = giant_component(gp)
    sub, labels = gp.induced(comp.members.members)
    pos = posa_rotation_cycle(sub, seed=seed * 1_000_003 + trial, restarts=restarts)
    posa_cyc = [labels[v] for v in pos.vertices]
    if posa_cyc:
        validate_cycle(gp, posa_cyc)
    splice_len = spl.length if spl is not None else 0
    L = max(splice_len, len(posa_cyc))
    return {
        "trial_id": trial,
        "q": q,
        "k": k,
        "c": c,
        "p": pc,
        "n": host.n,
        "c1": comp.largest,
        "h_size": comp.largest,
        "splice_len": splice_len,
        "posa_len": len(posa_cyc),
        "cycle_len": L,
        "ratio": L / (k * k),
        "floor": k * k,
        "runtime_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


def c4free_cycle_experiment(
    qs: Sequence[int],
    cs: Sequence[float],
    trials: int,
    seed: int,
    restarts: int | None = None,
    workers: int = 1,
) -> ExperimentTable:
    """Long cycles in random subgraphs of projective-plane incidence graphs.

    Per trial: ``p = c/k`` with ``k = q+1``; run the revealing DFS, splice
    its present chords into a cycle, run rotation-extension on the giant
    component and keep the longer cycle.  ``ratio`` is ``L/k^2`` and
    ``floor`` is ``k^2``; the summary holds, per ``c``, the log-log slope of
    mean ``L`` against ``k``.
    """
    for q in qs:
        if not is_prime(q):
            raise PreconditionError(f"q must be prime, got {q}")
    jobs = [(q, c, seed, trial, restarts) for q in qs for c in cs for trial in range(trials)]
    rows = _run(_c4free_trial, jobs, workers)
    rows.sort(key=lambda r: (r["q"], r["c"], r["trial_id"]))
    summary = {}
    for c in cs:
        ks, means = [], []
        for q in qs:
            mine = [r["cycle_len"] for r in rows if r["q"] == q and r["c"] == c]
            if mine:
                ks.append(q + 1)
                means.append(float(np.mean(mine)))
        summary[c] = {"k": ks, "mean_cycle": means, "slope": loglog_slope(ks, means)}
    return ExperimentTable(C4FREE_COLUMNS, rows, summary)

"""The crux function ``c_alpha(G)``: exact search, peeling upper bounds and
closed-form lower bounds.

``c_alpha(G)`` is the smallest order of a subgraph ``H`` with
``d(H) >= alpha * d(G)``.  For a fixed vertex set the induced subgraph has
the most edges, so the minimum is always attained by an induced subgraph and
every search here ranges over vertex sets only.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import CruxkitError, PreconditionError
from .graph import Graph, VertexSet, average_degree

EXACT_LIMIT = 24

LOWER_METHODS = ("exhaustive", "isoperimetric_hypercube", "isoperimetric_hamming", "kst_free", "trivial_alpha_d")

__all__ = [
    "CruxCertificate",
    "as_alpha",
    "is_alpha_crux",
    "crux_exact",
    "crux_upper_heuristic",
    "crux_lb_hypercube",
    "crux_lb_hamming",
    "crux_lb_kst_free",
    "trivial_lower_bound",
    "edge_isoperimetry_check",
    "IsoperimetryViolation",
]


class IsoperimetryViolation(CruxkitError):
    pass


def as_alpha(alpha) -> Fraction:
    """Convert to an exact fraction in (0, 1); floats go through their shortest repr."""
    if isinstance(alpha, float):
        alpha = Fraction(repr(alpha))
    a = Fraction(alpha)
    if not 0 < a < 1:
        raise PreconditionError("alpha must lie in (0,1)")
    return a


@dataclass(frozen=True)
class CruxCertificate:
    alpha: Fraction
    lower_bound: int
    upper_bound: int
    witness: VertexSet | None
    lower_method: str
    upper_method: str = "exhaustive"

    def __post_init__(self):
        if self.lower_bound > self.upper_bound:
            raise CruxkitError(f"lower bound {self.lower_bound} exceeds upper bound {self.upper_bound}")
        if self.lower_method not in LOWER_METHODS:
            raise CruxkitError(f"unknown lower-bound method {self.lower_method!r}")
        if self.witness is not None and len(self.witness) != self.upper_bound:
            raise CruxkitError("witness size must equal the upper bound")

    @property
    def exact(self) -> bool:
        return self.lower_bound == self.upper_bound

    def to_dict(self) -> dict:
        return {
            "alpha": float(self.alpha),
            "lower": self.lower_bound,
            "upper": self.upper_bound,
            "method": self.lower_method,
            "upper_method": self.upper_method,
            "witness": self.witness.sorted() if self.witness is not None else None,
        }


def _ceil_int(x: float) -> int:
    r = round(x)
    if abs(x - r) <= 1e-9 * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


def _induced_edges(bm: tuple[int, ...], members: Iterable[int], mask: int) -> int:
    return sum((bm[v] & mask).bit_count() for v in members) // 2


def is_alpha_crux(g: Graph, alpha, vertices: Iterable[int] | VertexSet) -> bool:
    """Exact check of ``d(G[vertices]) >= alpha * d(G)``."""
    a = as_alpha(alpha)
    vs = VertexSet.of(g.n, vertices)
    if len(vs) == 0:
        return False
    e_u = _induced_edges(g.bitmasks, vs.members, vs.mask)
    # e_u / h >= a * e / n, cross-multiplied
    return e_u * g.n * a.denominator >= a.numerator * g.num_edges * len(vs)


def trivial_lower_bound(g: Graph, alpha) -> int:
    """Smallest ``h`` with ``h - 1 >= alpha * d(G)``; always ``> alpha * d(G)``."""
    a = as_alpha(alpha)
    if g.num_edges == 0:
        return 1
    return math.ceil(a * average_degree(g)) + 1


def _dense_candidates(g: Graph, a: Fraction) -> list[int]:
    # In a minimum witness U every vertex v has deg_U(v) > alpha*d(G)/2,
    # otherwise U - v would still qualify.  Peel to that core.
    e, n = g.num_edges, g.n
    keep = [True] * n
    deg = list(g.degrees)
    stack = [v for v in range(n) if deg[v] * n * a.denominator <= a.numerator * e]
    for v in stack:
        keep[v] = False
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if keep[w]:
                deg[w] -= 1
                if deg[w] * n * a.denominator <= a.numerator * e:
                    keep[w] = False
                    stack.append(w)
    return [v for v in range(n) if keep[v]]


def crux_exact(g: Graph, alpha) -> CruxCertificate:
    """Exhaustive ``c_alpha(G)`` for ``n <= 24``.

    Vertex sets are enumerated by increasing size (lexicographically within a
    size), so the witness is the lexicographically first minimum crux.
    """
    a = as_alpha(alpha)
    if g.n == 0:
        raise PreconditionError("crux of the empty graph is undefined")
    if g.n > EXACT_LIMIT:
        raise PreconditionError(f"n={g.n} is beyond exhaustive reach (n <= {EXACT_LIMIT}); use crux_upper_heuristic")
    e, n = g.num_edges, g.n
    if e == 0:
        return CruxCertificate(a, 1, 1, VertexSet(frozenset({0}), n), "exhaustive")
    bm = g.bitmasks
    cand = _dense_candidates(g, a)
    rhs_per_vertex = a.numerator * e
    lhs_scale = n * a.denominator
    for h in range(max(2, trivial_lower_bound(g, a)), len(cand) + 1):
        need = rhs_per_vertex * h
        for combo in combinations(cand, h):
            mask = 0
            for v in combo:
                mask |= 1 << v
            if _induced_edges(bm, combo, mask) * lhs_scale >= need:
                w = VertexSet(frozenset(combo), n)
                return CruxCertificate(a, h, h, w, "exhaustive")
    raise AssertionError("G itself is an alpha-crux; search cannot come up empty")


def _peel_order(g: Graph) -> list[int]:
    """Repeatedly remove a minimum-degree vertex, lowest id first."""
    deg = list(g.degrees)
    alive = [True] * g.n
    heap = [(deg[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        alive[v] = False
        order.append(v)
        for w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return order


def _closed_form_bounds(g: Graph, a: Fraction, host) -> list[tuple[int, str]]:
    out = [(trivial_lower_bound(g, a), "trivial_alpha_d")]
    if host is None or g.num_edges == 0:
        return out
    ad = float(a * average_degree(g))
    kind = host[0]
    if kind == "hypercube":
        out.append((crux_lb_hypercube(ad), "isoperimetric_hypercube"))
    elif kind == "hamming":
        out.append((crux_lb_hamming(ad, int(host[1])), "isoperimetric_hamming"))
    elif kind == "kst_free":
        out.append((crux_lb_kst_free(1.0, ad, int(host[1]), int(host[2])), "kst_free"))
    else:
        raise PreconditionError(f"unknown host hint {host!r}")
    return out


def crux_upper_heuristic(g: Graph, alpha, host: tuple | None = None) -> CruxCertificate:
    """Upper bound on ``c_alpha(G)`` from min-degree peeling.

    The peel passes through the densest prefix and keeps shrinking; the
    smallest set along the peel that is still an alpha-crux is the witness.
    ``host`` names a family ``G`` is known to live in, enabling the matching
    closed-form lower bound: ``("hypercube",)``, ``("hamming", r)`` or
    ``("kst_free", s, t)``.
    """
    a = as_alpha(alpha)
    if g.n == 0:
        raise PreconditionError("crux of the empty graph is undefined")
    n, e = g.n, g.num_edges
    order = _peel_order(g)
    alive = [True] * n
    edges_left = e
    best = n  # G itself always qualifies
    best_step = 0
    for step, v in enumerate(order[:-1], start=1):
        edges_left -= sum(1 for w in g.adj[v] if alive[w])
        alive[v] = False
        size = n - step
        if edges_left * n * a.denominator >= a.numerator * e * size and size < best:
            best, best_step = size, step
    witness = VertexSet(frozenset(order[best_step:]), n)
    lower, method = max(_closed_form_bounds(g, a, host), key=lambda t: (t[0], t[1] == "trivial_alpha_d"))
    if lower > best:
        raise PreconditionError(f"closed-form bound {lower} ({method}) exceeds a verified witness of size {best}; host hint is wrong")
    return CruxCertificate(a, lower, best, witness, method, upper_method="peeling")


def crux_lb_hypercube(d: float) -> int:
    """``ceil(2**d)``: any subgraph of a hypercube with average degree ``d`` has this many vertices."""
    if d < 0:
        raise PreconditionError("average degree must be non-negative")
    return _ceil_int(2.0**d)


def crux_lb_hamming(d: float, r: int) -> int:
    """``ceil(r**(d/(r-1)))``, the Hamming-graph analogue of :func:`crux_lb_hypercube`."""
    if r < 2 or d < 0:
        raise PreconditionError("need r >= 2 and d >= 0")
    return _ceil_int(float(r) ** (d / (r - 1)))


def crux_lb_kst_free(alpha: float, d: float, s: int, t: int) -> int:
    """``ceil((alpha*d)**(s/(s-1)) / (2t))`` for ``K_{s,t}``-free graphs."""
    if not 2 <= s <= t:
        raise PreconditionError("need 2 <= s <= t")
    if d < 0:
        raise PreconditionError("average degree must be non-negative")
    ad = float(alpha) * float(d)
    return _ceil_int(ad ** (s / (s - 1)) / (2 * t))


def edge_isoperimetry_check(m: int, u: Iterable[int] | VertexSet) -> tuple[int, float]:
    """Measured ``|boundary(U)|`` in ``Q^m`` and the bound ``|U| log2(2^m/|U|)``.

    Raises :class:`IsoperimetryViolation` if the measurement falls below the
    bound by more than 1e-9 (it never should).
    """
    members = sorted(VertexSet.of(1 << m, u).members)
    k = len(members)
    if k == 0:
        raise PreconditionError("U must be non-empty")
    if k >= 256:
        arr = np.asarray(members, dtype=np.int64)
        inside = np.zeros(1 << m, dtype=bool)
        inside[arr] = True
        internal = sum(int(inside[arr ^ (1 << b)].sum()) for b in range(m))
    else:
        ms = set(members)
        internal = sum(1 for v in members for b in range(m) if v ^ (1 << b) in ms)
    boundary = k * m - internal
    bound = k * (m - math.log2(k))
    if boundary < bound - 1e-9:
        raise IsoperimetryViolation(f"|dU|={boundary} < {bound} for |U|={k} in Q^{m}")
    return boundary, bound

"""Reference implementations used only by the tests.

They are written against networkx and itertools, sharing no code with the
package, so agreement between the two is meaningful.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product

import networkx as nx


def to_nx(g) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def crux_value(g, alpha) -> int:
    """Smallest vertex set whose induced subgraph has average degree >= alpha d(G)."""
    G = to_nx(g)
    n = g.n
    thr = Fraction(alpha).limit_denominator(10**9) * Fraction(2 * G.number_of_edges(), n)
    for size in range(1, n + 1):
        for U in combinations(range(n), size):
            if Fraction(2 * G.subgraph(U).number_of_edges(), size) >= thr:
                return size
    raise AssertionError("the whole graph always qualifies")


def is_expander(g, eps: float, t: float) -> bool:
    import math

    G = to_nx(g)
    n = g.n
    for size in range(1, n // 2 + 1):
        if size < t / 2:
            continue
        r = 0.0 if size < t / 5 else eps / math.log(15 * size / t) ** 2
        for X in combinations(range(n), size):
            if len(nx.node_boundary(G, X)) < r * size - 1e-12:
                return False
    return True


def longest_cycle(g) -> int:
    G = to_nx(g)
    return max((len(c) for c in nx.simple_cycles(G) if len(c) >= 3), default=0)


def is_cycle_of(g, verts) -> bool:
    if len(verts) < 3 or len(set(verts)) != len(verts):
        return False
    G = to_nx(g)
    return all(G.has_edge(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts)))


def best_separator(g, budget: int) -> tuple[int, int] | None:
    """``(|S|, larger side)`` for the best balanced separator with ``|S| <= budget``.

    Sides may be empty.  Components of ``G - S`` are distributed over the
    two sides in every possible way.
    """
    G = to_nx(g)
    n = g.n
    for size in range(0, min(budget, n) + 1):
        best = None
        for S in combinations(range(n), size):
            H = G.subgraph(set(range(n)) - set(S))
            comps = [len(c) for c in nx.connected_components(H)]
            for assign in product((0, 1), repeat=len(comps)):
                a = sum(c for c, s in zip(comps, assign) if s == 0)
                b = sum(comps) - a
                if 3 * max(a, b) <= 2 * n:
                    m = max(a, b)
                    best = m if best is None else min(best, m)
        if best is not None:
            return size, best
    return None


def chain_cycle(chain, L: int) -> list[int] | None:
    """Vertex positions of the cycle built from an ordered chord chain on the
    path ``0..L-1``, or None if the chain does not close into one cycle.

    Chords are ``(top, bottom)`` listed from the bottom up.  The cycle keeps
    the path piece under the first chord down to the second chord's bottom,
    each gap between chord ``k``'s top and chord ``k+2``'s bottom, and the
    piece between the last two tops.
    """
    r = len(chain)
    if r == 1:
        a, b = chain[0]
        return list(range(a, b + 1)) if b - a >= 2 else None
    tops = [c[0] for c in chain]
    bots = [c[1] for c in chain]
    pieces = [(bots[1], bots[0])] + [(bots[k + 2], tops[k]) for k in range(r - 2)] + [(tops[-1], tops[-2])]
    H = nx.MultiGraph()
    for lo, hi in pieces:
        if lo > hi:
            return None
        H.add_node(lo)
        H.add_edges_from((x, x + 1) for x in range(lo, hi))
    H.add_edges_from(chain)
    if any(d != 2 for _, d in H.degree()) or not nx.is_connected(H):
        return None
    if H.number_of_nodes() < 3:
        return None
    return sorted(H.nodes)


def best_chain(chords, L: int, max_chords: int = 5) -> int:
    best = 0
    chords = sorted(set(chords))
    for k in range(1, min(len(chords), max_chords) + 1):
        for sub in combinations(chords, k):
            for order in permutations(sub):
                cyc = chain_cycle(order, L)
                if cyc is not None:
                    best = max(best, len(cyc))
    return best

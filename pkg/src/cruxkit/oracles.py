"""Brute-force reference implementations for small graphs.

These are written independently of the production algorithms and are used
only as cross-checks (tests and the ``selftest`` command).  All of them are
exponential; keep ``n`` around 12 or below.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Sequence

from .graph import Graph


def crux_bruteforce(g: Graph, alpha) -> int:
    """Smallest ``|U|`` with ``e(U)/|U| >= alpha e(G)/n`` via a subset DP.

    ``e(mask) = e(mask - low) + |N(low) & mask|`` where ``low`` is the lowest
    vertex of ``mask``.
    """
    a = Fraction(repr(alpha)) if isinstance(alpha, float) else Fraction(alpha)
    n, e = g.n, g.num_edges
    nb = [0] * n
    for u, v in g.edges:
        nb[u] |= 1 << v
        nb[v] |= 1 << u
    edges_in = [0] * (1 << n)
    best = n
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        edges_in[mask] = edges_in[rest] + bin(nb[low] & rest).count("1")
        size = bin(mask).count("1")
        if size < best and Fraction(edges_in[mask], size) >= a * Fraction(e, n):
            best = size
    return best


def expander_bruteforce(g: Graph, eps: float, t: float) -> tuple[bool, tuple[int, ...] | None]:
    """Check ``|N(X)| >= rho(|X|)|X|`` for every ``X`` with ``t/2 <= |X| <= n/2``."""
    n = g.n
    nbrs = [set() for _ in range(n)]
    for u, v in g.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    for size in range(max(1, math.ceil(t / 2)), n // 2 + 1):
        if size < t / 5:
            continue
        need = eps / math.log(15 * size / t) ** 2 * size
        for X in combinations(range(n), size):
            xs = set(X)
            outside = set().union(*(nbrs[x] for x in X)) - xs
            if len(outside) < need - 1e-12:
                return False, X
    return True, None


def longest_cycle_bruteforce(g: Graph) -> int:
    """Length of a longest cycle (0 for forests) by DFS over simple paths.

    Each cycle is enumerated from its smallest vertex.
    """
    n = g.n
    nbrs = [[] for _ in range(n)]
    for u, v in g.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    best = 0
    on_path = [False] * n

    def extend(start: int, v: int, length: int) -> None:
        nonlocal best
        for w in nbrs[v]:
            if w == start and length >= 3:
                best = max(best, length)
            elif w > start and not on_path[w]:
                on_path[w] = True
                extend(start, w, length + 1)
                on_path[w] = False

    for s in range(n):
        on_path[s] = True
        extend(s, s, 1)
        on_path[s] = False
    return best


def _chain_cycle_size(chain: Sequence[tuple[int, int]]) -> int | None:
    """Size of the cycle traced by a chord chain on a path, or None if the
    chain does not interleave.  Restated from scratch: tops ``a``, bottoms
    ``b`` listed bottom-first."""
    r = len(chain)
    a = [c[0] for c in chain]
    b = [c[1] for c in chain]
    if any(bb - aa < 2 for aa, bb in chain):
        return None
    if r == 1:
        return b[0] - a[0] + 1
    if not (a[0] < b[1] <= b[0]):
        return None
    if any(not (a[k] < b[k + 1] <= a[k - 1]) for k in range(1, r - 1)):
        return None
    if a[r - 1] > a[r - 2]:
        return None
    pieces = [range(b[1], b[0] + 1)] + [range(b[k + 2], a[k] + 1) for k in range(r - 2)]
    pieces.append(range(a[r - 1], a[r - 2] + 1))
    verts = [x for p in pieces for x in p]
    if len(verts) != len(set(verts)):
        return None
    return len(verts)


def chord_chain_bruteforce(chords: Sequence[tuple[int, int]], max_subset: int = 6) -> int:
    """Best chain over every subset and ordering of ``chords`` (positions on a path)."""
    chords = sorted(set(chords))
    best = 0
    for k in range(1, min(len(chords), max_subset) + 1):
        for sub in combinations(chords, k):
            for order in permutations(sub):
                size = _chain_cycle_size(order)
                if size is not None:
                    best = max(best, size)
    return best


def separator_bruteforce(g: Graph, budget: int, proper: bool = False) -> tuple[int, int] | None:
    """``(|S|, max(|A|, |B|))`` of the best separator within ``budget`` by
    labelling every vertex A, B or S; None if there is none."""
    n = g.n
    best = None
    for labels in product((0, 1, 2), repeat=n):
        s = labels.count(2)
        if s > budget:
            continue
        na, nb = labels.count(0), labels.count(1)
        if 3 * na > 2 * n or 3 * nb > 2 * n or (proper and (na == 0 or nb == 0)):
            continue
        if any({labels[u], labels[v]} == {0, 1} for u, v in g.edges):
            continue
        key = (s, max(na, nb))
        if best is None or key < best:
            best = key
    return best


def separator_bruteforce_subsets(g: Graph, budget: int, proper: bool = False) -> tuple[int, int] | None:
    """Same answer as :func:`separator_bruteforce`, enumerating ``S`` and then
    every two-colouring of the components of ``G - S`` (fine up to ``n = 14``)."""
    n = g.n
    nbrs = [set() for _ in range(n)]
    for u, v in g.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    for k in range(0, min(budget, n) + 1):
        best = None
        for S in combinations(range(n), k):
            left = set(range(n)) - set(S)
            comps = []
            while left:
                stack = [left.pop()]
                comp = 1
                while stack:
                    v = stack.pop()
                    for w in nbrs[v] & left:
                        left.discard(w)
                        stack.append(w)
                        comp += 1
                comps.append(comp)
            for colours in product((0, 1), repeat=len(comps)):
                na = sum(c for c, col in zip(comps, colours) if col == 0)
                nb = n - k - na
                if 3 * na > 2 * n or 3 * nb > 2 * n or (proper and (na == 0 or nb == 0)):
                    continue
                if best is None or max(na, nb) < best:
                    best = max(na, nb)
        if best is not None:
            return k, best
    return None

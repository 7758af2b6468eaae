"""Embedded oracle suite behind ``cruxkit selftest``.

Small random graphs (``n <= 12``) are pushed through the production code and
the brute-force references in :mod:`cruxkit.oracles`; every row reports the
number of cases and disagreements.  Everything is seeded, so the table is
reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import generators as gen
from . import oracles
from .crux import crux_exact, edge_isoperimetry_check
from .cycles import chord_splice_cycle, dfs_forest, longest_cycle_kernel, posa_rotation_cycle
from .expander import ExpanderParams, verify_expander
from .percolation import dfs_with_unrevealed
from .rng import KeyedRandom
from .separators import find_balanced_separator

ALPHAS = (0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class CheckRow:
    check: str
    cases: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _random_graph(kr: KeyedRandom, lo: int, hi: int, trial: int, seed: int):
    n = lo + kr.randrange(hi - lo + 1)
    p = 0.2 + 0.6 * kr.random()
    return gen.gnp(n, p, seed, trial)


def _crux(seed: int, count: int) -> CheckRow:
    kr = KeyedRandom(seed, 1)
    bad = cases = 0
    for i in range(count):
        g = _random_graph(kr, 2, 10, i, seed)
        for a in ALPHAS:
            cases += 1
            bad += crux_exact(g, a).upper_bound != oracles.crux_bruteforce(g, a)
    return CheckRow("crux_exact_vs_subset_dp", cases, bad)


def _expander(seed: int, count: int) -> CheckRow:
    kr = KeyedRandom(seed, 2)
    bad = 0
    for i in range(count):
        g = _random_graph(kr, 4, 10, 100 + i, seed)
        eps, t = 0.5 + kr.random(), 1.0 + 2 * kr.random()
        rep = verify_expander(g, ExpanderParams(eps, t), mode="exhaustive")
        ok, _ = oracles.expander_bruteforce(g, eps, t)
        bad += (rep.verified == "exhaustive") != ok
    return CheckRow("expander_exhaustive_vs_enumeration", count, bad)


def _cycles(seed: int, count: int) -> list[CheckRow]:
    kr = KeyedRandom(seed, 3)
    over = kern = 0
    for i in range(count):
        g = _random_graph(kr, 3, 9, 200 + i, seed)
        best = oracles.longest_cycle_bruteforce(g)
        over += posa_rotation_cycle(g, seed=i).length > best
        kern += longest_cycle_kernel(g).length != best
    return [CheckRow("posa_never_exceeds_longest_cycle", count, over),
            CheckRow("kernel_exact_vs_longest_cycle", count, kern)]


def _splice(seed: int, count: int) -> CheckRow:
    kr = KeyedRandom(seed, 4)
    bad = 0
    for _ in range(count):
        L = 4 + kr.randrange(11)
        chords = set()
        for _ in range(1 + kr.randrange(5)):
            a = kr.randrange(L - 2)
            chords.add((a, a + 2 + kr.randrange(L - a - 2)))
        res = chord_splice_cycle(dfs_forest(gen.path(L)), sorted(chords))
        bad += res.length != oracles.chord_chain_bruteforce(sorted(chords))
    return CheckRow("chord_splice_vs_chain_enumeration", count, bad)


def _separators(seed: int, count: int) -> CheckRow:
    kr = KeyedRandom(seed, 5)
    bad = 0
    for i in range(count):
        g = _random_graph(kr, 3, 8, 300 + i, seed)
        budget = kr.randrange(4)
        sep = find_balanced_separator(g, budget, mode="exact", proper=False)
        ref = oracles.separator_bruteforce(g, budget)
        got = None if sep is None else (sep.size, sep.imbalance)
        bad += got != ref
    return CheckRow("separator_exact_vs_labelling", count, bad)


def _isoperimetry() -> CheckRow:
    cases = bad = 0
    for m in (1, 2, 3):
        for k in range(1, (1 << m) + 1):
            for U in combinations(range(1 << m), k):
                cases += 1
                boundary, bound = edge_isoperimetry_check(m, U)
                bad += boundary < bound - 1e-9
    return CheckRow("hypercube_edge_isoperimetry", cases, bad)


def _coupling(seed: int, count: int) -> CheckRow:
    hosts = [gen.projective_incidence(2), gen.hypercube(5), gen.complete(10)]
    bad = cases = 0
    for i in range(count):
        host = hosts[i % len(hosts)]
        cfg = gen.PercolationConfig((0.1, 0.5, 0.9)[i % 3], seed, i)
        r = dfs_with_unrevealed(host, cfg)
        cases += 1
        bad += bool(r.ancestor_violations()) or r.revealed_graph() != gen.sample_subgraph(host, cfg)
    return CheckRow("unrevealed_dfs_coupling", cases, bad)


def run_selftest(seed: int = 0, scale: int = 1) -> list[CheckRow]:
    rows = [_crux(seed, 25 * scale), _expander(seed, 15 * scale)]
    rows += _cycles(seed, 25 * scale)
    rows += [_splice(seed, 40 * scale), _separators(seed, 15 * scale), _isoperimetry(), _coupling(seed, 12 * scale)]
    return rows


def selftest_csv(rows: list[CheckRow]) -> list[str]:
    return ["check,cases,failures,status"] + [
        f"{r.check},{r.cases},{r.failures},{'pass' if r.passed else 'FAIL'}" for r in rows
    ]

from fractions import Fraction

from hypothesis import given, strategies as st

from conftest import graphs
from cruxkit import oracles
from cruxkit.selftest import run_selftest, selftest_csv
from reference import best_chain, best_separator, crux_value, is_expander, longest_cycle
from test_cycles import path_chords


@given(graphs(min_n=1, max_n=9), st.sampled_from([Fraction(3, 10), Fraction(1, 2), Fraction(9, 10)]))
def test_crux_oracle(g, alpha):
    if g.num_edges == 0:
        return
    assert oracles.crux_bruteforce(g, alpha) == crux_value(g, alpha)


@given(graphs(min_n=2, max_n=9), st.floats(0.2, 2.0), st.floats(1.0, 4.0))
def test_expander_oracle(g, eps, t):
    ok, witness = oracles.expander_bruteforce(g, eps, t)
    assert ok == is_expander(g, eps, t)
    assert (witness is None) == ok


@given(graphs(min_n=1, max_n=9))
def test_longest_cycle_oracle(g):
    assert oracles.longest_cycle_bruteforce(g) == longest_cycle(g)


@given(path_chords())
def test_chord_chain_oracle(case):
    L, chords = case
    assert oracles.chord_chain_bruteforce(chords) == best_chain(chords, L)


@given(graphs(min_n=3, max_n=8), st.integers(0, 3))
def test_separator_oracles(g, budget):
    ref = best_separator(g, budget)
    assert oracles.separator_bruteforce(g, budget) == ref
    assert oracles.separator_bruteforce_subsets(g, budget) == ref


def test_selftest_passes_and_is_seeded():
    rows = run_selftest(seed=5)
    assert all(r.passed for r in rows)
    assert {r.check for r in rows} >= {"unrevealed_dfs_coupling"}
    assert selftest_csv(rows) == selftest_csv(run_selftest(seed=5))

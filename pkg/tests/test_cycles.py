import math

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from cruxkit import generators as gen
from cruxkit.crux import crux_exact
from cruxkit.cycles import (
    InvalidCycle,
    chord_splice_cycle,
    stack_cycle_floor,
    cycle_via_crux_pipeline,
    dfs_forest,
    dfs_stack_cycle,
    greedy_min_degree_cycle,
    longest_cycle_kernel,
    posa_rotation_cycle,
    validate_cycle,
)
from cruxkit.errors import PreconditionError
from cruxkit.graph import Graph, average_degree
from reference import best_chain, is_cycle_of, longest_cycle, to_nx


def test_validator():
    c5 = gen.cycle(5)
    validate_cycle(c5, [0, 1, 2, 3, 4])
    for bad in ([0, 1], [0, 1, 2], [0, 1, 2, 3, 4, 0], [0, 2, 4, 1, 3]):
        with pytest.raises(InvalidCycle):
            validate_cycle(c5, bad)


# -- greedy ------------------------------------------------------------------


def test_greedy_examples():
    assert greedy_min_degree_cycle(gen.cycle(5)).length == 5
    assert greedy_min_degree_cycle(gen.complete(4)).length >= 4
    assert greedy_min_degree_cycle(gen.hypercube(3)).length >= 4
    assert not greedy_min_degree_cycle(gen.star(5)).found
    assert not greedy_min_degree_cycle(gen.path(6)).found


@given(graphs(min_n=3, max_n=12))
def test_greedy_guarantee(g):
    res = greedy_min_degree_cycle(g)
    has_cycle = g.num_edges > 0 and nx.cycle_basis(to_nx(g)) != []
    assert res.found == has_cycle
    if not res.found:
        return
    assert is_cycle_of(g, res.vertices)
    assert res.guarantee and res.length >= res.bound_claimed
    d = average_degree(g)
    if d > 2:
        # peeling keeps a subgraph of minimum degree at least d/2
        assert res.length >= math.ceil(d / 2) + 1


# -- rotation search ---------------------------------------------------------


def test_posa_examples():
    res = posa_rotation_cycle(gen.complete(4), target_t=3)
    assert res.length == 4 and res.meets_target
    pet = gen.petersen()
    res = posa_rotation_cycle(pet, target_t=4)
    assert res.length >= 5 and res.meets_target
    assert longest_cycle(pet) == 9
    assert res.length <= 9
    assert not posa_rotation_cycle(gen.star(5)).found


@given(graphs(min_n=3, max_n=9), st.integers(0, 1000))
def test_posa_never_exceeds_the_longest_cycle(g, seed):
    res = posa_rotation_cycle(g, seed=seed)
    best = longest_cycle(g)
    assert res.length <= best
    assert res.found == (best > 0)
    if res.found:
        assert is_cycle_of(g, res.vertices)


@given(graphs(min_n=3, max_n=9))
def test_kernel_search_is_exact(g):
    res = longest_cycle_kernel(g)
    assert res is not None
    assert res.length == longest_cycle(g)
    if res.found:
        assert is_cycle_of(g, res.vertices)


def test_kernel_gives_up_on_dense_graphs():
    assert longest_cycle_kernel(gen.complete(12), max_cyclomatic=10) is None


def test_kernel_on_sparse_subdivided_graph():
    # a subdivided K4 has a tiny kernel even though it has many vertices
    base = gen.complete(4)
    edges, nxt = [], 4
    for u, v in base.edges:
        chain = [u] + list(range(nxt, nxt + 20)) + [v]
        nxt += 20
        edges += list(zip(chain, chain[1:]))
    g = Graph(nxt, edges)
    res = longest_cycle_kernel(g)
    assert res.length == 4 * 21
    assert is_cycle_of(g, res.vertices)


# -- pipeline ----------------------------------------------------------------


def test_pipeline_complete_graph():
    res, rep = cycle_via_crux_pipeline(gen.complete(8), 0.5)
    assert res.length >= 4
    c = crux_exact(gen.complete(8), 0.5).upper_bound
    assert rep.crux_bound == pytest.approx(0.5 / 16000 * c)
    assert res.length >= rep.crux_bound
    assert rep.epsilon == pytest.approx(0.5 / 500)
    assert rep.C == 40


def test_pipeline_hypercube():
    res, rep = cycle_via_crux_pipeline(gen.hypercube(4), 0.5)
    assert res.length >= max(4, rep.crux_bound)
    assert is_cycle_of(gen.hypercube(4), res.vertices)


def test_pipeline_two_cliques():
    g = gen.disjoint_union(gen.complete(6), gen.complete(6))
    res, _ = cycle_via_crux_pipeline(g, 0.5)
    assert res.length >= 4
    side = {v // 6 for v in res.vertices}
    assert len(side) == 1


@given(graphs(min_n=4, max_n=10), st.sampled_from([0.3, 0.5, 0.7]))
def test_pipeline_bounds(g, alpha):
    if g.num_edges == 0:
        return
    res, rep = cycle_via_crux_pipeline(g, alpha)
    for v in (rep.crux_bound, rep.expander_bound_a, rep.expander_bound_b, rep.posa_t):
        assert v >= 0
    if res.found:
        assert is_cycle_of(g, res.vertices)
        assert res.length >= rep.crux_bound
    if rep.expansion_certified:
        assert res.length >= rep.expander_bound_a


# -- DFS forest and stack cycle ------------------------------------------------


@given(graphs(min_n=1, max_n=12))
def test_dfs_forest_matches_reference_traversal(g):
    f = dfs_forest(g)
    G = to_nx(g)
    expected = {}
    for comp_root in sorted(min(c) for c in nx.connected_components(G)):
        expected.update(nx.dfs_predecessors(G, comp_root))
    assert {v: p for v, p in enumerate(f.parent) if p >= 0} == expected
    assert sorted(f.roots) == sorted(min(c) for c in nx.connected_components(G))
    for v, p in enumerate(f.parent):
        if p < 0:
            assert f.depth[v] == 0
        else:
            assert f.depth[v] == f.depth[p] + 1
            assert g.has_edge(v, p)


@pytest.mark.parametrize("n", [3, 10, 50])
def test_dfs_stack_on_a_cycle(n):
    res = dfs_stack_cycle(gen.cycle(n), 1 / 500, 1)
    assert res.length == n


def test_dfs_stack_on_complete_graph():
    n = 200
    res = dfs_stack_cycle(gen.complete(n), 1 / 500, 1)
    floor = stack_cycle_floor(n, 1 / 500)
    assert floor == pytest.approx(1 / 500 * n / (1200 * math.log(n) ** 2))
    assert res.guarantee
    assert res.length >= math.ceil(floor)
    assert is_cycle_of(gen.complete(n), res.vertices)


def test_dfs_stack_on_bridged_cliques():
    a = gen.complete(8)
    g = Graph(16, list(a.edges) + [(u + 8, v + 8) for u, v in a.edges] + [(7, 8)])
    res = dfs_stack_cycle(g, 1 / 500, 1)
    assert res.found and is_cycle_of(g, res.vertices)
    assert not res.guarantee
    assert len({v // 8 for v in res.vertices}) == 1


@given(graphs(min_n=3, max_n=14), st.floats(0.0005, 0.5), st.floats(0.5, 4))
def test_dfs_stack_validity(g, eps, t):
    res = dfs_stack_cycle(g, eps, t)
    if res.found:
        assert is_cycle_of(g, res.vertices)
    if res.guarantee:
        assert res.length >= math.ceil(stack_cycle_floor(g.n, eps))


# -- chord splicing ------------------------------------------------------------


def test_single_chord_closes_the_path():
    f = dfs_forest(gen.path(10))
    res = chord_splice_cycle(f, [(0, 9)])
    assert res.length == 10


def test_two_overlapping_chords():
    # the splice v0..v3, v9..v5, v0 visits 4 + 5 = 9 vertices
    f = dfs_forest(gen.path(10))
    res = chord_splice_cycle(f, [(0, 5), (3, 9)])
    assert res.length == 9
    assert sorted(res.vertices) == [0, 1, 2, 3, 5, 6, 7, 8, 9]


def test_nested_chords_use_the_widest_span():
    f = dfs_forest(gen.path(12))
    res = chord_splice_cycle(f, [(0, 11), (2, 9), (4, 7)])
    assert res.length == 12


def test_chords_must_be_vertical():
    g = Graph(4, [(0, 1), (0, 2), (0, 3)])
    f = dfs_forest(g)
    with pytest.raises(PreconditionError):
        chord_splice_cycle(f, [(1, 2)])


def test_no_usable_chord():
    f = dfs_forest(gen.path(5))
    assert not chord_splice_cycle(f, []).found


@st.composite
def path_chords(draw):
    L = draw(st.integers(4, 14))
    chords = draw(st.sets(
        st.tuples(st.integers(0, L - 1), st.integers(0, L - 1))
        .map(lambda c: (min(c), max(c)))
        .filter(lambda c: c[1] - c[0] >= 2),
        min_size=1, max_size=5,
    ))
    return L, sorted(chords)


@given(path_chords())
def test_splice_matches_chain_enumeration(case):
    L, chords = case
    f = dfs_forest(gen.path(L))
    res = chord_splice_cycle(f, chords)
    g = Graph(L, set(gen.path(L).edges) | set(chords))
    assert res.length == best_chain(chords, L)
    assert is_cycle_of(g, res.vertices)
    assert res.length <= longest_cycle(g)

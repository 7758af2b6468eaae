import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cruxkit import generators as gen
from cruxkit import rng
from cruxkit.errors import PreconditionError
from cruxkit.generators import PercolationConfig
from reference import to_nx


def test_splitmix_reference_outputs():
    # the SplitMix64 generator seeded with 0 starts with these three words
    state = 0
    expected = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    for want in expected:
        state = (state + rng.GOLDEN) & rng.MASK64
        assert rng.mix64(state) == want


def test_vectorised_uniforms_match_scalar():
    u = rng.uniforms(42, 3, 50)
    assert [float(x) for x in u] == [rng.uniform(42, 3, i) for i in range(50)]
    assert np.all((u >= 0) & (u < 1))


def test_keyed_streams_differ():
    assert rng.word(1, 0, 0) != rng.word(1, 1, 0)
    assert rng.word(1, 0, 0) != rng.word(2, 0, 0)


@pytest.mark.parametrize("m", [1, 3, 10])
def test_hypercube_counts(m):
    g = gen.hypercube(m)
    assert g.n == 2**m
    assert g.num_edges == m * 2 ** (m - 1)
    assert set(g.degrees) == {m}
    for u, v in g.edges:
        assert bin(u ^ v).count("1") == 1


def test_hypercube_one_is_k2():
    assert gen.hypercube(1) == gen.complete(2)


def test_hypercube_guard():
    with pytest.raises(PreconditionError):
        gen.hypercube(0)
    with pytest.raises(PreconditionError):
        gen.hypercube(25)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_hamming_r2_is_the_hypercube(m):
    assert gen.hamming(m, 2) == gen.hypercube(m)


def test_hamming_examples():
    g = gen.hamming(2, 3)
    assert (g.n, g.num_edges) == (9, 18)
    assert set(g.degrees) == {4}
    assert gen.hamming(1, 5) == gen.complete(5)
    assert nx.is_isomorphic(to_nx(gen.hamming(3, 3)), nx.cartesian_product(nx.complete_graph(3), nx.cartesian_product(nx.complete_graph(3), nx.complete_graph(3))))


def _has_four_cycle(g) -> bool:
    A = nx.to_numpy_array(to_nx(g), dtype=np.int64)
    common = A @ A
    np.fill_diagonal(common, 0)
    return bool((common >= 2).any())


def test_heawood():
    g = gen.projective_incidence(2)
    assert (g.n, g.num_edges) == (14, 21)
    assert set(g.degrees) == {3}
    assert not _has_four_cycle(g)
    assert nx.is_isomorphic(to_nx(g), nx.heawood_graph())


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
def test_incidence_graphs(q):
    g = gen.projective_incidence(q)
    assert g.n == 2 * (q * q + q + 1)
    assert set(g.degrees) == {q + 1}
    assert nx.is_bipartite(to_nx(g))
    assert not _has_four_cycle(g)
    assert gen.is_c4_free(g)


def test_incidence_needs_prime():
    with pytest.raises(PreconditionError):
        gen.projective_incidence(4)


def test_c4_detector_finds_squares():
    assert not gen.is_c4_free(gen.hypercube(3))
    assert not gen.is_c4_free(gen.complete(4))
    assert gen.is_c4_free(gen.petersen())


def test_sampling_extremes():
    q = gen.hypercube(6)
    assert gen.sample_subgraph(q, PercolationConfig(0.0, 5)).num_edges == 0
    assert gen.sample_subgraph(q, PercolationConfig(1.0, 5)) == q


def test_sampling_q10_binomial():
    q = gen.hypercube(10)
    cfg = PercolationConfig(0.5, 20240917, 0)
    a = gen.sample_subgraph(q, cfg)
    sigma = math.sqrt(5120 * 0.25)
    assert abs(a.num_edges - 2560) <= 4 * sigma
    assert gen.sample_subgraph(q, cfg) == a


def test_bad_probability():
    with pytest.raises(PreconditionError):
        PercolationConfig(1.5)


@given(st.integers(0, 2**64 - 1), st.integers(0, 1000), st.floats(0, 1))
def test_sampling_is_a_spanning_subgraph(seed, trial, p):
    host = gen.hypercube(4)
    cfg = PercolationConfig(p, seed, trial)
    a = gen.sample_subgraph(host, cfg)
    assert a.n == host.n
    assert set(a.edges) <= set(host.edges)
    assert a == gen.sample_subgraph(host, cfg)
    # decisions are keyed by edge index, so they match the raw stream
    kept = {host.edges[i] for i in range(host.num_edges) if rng.uniform(seed, trial, i) < p}
    assert set(a.edges) == kept


@given(st.integers(0, 2**32), st.floats(0.01, 0.99), st.floats(0, 1))
def test_two_round_coupling(seed, theta, p):
    host = gen.complete(7)
    low, high = gen.two_round_split(host, PercolationConfig(p, seed), theta)
    assert set(low.edges) <= set(high.edges)
    assert high == gen.sample_subgraph(host, PercolationConfig(p, seed))


def test_two_round_degenerate_and_marginal():
    host = gen.complete(4)
    low, high = gen.two_round_split(host, PercolationConfig(1.0, 3), 1e-12)
    assert low == high
    _, high = gen.two_round_split(host, PercolationConfig(1.0, 3), 0.5)
    assert high == host
    trials, theta, p = 10_000, 0.3, 0.8
    counts = np.zeros(host.num_edges)
    index = host.edge_index
    for t in range(trials):
        low, _ = gen.two_round_split(host, PercolationConfig(p, 11, t), theta)
        for e in low.edges:
            counts[index[e]] += 1
    mean = (1 - theta) * p
    sigma = math.sqrt(trials * mean * (1 - mean))
    assert np.all(np.abs(counts - trials * mean) <= 4 * sigma)


def test_host_spec():
    assert gen.HostSpec("hamming", {"m": 2, "r": 3}).build() == gen.hamming(2, 3)
    with pytest.raises(PreconditionError):
        gen.HostSpec("hamming", {"m": 2})
    with pytest.raises(PreconditionError):
        gen.HostSpec("moebius", {})

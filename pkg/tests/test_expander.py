import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from cruxkit import generators as gen
from cruxkit.errors import PreconditionError
from cruxkit.expander import (
    ExpanderParams,
    ExtractionParams,
    connect_avoiding,
    diameter_bound,
    extract_expander,
    rho,
    verify_expander,
)
from cruxkit.graph import Graph, average_degree, external_neighbourhood
from reference import is_expander


def test_rho_examples():
    assert rho(1, 0.01, 10) == 0
    assert rho(2, 0.01, 10) == pytest.approx(0.01 / math.log(3) ** 2, rel=1e-12)
    assert rho(2, 0.01, 10) == pytest.approx(8.286e-3, rel=1e-3)
    assert rho(100, 0.01, 10) == pytest.approx(3.983e-4, rel=1e-3)


def test_rho_shape_on_log_grid():
    eps, t = 0.05, 20.0
    xs = np.geomspace(t / 5, 1e6, 400)
    r = np.array([rho(x, eps, t) for x in xs])
    xr = xs * r
    # x rho(x) only increases once x >= e^2 t / 15; below that it decreases
    knee = math.e**2 * t / 15
    tail = xs >= knee
    assert np.all(np.diff(xr[tail]) >= -1e-15)
    assert np.all(np.diff(xr[~tail]) <= 1e-15)
    # rho itself is non-increasing on [t/5, inf)
    assert np.all(np.diff(r) <= 1e-15)


def test_verify_examples():
    rep = verify_expander(gen.complete(6), ExpanderParams(0.1, 2), mode="exhaustive")
    assert rep.verified == "exhaustive"
    two = gen.disjoint_union(gen.complete(3), gen.complete(3))
    rep = verify_expander(two, ExpanderParams(0.1, 2), mode="exhaustive")
    assert rep.verified == "failed"
    assert rep.witness.sorted() in ([0, 1, 2], [3, 4, 5])
    assert rep.witness_boundary == 0
    rep = verify_expander(gen.hypercube(4), ExpanderParams(0.02, 4), mode="exhaustive")
    assert rep.verified == "exhaustive"


def test_exhaustive_limit():
    with pytest.raises(PreconditionError):
        verify_expander(gen.hypercube(5), ExpanderParams(0.1, 2), mode="exhaustive")


def test_sampled_mode_finds_the_obvious_cut():
    g = gen.disjoint_union(gen.complete(15), gen.complete(15))
    rep = verify_expander(g, ExpanderParams(0.1, 2), mode="sampled", k=50, seed=3)
    assert rep.verified == "failed"
    params = ExpanderParams(0.1, 2)
    x = len(rep.witness)
    assert params.t / 2 <= x <= g.n / 2
    assert len(external_neighbourhood(g, rep.witness)) < params.rho(x) * x
    assert verify_expander(gen.complete(30), params, mode="sampled", k=50).verified == "sampled"


@given(graphs(min_n=2, max_n=9), st.floats(0.2, 2.0), st.floats(1.0, 4.0))
def test_exhaustive_matches_reference(g, eps, t):
    rep = verify_expander(g, ExpanderParams(eps, t), mode="exhaustive")
    assert (rep.verified == "exhaustive") == is_expander(g, eps, t)
    if rep.verified == "failed":
        x = len(rep.witness)
        assert t / 2 <= x <= g.n / 2
        assert len(external_neighbourhood(g, rep.witness)) < rho(x, eps, t) * x


def test_extraction_parameter_guards():
    with pytest.raises(PreconditionError):
        ExtractionParams(30, 0.001)
    with pytest.raises(PreconditionError):
        ExtractionParams(40, 0.01)
    assert ExtractionParams(40, 1 / 400).delta == pytest.approx(0.1 / math.log(3))


def _check_contract(g, rep, C=40.0, eps=1 / 400):
    delta = ExtractionParams(C, eps).delta
    H, _ = g.induced(rep.subgraph)
    assert average_degree(H) >= (1 - delta) * average_degree(g) - 1e-12
    assert 2 * H.min_degree >= average_degree(H)
    return H


def test_extract_complete_graph_is_itself():
    g = gen.complete(9)
    rep = extract_expander(g, 1 / 400, 2)
    assert rep.subgraph.sorted() == list(range(9))
    assert rep.verified == "exhaustive"


def test_extract_imbalanced_bipartite():
    g = gen.complete_bipartite(64, 4)
    rep = extract_expander(g, 1 / 400, 2, seed=1)
    H = _check_contract(g, rep)
    assert rep.verified in ("exhaustive", "sampled")
    if H.n <= 20:
        assert rep.verified == "exhaustive"


def test_extract_disjoint_cliques_lands_in_the_big_one():
    g = gen.disjoint_union(gen.complete(8), gen.complete(3))
    rep = extract_expander(g, 1 / 400, 2)
    _check_contract(g, rep)
    assert set(rep.subgraph) <= set(range(8))


@given(graphs(min_n=3, max_n=12))
def test_extraction_contract_property(g):
    if g.num_edges == 0:
        return
    rep = extract_expander(g, 1 / 400, 2)
    H = _check_contract(g, rep)
    if rep.verified == "exhaustive":
        assert is_expander(H, 1 / 400, 2)


def test_connector_examples():
    q4 = gen.hypercube(4)
    res = connect_avoiding(q4, [0], [15])
    assert res.length == 4
    res = connect_avoiding(gen.cycle(8), [0], [4], w=[1, 2])
    assert res.path == (0, 7, 6, 5, 4)
    res = connect_avoiding(gen.cycle(8), [0, 1], [1, 5])
    assert res.length == 0
    res = connect_avoiding(q4, [0], [15], params=ExpanderParams(0.1, 4))
    assert not res.hypothesis_met


def test_connector_disconnected():
    res = connect_avoiding(gen.path(5), [0], [4], w=[2])
    assert not res.connected


@given(graphs(min_n=2, max_n=10), st.data())
def test_connector_path_is_valid(g, data):
    x1 = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    x2 = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    w = data.draw(st.sets(st.integers(0, g.n - 1)))
    res = connect_avoiding(g, x1, x2, w)
    if res.path is None:
        return
    path = res.path
    assert path[0] in x1 and path[-1] in x2
    assert not (set(path[1:-1]) & w)
    assert all(g.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1))
    assert len(set(path)) == len(path)


def test_diameter_bound_formula():
    assert diameter_bound(1000, 0.1, 10) == pytest.approx(2 / 0.1 * math.log(1500) ** 3)


def test_connector_respects_diameter_bound_on_expander():
    g = gen.hypercube(4)
    params = ExpanderParams(0.02, 4)
    assert verify_expander(g, params, mode="exhaustive").verified == "exhaustive"
    res = connect_avoiding(g, [0, 1], [14, 15], params=params, verified=True)
    assert res.within_bound


def test_report_serialises():
    rep = verify_expander(Graph(4, [(0, 1), (2, 3)]), ExpanderParams(0.5, 2))
    d = rep.to_dict()
    assert d["verified"] == "failed"

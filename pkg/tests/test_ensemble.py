import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import integrate

from regspec.ensemble import (
    RegularGraph,
    SamplingError,
    WeightSpec,
    assign_weights,
    count_cycles,
    dumps_graph,
    loads_graph,
    mckay_cycle_limit,
    sample_regular_graph,
    split_seed,
    weight_moments,
)

from oracles import cycles_by_subsets

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_k4_is_the_only_cubic_graph_on_four_vertices():
    g = sample_regular_graph(4, 3, seed=5)
    assert g.edges.tolist() == [list(e) for e in K4_EDGES]


@pytest.mark.parametrize("seed", range(5))
def test_sampled_graphs_are_simple_and_regular(seed):
    g = sample_regular_graph(200, 4, seed)
    assert g.n_edges == 400
    assert g.is_simple_regular()
    assert (g.degrees() == 4).all()


def test_sampler_errors():
    with pytest.raises(ValueError, match="parity"):
        sample_regular_graph(5, 3, 0)
    with pytest.raises(ValueError):
        sample_regular_graph(4, 4, 0)
    with pytest.raises(ValueError):
        sample_regular_graph(4, 0, 0)
    with pytest.raises(SamplingError, match="attempts"):
        sample_regular_graph(50, 8, 0, max_rejections=1)


def test_seed_determinism():
    a = sample_regular_graph(60, 3, 42)
    b = sample_regular_graph(60, 3, 42)
    c = sample_regular_graph(60, 3, 43)
    assert a.same_as(b) and not a.same_as(c)
    spec = WeightSpec.parse("gaussian:1")
    assert np.array_equal(assign_weights(a, spec, 9).weights, assign_weights(a, spec, 9).weights)
    s1, s2 = split_seed(7, 2), split_seed(7, 2)
    assert sample_regular_graph(30, 3, s1[1]).same_as(sample_regular_graph(30, 3, s2[1]))


def test_pairing_model_is_roughly_uniform():
    # 3-regular graphs on 6 vertices: K_{3,3} (10 labelings) and the prism (60 labelings)
    bipartite = 0
    trials = 1400
    for s in range(trials):
        g = sample_regular_graph(6, 3, s)
        bipartite += count_cycles(g, 3)[3] == 0
    p = 10 / 70
    se = math.sqrt(p * (1 - p) / trials)
    assert abs(bipartite / trials - p) < 5 * se


def test_cycle_counts_k4():
    g = RegularGraph(4, 3, np.array(K4_EDGES))
    assert count_cycles(g, 4) == {3: 4, 4: 3}
    assert [cycles_by_subsets(4, K4_EDGES, i) for i in (3, 4)] == [4, 3]


def test_cycle_counts_match_subset_oracle():
    g = sample_regular_graph(10, 3, 3)
    edges = g.edges.tolist()
    counts = count_cycles(g, 7)
    for i in range(3, 8):
        assert counts[i] == cycles_by_subsets(10, edges, i)


def test_cycle_census_is_additive_over_disjoint_union():
    a = sample_regular_graph(12, 3, 1)
    b = sample_regular_graph(14, 3, 2)
    union = RegularGraph(26, 3, np.vstack([a.edges, b.edges + 12]))
    ca, cb, cu = (count_cycles(g, 6) for g in (a, b, union))
    assert cu == {i: ca[i] + cb[i] for i in cu}


def test_long_cycle_has_no_short_cycles():
    n = 12
    ring = RegularGraph(n, 2, np.array([(i, (i + 1) % n) for i in range(n)]))
    assert count_cycles(ring, 10) == {i: 0 for i in range(3, 11)}
    assert count_cycles(RegularGraph(6, 2, np.array([(i, (i + 1) % 6) for i in range(6)])), 6)[6] == 1


def test_cycle_cap():
    with pytest.raises(ValueError):
        count_cycles(sample_regular_graph(10, 3, 0), 11)


def test_mckay_limits():
    assert [mckay_cycle_limit(3, i) for i in (3, 4, 5)] == [F(4, 3), F(2), F(16, 5)]


def test_constant_weights_reproduce_graph():
    g = sample_regular_graph(20, 3, 0)
    wg = assign_weights(g, WeightSpec.parse("constant"), 1)
    assert (wg.weights == 1).all()
    assert np.array_equal(wg.matrix(), g.adjacency_matrix())
    m = wg.matrix()
    assert np.array_equal(m, m.T) and not np.diag(m).any()


def test_rademacher_weights():
    g = sample_regular_graph(1000, 4, 0)
    w = assign_weights(g, WeightSpec.parse("rademacher"), 2).weights
    assert set(np.unique(w)) == {-1.0, 1.0}
    assert abs(w.mean()) < 5 / math.sqrt(len(w))


def test_semicircle_sampler_second_moment():
    rng = np.random.Generator(np.random.PCG64(0))
    x = WeightSpec.parse("semicircle:0.25").sample(rng, 20_000)
    assert np.abs(x).max() <= 1.0
    se = (x**2).std() / math.sqrt(len(x))
    assert abs((x**2).mean() - 0.25) < 3 * se


@pytest.mark.parametrize("spec, k, expected", [
    ("semicircle:1/4", 8, F(7, 128)),
    ("rademacher", 6, F(1)),
    ("gaussian:1/4", 4, F(3, 16)),
    ("uniform:2", 4, F(16, 5)),
    ("constant", 5, F(1)),
    ("gaussian:1", 3, F(0)),
    ("semicircle:1", 4, F(2)),
])
def test_weight_moments(spec, k, expected):
    assert weight_moments(WeightSpec.parse(spec), k) == expected


def test_gaussian_moment_by_quadrature():
    var = 0.25
    val, _ = integrate.quad(lambda x: x**4 * math.exp(-x * x / (2 * var)) / math.sqrt(2 * math.pi * var),
                            -np.inf, np.inf)
    assert abs(val - 3 / 16) < 1e-12


@pytest.mark.parametrize("text", ["constant", "rademacher", "semicircle:1/4", "gaussian:0.5", "uniform:1"])
def test_weight_moments_match_samples(text):
    spec = WeightSpec.parse(text)
    rng = np.random.Generator(np.random.PCG64(11))
    x = spec.sample(rng, 100_000)
    for k in range(1, 7):
        xk = x**k
        se = xk.std(ddof=1) / math.sqrt(len(x))
        exact = float(weight_moments(spec, k))
        assert abs(xk.mean() - exact) <= max(5 * se, 1e-12), (k, xk.mean(), exact)


def test_weight_spec_parse_and_errors():
    assert WeightSpec.parse("semicircle").param == F(1, 4)
    assert str(WeightSpec.parse("semicircle:0.25")) == "semicircle:1/4"
    with pytest.raises(ValueError):
        WeightSpec.parse("cauchy")
    with pytest.raises(ValueError):
        WeightSpec("gaussian", F(-1))


def test_edge_list_round_trip():
    g = sample_regular_graph(16, 3, 4)
    spec = WeightSpec.parse("gaussian:1")
    wg = assign_weights(g, spec, 5)
    text = dumps_graph(wg, seed=4, weight_spec=spec)
    assert text.splitlines()[0].startswith("# {")
    back, header = loads_graph(text)
    assert header == {"N": 16, "d": 3, "seed": 4, "weight_spec": "gaussian:1"}
    assert back.base.same_as(g) and np.array_equal(back.weights, wg.weights)
    plain, _ = loads_graph(dumps_graph(g))
    assert plain.same_as(g)

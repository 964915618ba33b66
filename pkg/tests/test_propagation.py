import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wlpa.graph import Graph
from wlpa.metrics import modularity
from wlpa.propagation import (
    FOUR_PASS,
    LPA,
    WLPA_LEB,
    LpaConfig,
    detect,
    lpa,
    most_frequent_label,
    rank_neighbors,
    restricted_neighbor_set,
    stop_criterion,
    wlpa_leb,
)

import oracles
from conftest import PATH3, TWO_TRIANGLES, make, random_graph

RUNNERS = [lpa, wlpa_leb]


@pytest.mark.parametrize(
    "weights, weighted, expected",
    [
        ([1, 1, 1, 1], False, 2),
        ([1, 1, 1], False, 2),
        ([1], False, 1),
        ([], False, 0),
        ([1, 1, 1, 7], True, 3),
        ([9, 1], True, 1),  # lightest prefix already exceeds half: keep one edge
        ([1, 1, 2], True, 2),
    ],
)
def test_restricted_neighbor_set(weights, weighted, expected):
    assert restricted_neighbor_set(weights, weighted) == expected


def test_most_frequent_label_majority():
    assert most_frequent_label(["A", "A", "B"]) == "A"


def test_most_frequent_label_weighted():
    assert most_frequent_label(["A", "B"], weights=[5, 2]) == "A"
    assert most_frequent_label(["A", "B", "B"], weights=[5, 2, 2]) == "A"


def test_most_frequent_label_empty_keeps_current():
    assert most_frequent_label([], current=7) == 7


def test_most_frequent_label_tie_is_uniform():
    rng = np.random.default_rng(0)
    hits = sum(most_frequent_label(["A", "B"], rng=rng) == "A" for _ in range(10_000))
    assert abs(hits / 10_000 - 0.5) <= 0.05


def test_stop_criterion_examples():
    g = make(TWO_TRIANGLES)
    assert stop_criterion(g, [0, 0, 0, 1, 1, 1])
    p = make(PATH3)
    assert not stop_criterion(p, [5, 5, 9])
    assert stop_criterion(p, [4, 4, 4])
    # an isolated node is always satisfied
    iso = Graph(3, [0], [1])
    assert stop_criterion(iso, [1, 1, 2])


def test_stop_criterion_weighted():
    # node 1 sees label A (weight 1) and label B (weight 3): a tie by count only
    g = Graph.from_edges([(0, 1, 1.0), (1, 2, 3.0), (0, 3, 5.0), (2, 4, 3.0), (2, 5, 3.0)])
    labels = ["A", "A", "B", "A", "B", "B"]
    assert stop_criterion(g, labels, weighted=False)
    assert not stop_criterion(g, labels, weighted=True)


def test_stop_criterion_rejects_wrong_length():
    with pytest.raises(ValueError):
        stop_criterion(make(PATH3), [0, 0])


@pytest.mark.parametrize("runner", RUNNERS)
def test_two_triangles(backend, runner):
    g = make(TWO_TRIANGLES)
    for seed in range(10):
        res = runner(g, LpaConfig(algorithm=LPA if runner is lpa else WLPA_LEB, seed=seed), backend=backend)
        assert res.converged
        assert res.partition.community_count == 2
        assert modularity(g, res.partition) == pytest.approx(0.5)


@pytest.mark.parametrize("runner", RUNNERS)
def test_single_node_and_empty(runner):
    one = Graph(1, [], [])
    res = runner(one)
    assert res.partition.labels.tolist() == [0] and res.converged
    empty = Graph(0, [], [])
    assert runner(empty).partition.n == 0


@pytest.mark.parametrize("algo", [LPA, WLPA_LEB])
def test_deterministic_given_seed(backend, karate, algo):
    g, _ = karate
    cfg = LpaConfig(algorithm=algo, seed=42)
    a = detect(g, cfg, backend=backend)
    b = detect(g, cfg, backend=backend)
    assert np.array_equal(a.partition.labels, b.partition.labels)
    assert a.passes == b.passes


@pytest.mark.parametrize("algo", [LPA, WLPA_LEB])
def test_backends_give_identical_partitions(karate, algo):
    from wlpa import _backend

    if not _backend.compiled_available():
        pytest.skip("compiled kernels not built")
    g, _ = karate
    for seed in range(20):
        cfg = LpaConfig(algorithm=algo, seed=seed)
        a = detect(g, cfg, backend="python")
        b = detect(g, cfg, backend="compiled")
        assert np.array_equal(a.partition.labels, b.partition.labels)
        assert a.passes == b.passes


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from([LPA, WLPA_LEB]), st.booleans())
def test_invariants_on_random_graphs(seed, algo, weighted):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 40))
    edges = random_graph(rng, n, float(rng.uniform(0.02, 0.4)))
    w = rng.uniform(0.1, 5.0, len(edges)) if weighted else None
    g = Graph.from_edges([(u, v, float(x)) for (u, v), x in zip(edges, w)] if weighted else edges, n=n)
    cfg = LpaConfig(algorithm=algo, seed=seed, max_passes=20)
    res = detect(g, cfg)
    labels = res.partition.labels
    assert 1 <= res.passes <= cfg.max_passes
    # labels are copied, never invented
    assert set(labels.tolist()) <= set(range(n))
    if res.converged:
        assert stop_criterion(g, labels, weighted=g.is_weighted)
    # communities never join different connected components
    comp = oracles.union_find_components(n, edges)
    for c in res.partition.communities():
        assert len({comp[v] for v in c}) == 1
    # isolated nodes stay singletons
    for v in np.flatnonzero(g.degree == 0):
        assert labels[v] == v


def test_uniform_scores_keep_id_order_and_half_degree():
    # a cycle: every edge has the same depth-2 betweenness
    n = 9
    g = make([(i, (i + 1) % n) for i in range(n)])
    r = rank_neighbors(g, 2)
    assert np.array_equal(r.nbr, g.nbr)
    assert np.array_equal(r.limit, (g.degree + 1) // 2)


def test_ranking_reuse_matches_fresh(karate):
    g, _ = karate
    r = rank_neighbors(g, 2)
    cfg = LpaConfig(seed=3)
    assert np.array_equal(wlpa_leb(g, cfg, ranking=r).partition.labels, wlpa_leb(g, cfg).partition.labels)
    with pytest.raises(ValueError):
        wlpa_leb(g, LpaConfig(weighted=True), ranking=r)


def test_pass_cap_reported(karate):
    g, _ = karate
    res = wlpa_leb(g, FOUR_PASS)
    assert res.passes <= 4
    res = lpa(g, LpaConfig(algorithm=LPA, max_passes=1, seed=1))
    assert res.passes == 1
    assert res.converged == stop_criterion(g, res.partition.labels)


@pytest.mark.parametrize("bad", [dict(max_passes=0), dict(depth=0), dict(threads=0), dict(algorithm="x")])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        LpaConfig(**bad)


def test_parallel_mode_reports_truthfully(karate):
    from wlpa import _backend

    if not _backend.compiled_available():
        pytest.skip("compiled kernels not built")
    g, _ = karate
    for seed in range(10):
        res = wlpa_leb(g, LpaConfig(seed=seed, threads=4), backend="compiled")
        if res.converged:
            assert stop_criterion(g, res.partition.labels)

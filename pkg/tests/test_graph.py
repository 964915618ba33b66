import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wlpa.graph import (
    Graph,
    GraphFormatError,
    Partition,
    PartitionMismatchError,
    load_edge_list,
    load_partition,
    loads_edge_list,
    neighbors,
    save_edge_list,
    save_partition,
)

from conftest import PATH3, TRIANGLE, make


def test_karate_counts(karate):
    g, _ = karate
    assert (g.n, g.m) == (34, 78)
    assert g.degree.sum() == 2 * g.m
    assert not g.is_weighted


def test_empty_input():
    g = loads_edge_list("")
    assert (g.n, g.m) == (0, 0)


def test_comments_and_blank_lines():
    g = loads_edge_list("# header\n\n  # indented comment\na b\n")
    assert (g.n, g.m) == (2, 1)


def test_duplicate_collapsed_and_self_loop_dropped():
    g = loads_edge_list("0 1\n1 0\n2 2\n")
    assert (g.n, g.m) == (3, 1)
    assert g.report.self_loops_dropped == 1
    assert g.report.duplicates_merged == 1
    # both orientations of the same pair are summed
    assert g.weight.tolist() == [2.0]


def test_unweighted_load_ignores_weights():
    g = loads_edge_list("a b 3.5\nb a 2\n", weighted=False)
    assert g.weight.tolist() == [1.0]


def test_crlf_and_weights():
    g = loads_edge_list("a b 0.5\r\nb c 2\r\n")
    assert g.m == 2 and g.is_weighted
    assert g.strength.tolist() == [0.5, 2.5, 2.0]
    assert g.strength.sum() == pytest.approx(2 * g.total_weight)


def test_dense_ids_follow_first_appearance():
    g = loads_edge_list("z y\nx z\n")
    assert g.node_labels == ("z", "y", "x")
    assert g.index_of("x") == 2


@pytest.mark.parametrize(
    "text, lineno",
    [("a b\nc\n", 2), ("a b x\n", 1), ("# c\na b c d\n", 2)],
)
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(GraphFormatError) as err:
        loads_edge_list(text)
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)


@pytest.mark.parametrize("w", ["0", "-1", "nan"])
def test_non_positive_weight_rejected(w):
    with pytest.raises(GraphFormatError):
        loads_edge_list(f"a b {w}\n")


def test_neighbors_triangle():
    g = make(TRIANGLE)
    assert neighbors(g, 0) == [(1, 1.0, 0), (2, 1.0, 1)]


def test_neighbors_isolated_and_path():
    g = make(PATH3 + [], n=4)
    assert neighbors(g, 3) == []
    assert [v for v, _, _ in neighbors(g, 1)] == [0, 2]
    with pytest.raises(IndexError):
        neighbors(g, 4)


def test_graph_rejects_unnormalized_input():
    with pytest.raises(ValueError):
        Graph(2, [0], [0])
    with pytest.raises(ValueError):
        Graph(2, [0, 1], [1, 0])
    with pytest.raises(ValueError):
        Graph(2, [0], [1], [0.0])


def test_graph_arrays_are_read_only():
    g = make(TRIANGLE)
    with pytest.raises(ValueError):
        g.weight[0] = 3.0


@st.composite
def edge_lists(draw):
    n = draw(st.integers(1, 12))
    pairs = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.sampled_from([1.0, 0.5, 2.0, 3.25])),
            max_size=40,
        )
    )
    return pairs


@settings(max_examples=100, deadline=None)
@given(edge_lists())
def test_load_invariants_and_idempotence(pairs):
    text = "".join(f"n{u} n{v} {w}\n" for u, v, w in pairs)
    g = loads_edge_list(text)
    assert g.degree.sum() == 2 * g.m
    assert g.strength.sum() == pytest.approx(2 * g.total_weight)
    assert len(set(g.node_labels)) == g.n
    assert np.all(g.src < g.dst)
    # adjacency is symmetric with shared edge ids
    for u in range(g.n):
        for v, w, e in neighbors(g, u):
            assert (u, w, e) in neighbors(g, v)
    buf = io.StringIO()
    save_edge_list(g, buf)
    buf.seek(0)
    again = load_edge_list(buf)
    assert again == g


def test_saved_graph_reloads_identically(karate):
    g, _ = karate
    buf = io.StringIO()
    save_edge_list(g, buf)
    buf.seek(0)
    assert load_edge_list(buf) == g


def test_partition_round_trip(tmp_path, karate):
    g, truth = karate
    path = tmp_path / "p.txt"
    p = Partition(np.array([7 if x else 3 for x in truth.labels]), g.node_labels)
    save_partition(p, path)
    lines = path.read_text().splitlines()
    assert len(lines) == 34
    back = load_partition(path, g)
    assert back.same_as(p)


def test_partition_missing_node_is_named(tmp_path):
    g = make(TRIANGLE)
    path = tmp_path / "p.txt"
    path.write_text("0 a\n1 a\n")
    with pytest.raises(PartitionMismatchError, match="'2'"):
        load_partition(path, g)


def test_partition_unknown_node(tmp_path):
    g = make(TRIANGLE)
    path = tmp_path / "p.txt"
    path.write_text("0 a\n1 a\n2 b\n9 b\n")
    with pytest.raises(PartitionMismatchError, match="'9'"):
        load_partition(path, g)


def test_partition_degree_tallies(karate):
    g, truth = karate
    d_in, d_out = truth.internal_external_degree(g)
    assert np.array_equal(d_in + d_out, g.degree)


def test_canonical_relabeling():
    p = Partition([5, 5, 2, 9, 2])
    assert p.canonical().labels.tolist() == [0, 0, 1, 2, 1]
    assert p.community_count == 3
    assert p.communities() == [[0, 1], [2, 4], [3]]

import pytest
from hypothesis import given, settings

from ckdyn import corpus
from ckdyn.errors import DegenerateGraphError, GraphValidationError
from ckdyn.graph import (
    Path,
    adjacency_matrix,
    condition_K,
    condition_L,
    edge_matrix,
    graph_from_edges,
    graph_verdicts,
    hereditary_saturated_sets,
    is_hereditary,
    is_saturated,
    join,
    loop_has_exit,
    meet,
    path_counts,
    paths_of_length,
    saturate,
    simple_loops,
    sinkless_part,
    validate_graph,
)

from oracles import bf_hereditary_saturated, bf_path_counts, subsets
from strategies import graphs

O1 = corpus.graph("O_1")
O2 = corpus.graph("O_2")
CHAIN = corpus.graph("chain")
EXIT = corpus.graph("loop_with_sink")


# -- validation --------------------------------------------------------------------


def test_single_loop_is_valid():
    E = validate_graph({"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "v"}]})
    assert E.vertices == ("v",) and len(E.edges) == 1


def test_empty_graph_is_degenerate():
    with pytest.raises(DegenerateGraphError):
        validate_graph({"vertices": [], "edges": []})


def test_dangling_endpoint():
    with pytest.raises(GraphValidationError, match="dangling endpoint w"):
        validate_graph({"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "w"}]})


@pytest.mark.parametrize("raw", [
    {"vertices": ["v", "v"], "edges": []},
    {"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "v"}, {"id": "e", "src": "v", "dst": "v"}]},
    {"vertices": ["v"], "edges": [{"id": "e", "src": "v"}]},
    {"vertices": "v"},
    ["v"],
])
def test_malformed_graphs(raw):
    with pytest.raises(GraphValidationError):
        validate_graph(raw)


def test_canonical_order_is_input_independent():
    a = graph_from_edges(["b", "a"], [("y", "a", "b"), ("x", "b", "a")])
    b = graph_from_edges(["a", "b"], [("x", "b", "a"), ("y", "a", "b")])
    assert a == b and hash(a) == hash(b)


# -- loops and conditions -------------------------------------------------------


def test_simple_loops():
    assert [mu.edges for mu in simple_loops(O1)] == [("e1",)]
    assert [mu.edges for mu in simple_loops(O2)] == [("e1",), ("e2",)]
    assert simple_loops(CHAIN) == []


def test_loop_exits():
    assert loop_has_exit(O2, Path("v", ("e1",)))
    assert not loop_has_exit(O1, Path("v", ("e1",)))
    assert loop_has_exit(EXIT, Path("v", ("e",)))
    with pytest.raises(GraphValidationError):
        loop_has_exit(CHAIN, Path("u", ("a",)))


@pytest.mark.parametrize("name,L,K", [("O_1", False, False), ("O_2", True, True), ("chain", True, True),
                                      ("cycle_3", False, False), ("loop_with_sink", True, False),
                                      ("return_paths", True, True), ("two_loops", False, False)])
def test_conditions(name, L, K):
    E = corpus.graph(name)
    assert (condition_L(E), condition_K(E)) == (L, K)


# -- hereditary saturated sets ---------------------------------------------------


def test_lattice_examples():
    assert hereditary_saturated_sets(O2) == [frozenset(), frozenset({"v"})]
    # u emits only into {v}, so {v} is not saturated
    assert hereditary_saturated_sets(CHAIN) == [frozenset(), frozenset({"u", "v"})]
    isolated = graph_from_edges(["u", "v"], [])
    assert len(hereditary_saturated_sets(isolated)) == 4


def test_saturate_examples():
    assert saturate(CHAIN, {"v"}) == {"u", "v"}
    assert saturate(CHAIN, set()) == frozenset()
    assert saturate(CHAIN, {"u", "v"}) == {"u", "v"}
    assert saturate(EXIT, {"w"}) == {"w"}
    with pytest.raises(GraphValidationError):
        saturate(CHAIN, {"z"})


def test_sinkless_part():
    assert sinkless_part(O2) == {"v"}
    assert sinkless_part(CHAIN) == frozenset()
    assert sinkless_part(EXIT) == {"v"}


def test_verdicts():
    assert graph_verdicts(O2)["simple"]
    assert not graph_verdicts(O1)["simple"]
    v = graph_verdicts(CHAIN)
    assert (v["simple"], v["gauge_ideal_count"]) == (True, 2)


def test_matrices():
    assert adjacency_matrix(O2) == [[2]]
    assert adjacency_matrix(CHAIN) == [[0, 1], [0, 0]]
    assert edge_matrix(O2) == [[1, 1], [1, 1]]


@pytest.mark.parametrize("name", sorted(corpus.GRAPHS))
def test_corpus_lattice_matches_brute_force(name):
    E = corpus.graph(name)
    assert set(hereditary_saturated_sets(E)) == bf_hereditary_saturated(E)


# frozen from brute-force enumeration
@pytest.mark.parametrize("name,count", [("O_1", 2), ("O_2", 2), ("O_3", 2), ("chain", 2), ("chain_3", 2),
                                        ("cycle_3", 2), ("loop_with_sink", 3), ("double_edge", 2),
                                        ("two_loops", 4), ("return_paths", 2), ("rose_and_point", 4),
                                        ("loop_feeding_rose", 3), ("source_into_loop", 2)])
def test_lattice_sizes(name, count):
    assert len(hereditary_saturated_sets(corpus.graph(name))) == count


# -- properties ---------------------------------------------------------------------------


@given(graphs())
def test_lattice_is_brute_force(E):
    assert set(hereditary_saturated_sets(E)) == bf_hereditary_saturated(E)


@given(graphs())
def test_saturate_is_least_closed_superset(E):
    lattice = bf_hereditary_saturated(E)
    for V in subsets(E.vertices):
        s = saturate(E, V)
        assert s in lattice and V <= s
        assert all(s <= T for T in lattice if V <= T)
        assert saturate(E, s) == s


@given(graphs())
def test_saturate_is_monotone(E):
    sets = subsets(E.vertices)
    for A in sets:
        for B in sets:
            if A <= B:
                assert saturate(E, A) <= saturate(E, B)


@given(graphs())
def test_meet_and_join_stay_in_lattice(E):
    lattice = hereditary_saturated_sets(E)
    for a in lattice:
        for b in lattice:
            assert meet(E, a, b) == a & b
            j = join(E, a, b)
            assert j in lattice and a | b <= j
            assert is_hereditary(E, j) and is_saturated(E, j)


@given(graphs())
def test_K_implies_L(E):
    if condition_K(E):
        assert condition_L(E)


@given(graphs())
@settings(max_examples=50)
def test_path_counts_match_matrix_powers(E):
    for n in range(4):
        assert path_counts(E, n) == bf_path_counts(E, n)
        assert len(paths_of_length(E, n)) == sum(bf_path_counts(E, n).values())

from __future__ import annotations

import itertools

import pytest
from hypothesis import given

from flatwave.graph import Graph, Orientation, Subgraph, all_orientations, is_acyclic, line_graph
from flatwave.tubes import enumerate_tubes, incompatible, is_induced, overlapping
from flatwave.tubings import (
    Tubing,
    TubingError,
    TubingKind,
    admissible_from_vertex_order,
    complete_to_line_admissible,
    enumerate_admissible_tubings,
    enumerate_complete_tubings,
    is_admissible_for_dag,
    label_tubing,
    maximal_independent_sets,
    orientation_from_tubing,
)
from graphs import BUBBLE, CHAIN2, CHAIN3, SINGLE, TRIANGLE, multigraphs, simple_connected_graphs
from oracles import brute_maximal, chromatic_at_minus_one
from test_tubes import tube


def keys(tubings):
    return {t.keys for t in tubings}


def test_complete_tubing_examples():
    found = enumerate_complete_tubings(BUBBLE)
    assert [str(t) for t in found] == [
        "{1|} {2|} {1,2|A} {1,2|A,B}",
        "{1|} {2|} {1,2|B} {1,2|A,B}",
    ]
    assert [len(t) for t in enumerate_complete_tubings(CHAIN2)] == [3]
    assert [len(t) for t in enumerate_complete_tubings(CHAIN3)] == [5, 5]


def test_admissible_tubing_examples():
    assert len(enumerate_admissible_tubings(CHAIN2)) == 2
    assert len(enumerate_admissible_tubings(CHAIN3)) == 5
    (only,) = enumerate_admissible_tubings(Graph(3))
    assert [t.vertex_list for t in only] == [[1], [2], [3]]


def test_admissible_tubings_of_spanning_subgraph():
    h = Subgraph(BUBBLE, 0b11, 0b01)
    found = enumerate_admissible_tubings(h)
    assert [str(t) for t in found] == ["{1|} {1,2|A}", "{2|} {1,2|A}"]


def test_labeling_examples():
    t = Tubing(CHAIN2, (tube(CHAIN2, [1]), tube(CHAIN2, [1, 2], ["e"])), TubingKind.ADMISSIBLE)
    assert {str(k): v for k, v in label_tubing(t).labels.items()} == {
        "Subgraph({1|})": 1, "Subgraph({1,2|e})": 2}
    (c,) = enumerate_complete_tubings(CHAIN2)
    assert list(label_tubing(c).labels.values()) == ["e"]
    # worked by hand from the definition: {2} adds 2, {1,2} adds 1, the whole chain adds 3
    t = Tubing(CHAIN3, (tube(CHAIN3, [2]), tube(CHAIN3, [1, 2], "a"),
                        tube(CHAIN3, [1, 2, 3], "ab")), TubingKind.ADMISSIBLE)
    labels = label_tubing(t).labels
    assert [labels[x] for x in t.tubes] == [2, 1, 3]
    assert label_tubing(t).inverse()[3].vertex_list == [1, 2, 3]


def test_labeling_rejects_non_tubings():
    t = Tubing(CHAIN3, (tube(CHAIN3, [1, 2], "a"), tube(CHAIN3, [1, 2, 3], "ab")),
               TubingKind.ADMISSIBLE)
    with pytest.raises(TubingError):
        label_tubing(t)


def test_vertex_order_examples():
    t = admissible_from_vertex_order(CHAIN3, [1, 2, 3])
    assert str(t) == "{1|} {1,2|a} {1,2,3|a,b}"
    assert admissible_from_vertex_order(CHAIN3, [1, 3, 2]) == admissible_from_vertex_order(CHAIN3, [3, 1, 2])
    assert str(admissible_from_vertex_order(CHAIN3, [3, 1, 2])) == "{1|} {3|} {1,2,3|a,b}"
    assert str(admissible_from_vertex_order(SINGLE, [1])) == "{1|}"


def test_orientation_examples():
    o = orientation_from_tubing(admissible_from_vertex_order(CHAIN3, [1, 2, 3]))
    assert o.arcs == ((1, 2), (2, 3))
    o = orientation_from_tubing(admissible_from_vertex_order(CHAIN3, [1, 3, 2]))
    assert o.arcs == ((1, 2), (3, 2))
    images = {orientation_from_tubing(t).arcs for t in enumerate_admissible_tubings(CHAIN3)}
    assert len(images) == 4


def test_dag_admissibility_examples():
    h = Orientation(CHAIN3, ((1, 2), (2, 3)))
    good = [tube(CHAIN3, [1]), tube(CHAIN3, [1, 2], "a"), tube(CHAIN3, [1, 2, 3], "ab")]
    bad = [tube(CHAIN3, [3]), tube(CHAIN3, [2, 3], "b"), tube(CHAIN3, [1, 2, 3], "ab")]
    assert is_admissible_for_dag(h, good)
    assert not is_admissible_for_dag(h, bad)
    assert not is_admissible_for_dag(h, good[:2])


def test_line_correspondence_examples():
    for g, count in ((BUBBLE, 2), (CHAIN2, 1), (CHAIN3, 2)):
        lg, _ = line_graph(g)
        images = [complete_to_line_admissible(g, t) for t in enumerate_complete_tubings(g)]
        assert len(set(images)) == count
        assert set(images) == set(enumerate_admissible_tubings(lg))


def test_mis_small():
    # path a-b-c: maximal independent sets {a,c} and {b}
    assert maximal_independent_sets([0b010, 0b101, 0b010]) == [0b101, 0b010]
    assert maximal_independent_sets([]) == [0]


@given(multigraphs(max_n=3, max_m=3))
def test_enumeration_matches_brute_force(g):
    tubes = enumerate_tubes(g)
    expect = brute_maximal([t.key for t in tubes],
                           lambda a, b: overlapping(Subgraph(g, *a), Subgraph(g, *b)))
    assert keys(enumerate_complete_tubings(g)) == expect
    induced = [t.key for t in tubes if is_induced(t)]
    expect = brute_maximal(induced, lambda a, b: incompatible(Subgraph(g, *a), Subgraph(g, *b)))
    assert keys(enumerate_admissible_tubings(g)) == expect


@given(multigraphs(max_n=4, max_m=4))
def test_cardinalities_and_labels(g):
    for t in enumerate_complete_tubings(g):
        assert len(t) == g.n + g.m
        assert sum(1 for x in t if x.edges == 0 and x.vertices.bit_count() == 1) == g.n
        labels = label_tubing(t).labels
        assert sorted(labels.values()) == sorted(g.edge_ids)
    for t in enumerate_admissible_tubings(g):
        assert len(t) == g.n
        assert sorted(label_tubing(t).labels.values()) == list(range(1, g.n + 1))


@given(multigraphs(max_n=4, max_m=4))
def test_connected_complete_tubings_contain_whole_graph(g):
    whole = (g.all_vertices, g.all_edges)
    if g.m and whole in {t.key for t in enumerate_tubes(g)}:
        for t in enumerate_complete_tubings(g):
            assert whole in t.keys


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vertex_order_oracle(n):
    for g in simple_connected_graphs(n):
        via_orders = {admissible_from_vertex_order(g, p) for p in itertools.permutations(range(1, n + 1))}
        assert via_orders == set(enumerate_admissible_tubings(g))


@pytest.mark.parametrize("g", [CHAIN2, CHAIN3, TRIANGLE, Graph.from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1)]),
                               Graph.from_edges(4, [(1, 2), (1, 3), (1, 4), (2, 3)])])
def test_orientation_surjectivity(g):
    acyclic = {o.arcs for o in all_orientations(g) if is_acyclic(o)}
    images = {orientation_from_tubing(t).arcs for t in enumerate_admissible_tubings(g)}
    assert images == acyclic
    edges = tuple(sorted((min(e.u, e.v), max(e.u, e.v)) for e in g.edges))
    assert len(acyclic) == abs(chromatic_at_minus_one(g.n, edges))


@given(multigraphs(max_n=4, max_m=4, loops=False))
def test_dag_proposition(g):
    """Admissible for the DAG iff admissible for the graph and inducing it."""
    tubings = enumerate_admissible_tubings(g)
    induced = {}
    for t in tubings:
        induced.setdefault(orientation_from_tubing(t).arcs, set()).add(t.keys)
    induced_tubes = [t for t in enumerate_tubes(g) if is_induced(t)]
    for o in all_orientations(g):
        if not is_acyclic(o):
            continue
        for t in tubings:
            assert is_admissible_for_dag(o, t.tubes) == (t.keys in induced.get(o.arcs, set()))
        if g.n <= 3:
            for r in itertools.combinations(induced_tubes, g.n):
                if is_admissible_for_dag(o, r):
                    assert frozenset(x.key for x in r) in induced[o.arcs]


@given(multigraphs(max_n=4, max_m=4))
def test_line_graph_bijection(g):
    if not g.m:
        return
    lg, _ = line_graph(g)
    images = [complete_to_line_admissible(g, t) for t in enumerate_complete_tubings(g)]
    assert len(set(images)) == len(images)
    assert set(images) == set(enumerate_admissible_tubings(lg))

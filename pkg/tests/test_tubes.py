from __future__ import annotations

from hypothesis import given

from flatwave.graph import Graph, Subgraph
from flatwave.tubes import (
    enumerate_tubes,
    format_tube,
    incompatible,
    is_induced,
    nested,
    overlapping,
)
from graphs import BUBBLE, CHAIN3, SINGLE, multigraphs
from oracles import as_sets, brute_tubes


def tube(g, vs, es=()):
    vmask = sum(1 << (v - 1) for v in vs)
    emask = sum(1 << g.edge_index[e] for e in es)
    return Subgraph(g, vmask, emask)


def test_bubble_tubes():
    tubes = enumerate_tubes(BUBBLE)
    assert [format_tube(t) for t in tubes] == ["{1|}", "{2|}", "{1,2|A}", "{1,2|B}", "{1,2|A,B}"]


def test_tube_counts():
    assert len(enumerate_tubes(SINGLE)) == 1
    # brute force over all (vertex, edge) subsets with a union-find connectivity check
    assert len(enumerate_tubes(CHAIN3)) == 6
    assert enumerate_tubes(Graph(0)) == []


def test_is_induced():
    assert not is_induced(tube(BUBBLE, [1, 2], ["A"]))
    assert is_induced(tube(BUBBLE, [1, 2], ["A", "B"]))
    assert is_induced(tube(CHAIN3, [2]))


def test_relations_bubble_and_chain():
    one, two = tube(BUBBLE, [1]), tube(BUBBLE, [2])
    a, b, ab = (tube(BUBBLE, [1, 2], es) for es in (["A"], ["B"], ["A", "B"]))
    assert nested(one, ab)
    assert not nested(a, b)
    assert nested(a, a)
    assert overlapping(a, b)
    assert not overlapping(one, two)
    assert incompatible(one, two)
    assert not incompatible(one, ab)
    s, t = tube(CHAIN3, [1, 2], ["a"]), tube(CHAIN3, [2, 3], ["b"])
    assert overlapping(s, t)
    assert not incompatible(tube(CHAIN3, [1]), tube(CHAIN3, [3]))


@given(multigraphs(max_n=3, max_m=3))
def test_enumeration_matches_brute_force(g):
    tubes = enumerate_tubes(g)
    assert {as_sets(t) for t in tubes} == brute_tubes(g)
    assert [t.key for t in tubes] == sorted(t.key for t in tubes)


@given(multigraphs(max_n=3, max_m=3))
def test_relation_laws(g):
    tubes = enumerate_tubes(g)
    for s in tubes:
        assert nested(s, s) and not overlapping(s, s) and not incompatible(s, s)
        for t in tubes:
            assert nested(s, t) == nested(t, s)
            assert overlapping(s, t) == overlapping(t, s)
            assert incompatible(s, t) == incompatible(t, s)
            if overlapping(s, t):
                assert incompatible(s, t)

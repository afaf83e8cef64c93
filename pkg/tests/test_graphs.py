import itertools
import json
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcgkit.graphs import (Graph, GraphError, InvalidNodeError, are_isomorphic, automorphisms,
                           build_cycle, build_cycle_strong_p2, build_fan, build_path, build_wheel,
                           complete_graph, find_isomorphism, induced_occurrences, induced_subgraph,
                           remove_node, two_non_edges)

from conftest import graph_classes, relabelings


def counts(G):
    return len(G.nodes), G.num_edges(), len(G.non_edges())


@pytest.mark.parametrize("n,expected", [(3, (3, 3, 0)), (5, (5, 5, 5)), (8, (8, 8, 20))])
def test_cycle_counts(n, expected):
    assert counts(build_cycle(n)) == expected


@pytest.mark.parametrize("n,expected", [(3, (4, 6, 0)), (6, (7, 12, 9)), (8, (9, 16, 20))])
def test_wheel_counts(n, expected):
    assert counts(build_wheel(n)) == expected


@pytest.mark.parametrize("n,expected", [(4, (8, 20, 8)), (5, (10, 25, 20)), (6, (12, 30, 36))])
def test_strong_product_counts(n, expected):
    assert counts(build_cycle_strong_p2(n)) == expected


@pytest.mark.parametrize("n", range(3, 13))
def test_family_formulas(n):
    W = build_wheel(n)
    assert W.num_edges() == 2 * n and len(W.non_edges()) == n * (n - 3) // 2
    S = build_cycle_strong_p2(n)
    assert S.num_edges() == 5 * n
    assert len(S.non_edges()) == comb(2 * n, 2) - 5 * n


@pytest.mark.parametrize("n", [2, 0, -1])
def test_generators_reject_small_n(n):
    for gen in (build_cycle, build_wheel, build_cycle_strong_p2):
        with pytest.raises(GraphError):
            gen(n)


def test_strong_product_vertex_transitive():
    n = 5
    S = build_cycle_strong_p2(n)
    rot = {f"{s}{i}": f"{s}{i % n + 1}" for s in "uv" for i in range(1, n + 1)}
    swap = {f"u{i}": f"v{i}" for i in range(1, n + 1)} | {f"v{i}": f"u{i}" for i in range(1, n + 1)}
    assert S.relabel(rot) == S
    assert S.relabel(swap) == S


def test_edges_and_non_edges_partition_pairs():
    G = build_wheel(7)
    all_pairs = {tuple(sorted(p)) for p in itertools.combinations(G.nodes, 2)}
    assert set(G.edges()) | set(G.non_edges()) == all_pairs
    assert not set(G.edges()) & set(G.non_edges())


def test_rejects_self_loops_and_unknown_nodes():
    with pytest.raises(GraphError):
        Graph(["a"], [("a", "a")])
    with pytest.raises(GraphError):
        Graph(["a", "a"], [])
    with pytest.raises(InvalidNodeError):
        Graph(["a", "b"], [("a", "z")])


def test_json_round_trip_and_validation():
    G = build_wheel(5)
    assert Graph.from_json(G.to_json()) == G
    bad = [
        {"nodes": ["a"], "edges": [], "extra": 1},
        {"nodes": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]},
        {"nodes": ["a", "b"], "edges": [["a", "c"]]},
        {"nodes": "ab", "edges": []},
        {"nodes": ["a", "b"]},
    ]
    for data in bad:
        with pytest.raises(GraphError):
            Graph.from_json(json.dumps(data))
    with pytest.raises(GraphError):
        Graph.from_json("{not json")


def test_induced_subgraph_examples():
    W = build_wheel(8)
    star = induced_subgraph(W, ["c", "v1", "v3", "v7"])
    assert are_isomorphic(star, Graph("abcd", [("a", "b"), ("a", "c"), ("a", "d")]))
    assert are_isomorphic(induced_subgraph(build_cycle(5), ["v1", "v2", "v3"]), build_path(3))
    assert induced_subgraph(W, W.nodes) == W


@given(st.integers(3, 9), st.data())
def test_induced_subgraph_edges_are_restriction(n, data):
    G = build_wheel(n)
    S = data.draw(st.sets(st.sampled_from(G.nodes), min_size=1))
    H = induced_subgraph(G, S)
    assert set(H.edges()) == {e for e in G.edges() if e[0] in S and e[1] in S}


def test_two_non_edges_examples():
    assert len(two_non_edges(build_cycle(5))) == 5
    c6 = two_non_edges(build_cycle(6))
    assert len(c6) == 6 and len(build_cycle(6).non_edges()) == 9
    assert set(two_non_edges(build_wheel(8))) == set(build_wheel(8).non_edges())


def test_induced_occurrences_examples():
    assert induced_occurrences(build_cycle(4), build_path(4)) == []
    maps = induced_occurrences(build_path(5), build_path(4))
    assert len(maps) == 4
    assert {frozenset(m.values()) for m in maps} == {frozenset(["v1", "v2", "v3", "v4"]),
                                                     frozenset(["v2", "v3", "v4", "v5"])}
    # 6 triangles (hub plus a rim edge) times 6 orientations
    W, K3 = build_wheel(6), complete_graph("abc")
    assert len(induced_occurrences(W, K3)) == 36 == len(_brute_occurrences(W, K3))


def _brute_occurrences(G, H):
    out = []
    for image in itertools.permutations(G.nodes, len(H.nodes)):
        m = dict(zip(H.nodes, image))
        if all(H.has_edge(a, b) == G.has_edge(m[a], m[b])
               for a, b in itertools.combinations(H.nodes, 2)):
            out.append(m)
    return out


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(graph_classes(4)), st.sampled_from(graph_classes(3) + graph_classes(4)))
def test_induced_occurrences_against_brute_force(G4, H):
    G = Graph(list(G4.nodes) + ["y"], G4.edges() + [("y", G4.nodes[0])])
    got = induced_occurrences(G, H)
    assert sorted(map(sorted, (m.items() for m in got))) == \
        sorted(map(sorted, (m.items() for m in _brute_occurrences(G, H))))


def test_isomorphism_examples():
    C6 = build_cycle(6)
    shuffled = C6.relabel({"v1": "v4", "v2": "v6", "v3": "v1", "v4": "v2", "v5": "v5", "v6": "v3"})
    assert are_isomorphic(C6, shuffled)
    K33 = Graph(["a1", "a2", "a3", "b1", "b2", "b3"],
                [(f"a{i}", f"b{j}") for i in range(1, 4) for j in range(1, 4)])
    assert not are_isomorphic(C6, K33)
    # the 8-node graph drawn as two squares joined by all rungs and diagonals
    fig = Graph("abcdefgh", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"),
                             ("e", "f"), ("f", "g"), ("g", "h"), ("h", "e"),
                             ("a", "e"), ("b", "f"), ("c", "g"), ("d", "h"),
                             ("a", "f"), ("b", "e"), ("b", "g"), ("c", "f"),
                             ("c", "h"), ("d", "g"), ("d", "e"), ("a", "h")])
    assert are_isomorphic(build_cycle_strong_p2(4), fig)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([build_wheel(6), build_cycle_strong_p2(4), build_fan(6), build_cycle(7)]
                       + list(graph_classes(5)[::3])), st.data())
def test_isomorphism_under_relabeling(G, data):
    m = data.draw(relabelings(G))
    H = G.relabel(m)
    iso = find_isomorphism(G, H)
    assert iso is not None
    assert all(G.has_edge(a, b) == H.has_edge(iso[a], iso[b])
               for a, b in itertools.combinations(G.nodes, 2))
    assert are_isomorphic(H, G) and are_isomorphic(G, G)


def test_isomorphism_distinguishes_classes():
    cls = graph_classes(5)
    assert len(cls) == 34
    for a, b in itertools.combinations(cls[:12], 2):
        assert not are_isomorphic(a, b)


def test_graph_class_counts():
    assert len(graph_classes(4)) == 11


def test_remove_node_examples():
    W = build_wheel(8)
    assert are_isomorphic(remove_node(W, "c"), build_cycle(8))
    fan = remove_node(W, "v1")
    assert are_isomorphic(fan, build_fan(7))
    assert len(remove_node(build_cycle_strong_p2(4), "u4").nodes) == 7
    with pytest.raises(InvalidNodeError):
        remove_node(W, "zz")


def test_automorphism_group_orders():
    assert len(automorphisms(build_cycle(6))) == 12
    assert len(automorphisms(build_wheel(8))) == 16
    # rotations, reflections and the independent u/v swap at each position
    assert len(automorphisms(build_cycle_strong_p2(5))) == 10 * 2 ** 5

import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from _support import random_graph, simple_graphs, to_nx
import networkx as nx
from homexp.config import Budget
from homexp.enumeration import (count_cind_containing, count_connected_edge_subgraphs, count_connected_subgraphs,
                                count_rooted_subtrees, edge_subgraph_bound, enumerate_family, is_member,
                                spanning_tree_count, subtree_bound)
from homexp.exceptions import PreconditionError, ResourceError
from homexp.graph import SimpleGraph, complete_graph, cycle_graph, path_graph, star_graph


def binary_tree(depth: int) -> SimpleGraph:
    """Root 0 with two children per node, `depth` levels below the root."""
    edges, frontier, nxt = [], [0], 1
    for _ in range(depth):
        new = []
        for u in frontier:
            for _ in range(2):
                edges.append((u, nxt))
                new.append(nxt)
                nxt += 1
        frontier = new
    return SimpleGraph(nxt, edges)


def brute_family(G: SimpleGraph, kind: str, max_nodes: int) -> set:
    """Definition-level enumeration over all (node set, edge set) pairs."""
    out = set()
    edges = sorted(G.edges)
    for r in range(len(edges) + 1):
        for es in itertools.combinations(edges, r):
            nodes = frozenset(x for e in es for x in e)
            sub = SimpleGraph(G.node_count, es)
            comp_ok = len(nodes) >= 2 and nx.is_connected(to_nx(sub).subgraph(nodes))
            if kind == "Sub" and 1 <= len(nodes) <= max_nodes:
                out.add((nodes, frozenset(es)))
            elif kind == "Con" and comp_ok and len(nodes) <= max_nodes:
                out.add((nodes, frozenset(es)))
            elif kind == "CInd" and comp_ok and len(nodes) <= max_nodes:
                if set(es) == {e for e in edges if e[0] in nodes and e[1] in nodes}:
                    out.add((nodes, frozenset(es)))
            elif kind in ("CSpan", "SpTr") and G.node_count <= max_nodes:
                full = frozenset(range(G.node_count))
                if sub.is_connected() and (nodes == full or G.node_count == 1):
                    if kind == "CSpan" or len(es) == G.node_count - 1:
                        out.add((full, frozenset(es)))
    return out


def test_spec_examples():
    assert len(enumerate_family(complete_graph(3), "CSpan", 3).members) == 4
    m = enumerate_family(complete_graph(2), "CInd", 2).members
    assert [(set(s.nodes), set(s.edges)) for s in m] == [({0, 1}, {(0, 1)})]
    assert len(enumerate_family(path_graph(3), "CInd", 3).members) == 3


@pytest.mark.parametrize("kind", ["Sub", "Con", "CInd", "CSpan", "SpTr"])
@pytest.mark.parametrize("seed", range(6))
def test_enumeration_matches_definition(kind, seed):
    rng = np.random.default_rng(seed)
    G = random_graph(rng, int(rng.integers(1, 6)), 0.6)
    for max_nodes in (2, 3, G.node_count):
        fam = enumerate_family(G, kind, max_nodes)
        got = [(frozenset(s.nodes), frozenset(s.edges)) for s in fam.members]
        assert len(got) == len(set(got)), "duplicates"
        assert set(got) == brute_family(G, kind, max_nodes)
        assert all(is_member(G, kind, s) for s in fam.members)


def test_kind_names_are_case_insensitive():
    assert enumerate_family(cycle_graph(4), "cind", 3).kind == "CInd"
    with pytest.raises(PreconditionError):
        enumerate_family(cycle_graph(4), "bogus", 3)


def test_enumeration_cap():
    with pytest.raises(ResourceError) as info:
        enumerate_family(complete_graph(6), "Con", 6, cap=10)
    assert info.value.cap_name is not None


def test_rooted_subtree_examples():
    assert count_rooted_subtrees(star_graph(3), 0, 2) == 3
    assert count_rooted_subtrees(binary_tree(3), 0, 3) == 5 == subtree_bound(2, 3)
    assert count_rooted_subtrees(cycle_graph(5), 2, 1) == 1


def test_subtree_bound_values():
    assert subtree_bound(2, 3) == 5
    assert subtree_bound(3, 2) == 3
    assert all(subtree_bound(D, 1) == 1 for D in range(1, 6))
    assert subtree_bound(3, 4) == comb(12, 3) // 4


def test_connected_subgraph_examples():
    assert all(count_connected_subgraphs(cycle_graph(4), v, 4) == 5 for v in range(4))
    assert count_connected_subgraphs(complete_graph(2), 0, 2) == 1


def test_spanning_tree_count_matches_networkx():
    rng = np.random.default_rng(3)
    for _ in range(20):
        G = random_graph(rng, 7, 0.5)
        expected = round(nx.number_of_spanning_trees(to_nx(G))) if G.is_connected() else 0
        assert spanning_tree_count(G) == expected
    assert spanning_tree_count(complete_graph(5)) == 125


@given(simple_graphs(max_nodes=7, max_degree=3), st.integers(1, 5), st.data())
def test_counting_bounds(G, k, data):
    v = data.draw(st.integers(0, G.node_count - 1))
    D = max(G.max_degree, 1)
    assert count_rooted_subtrees(G, v, k) <= subtree_bound(D, k)
    assert count_cind_containing(G, v, k) <= subtree_bound(D, k)
    assert count_connected_subgraphs(G, v, k) <= 2 ** (D * k)
    m = k - 1
    assert count_connected_edge_subgraphs(G, v, m) <= edge_subgraph_bound(D, m)

from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from _support import random_graph, simple_graphs, to_nx
from homexp.canon import canonical_form, decode_form, is_isomorphic, rooted_canonical_form
from homexp.graph import SimpleGraph, cycle_graph, path_graph
from homexp.localstats import RootedBall, ball, ball_graph, histogram, local_distance


@given(simple_graphs(max_nodes=7), st.randoms(use_true_random=False))
def test_canonical_form_is_relabeling_invariant(G, rnd):
    perm = list(range(G.node_count))
    rnd.shuffle(perm)
    H = G.relabel(perm)
    assert canonical_form(G) == canonical_form(H)
    assert is_isomorphic(decode_form(canonical_form(G)), G)


@pytest.mark.parametrize("seed", range(40))
def test_isomorphism_matches_networkx(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    G1, G2 = random_graph(rng, n, 0.5), random_graph(rng, n, 0.5)
    assert is_isomorphic(G1, G2) == nx.is_isomorphic(to_nx(G1), to_nx(G2))


def test_rooted_forms_distinguish_roots():
    P = path_graph(3)
    assert rooted_canonical_form(P, 0) == rooted_canonical_form(P, 2) != rooted_canonical_form(P, 1)


def test_ball_examples():
    B = ball(cycle_graph(9), 4, 0)
    assert B.node_count == 1 and B.graph().node_count == 1
    for r in (1, 2, 3):
        g = ball(cycle_graph(2 * r + 2), 0, r).graph()  # root is node 0
        assert is_isomorphic(g, path_graph(2 * r + 1))
        assert sorted(g.distances_from(0).values()) == sorted([0] + [d for d in range(1, r + 1) for _ in (0, 1)])
    P4 = path_graph(4)
    assert ball(P4, 1, 1) == ball(P4, 2, 1)
    assert ball(P4, 0, 1) != ball(P4, 1, 1)
    assert ball(P4, 1, 1).hex() == ball(P4, 2, 1).hex()


def test_ball_graph_keeps_all_edges_inside_radius():
    G = cycle_graph(5)
    g, root = ball_graph(G, 0, 2)
    assert g.node_count == 5 and g.edge_count == 5


def test_histogram_examples():
    h = histogram(cycle_graph(10), 1)
    assert list(h.frequencies.values()) == [1]
    h = histogram(path_graph(10), 1)
    assert sorted(h.frequencies.values()) == [Fraction(2, 10), Fraction(8, 10)]
    assert h.total() == 1


@given(simple_graphs(max_nodes=8), st.integers(0, 3))
def test_histogram_sums_to_one(G, r):
    assert sum(histogram(G, r).frequencies.values()) == 1


def test_local_distance_examples():
    assert local_distance(path_graph(6), path_graph(6), 2) == 0
    for r in range(5):
        assert local_distance(cycle_graph(10), cycle_graph(12), r) == 0
    assert local_distance(cycle_graph(10), path_graph(10), 1) == Fraction(1, 5)


@given(simple_graphs(max_nodes=6), simple_graphs(max_nodes=6), simple_graphs(max_nodes=6), st.integers(0, 2))
def test_local_distance_is_a_pseudometric(A, B, C, r):
    ab, bc, ac = local_distance(A, B, r), local_distance(B, C, r), local_distance(A, C, r)
    assert ab == local_distance(B, A, r) and 0 <= ab <= 1
    assert ac <= ab + bc

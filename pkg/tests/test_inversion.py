import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms import isomorphism

from _support import random_graph, to_nx
from homexp.canon import is_isomorphic
from homexp.exceptions import PreconditionError
from homexp.graph import SimpleGraph, complete_graph, cycle_graph, path_graph, star_graph
from homexp.homcount import hom_count
from homexp.inversion import (build_family, build_targets, hom_matrices, inversion_system, recover_counts,
                              subgraph_copies, u_coefficients, u_value, u_value_exact)


def test_family_sizes():
    assert [len(build_family(m)) for m in (2, 3, 4)] == [1, 3, 9]
    fam = build_family(3)
    assert [is_isomorphic(F, G) for F, G in zip(fam.members, (complete_graph(2), path_graph(3), complete_graph(3)))] == [True] * 3
    with pytest.raises(PreconditionError):
        build_family(1)


def test_hom_matrices_m2():
    assert hom_matrices(build_family(2)).hom.tolist() == [[2]]


@pytest.mark.parametrize("m", [3, 4])
def test_hom_matrices_structure(m):
    M = hom_matrices(build_family(m))
    N = M.inj.shape[0]
    assert all(M.inj[i, j] == 0 for i in range(N) for j in range(i))
    assert all(M.surj[i, j] == 0 for i in range(N) for j in range(i + 1, N))
    assert all(M.inj[i, i] > 0 and M.surj[i, i] > 0 for i in range(N))
    inv_aut = np.diag([Fraction(1, int(M.aut[i, i])) for i in range(N)])
    assert (M.surj.dot(inv_aut).dot(M.inj) == M.hom).all()


def test_hom_matrices_m3_values():
    M = hom_matrices(build_family(3))
    assert M.inj.tolist() == [[2, 4, 6], [0, 2, 6], [0, 0, 6]]
    assert M.surj.tolist() == [[2, 0, 0], [2, 2, 0], [0, 0, 6]]


def test_targets_for_an_edge():
    (H,) = build_targets(build_family(2), 3)
    assert [H.beta[i, i] for i in range(3)] == [1, 1, 1]
    assert {(i, j) for i in range(3) for j in range(i + 1, 3) if H.beta[i, j]} == {(0, 2), (1, 2)}


@pytest.mark.parametrize("m,q", [(3, 8), (4, 10)])
def test_targets_are_dense_and_always_admit_maps(m, q):
    rng = np.random.default_rng(m)
    for H in build_targets(build_family(m), q):
        degrees = [sum(1 for j in range(q) if H.beta[i, j] and j != i) for i in range(q)]
        assert min(degrees) >= q - m
        G = random_graph(rng, 6, 0.5)
        assert hom_count(G, H) > 0


def test_collapsed_targets_keep_hom():
    fam = build_family(3)
    G = cycle_graph(5)
    for H, Hc in zip(build_targets(fam, 9), build_targets(fam, 9, collapse=True)):
        assert Hc.q < H.q and hom_count(G, H) == hom_count(G, Hc)


def test_leading_order_of_u():
    """q^|F| (-1)^|E(F)| u(F, H_i) approaches hom(F, F_i) with an O(1/q) gap."""
    fam = build_family(3)
    hom = hom_matrices(fam).hom
    gaps = []
    for q in (100, 200, 400):
        U = u_coefficients(fam, q, k_max=4)
        scaled = np.array([[float(q ** F.node_count * (-1) ** F.edge_count * U[i, j]) for j in range(3)]
                           for i, F in enumerate(fam.members)])
        gaps.append(np.abs(scaled - hom.astype(float)).max())
    assert gaps[0] * 100 < 40  # gap ~ 36 / q
    assert gaps[1] / gaps[0] == pytest.approx(0.5, abs=0.05)
    assert gaps[2] / gaps[1] == pytest.approx(0.5, abs=0.05)


def test_u_of_an_edge():
    fam = build_family(2)
    for q in (50, 100):
        u = float(u_value(complete_graph(2), fam.members[0], q, 6))
        assert u == pytest.approx(-2 / q ** 2, rel=3 / q)


def test_types_beyond_the_family_scale_like_their_size():
    """u(F, H_i) for |F| > m is of order q^-|F| with leading coefficient (-1)^|E| hom(F, F_i)."""
    base = complete_graph(2)
    for F in (path_graph(3), star_graph(3), path_graph(4)):
        expected = (-1) ** F.edge_count * hom_count(F, base)
        val = [float(u_value(F, base, q, 6)) * q ** F.node_count for q in (200, 400)]
        assert val[1] == pytest.approx(expected, rel=0.05)
        assert abs(val[1] - expected) < abs(val[0] - expected)


def test_series_and_exact_u_agree():
    fam = build_family(3)
    S = u_coefficients(fam, 30, k_max=8).astype(float)
    E = u_coefficients(fam, 30, method="exact")
    assert np.allclose(S, E, rtol=1e-6, atol=1e-12)


def test_recover_edges_of_hexagon():
    system = inversion_system(2, 50)
    res = recover_counts(cycle_graph(6), system)
    assert abs(res.estimates[0] - 6) <= 1.0


def test_recover_edgeless_graph():
    res = recover_counts(SimpleGraph(5), inversion_system(3, 20))
    assert np.allclose(res.estimates, 0, atol=1e-12)


def test_recover_small_path_m3():
    res = recover_counts(path_graph(8), inversion_system(3, 80))
    assert np.allclose(res.estimates, [7, 6, 0], atol=0.2)


def test_recovery_error_is_order_size_over_q():
    errs = []
    for q in (20, 40, 80, 160):
        errs.append(abs(recover_counts(cycle_graph(12), inversion_system(2, q)).estimates[0] - 12))
    slope = np.polyfit(np.log([20, 40, 80, 160]), np.log(errs), 1)[0]
    assert -1.2 < slope < -0.8


def test_exact_inverse_is_inverse():
    system = inversion_system(3, 30)
    assert np.allclose(system.w_matrix @ system.u_matrix, np.eye(3), atol=1e-9)


def count_copies_networkx(F, G) -> int:
    gm = isomorphism.GraphMatcher(to_nx(G), to_nx(F))
    embeddings = sum(1 for _ in gm.subgraph_monomorphisms_iter())
    aut = sum(1 for _ in isomorphism.GraphMatcher(to_nx(F), to_nx(F)).isomorphisms_iter())
    return embeddings // aut


@pytest.mark.parametrize("seed", range(10))
def test_subgraph_copies_matches_networkx(seed):
    rng = np.random.default_rng(seed)
    G = random_graph(rng, 7, 0.45)
    for F in build_family(4).members:
        assert subgraph_copies(F, G) == count_copies_networkx(F, G)

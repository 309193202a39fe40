import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _support import fibonacci, random_connected_graph, simple_graphs
from homexp.cavity import (CavityConfig, hardcore_weighted_graph, local_estimate_ln_t, locality_constant, log_psi,
                           psi, psi_locality_gap, sequential_ln_t)
from homexp.exceptions import PreconditionError
from homexp.graph import (SimpleGraph, WeightedGraph, complement_weights, complete_graph, cycle_graph,
                          interaction_norm, path_graph, uniform_complete_target)
from homexp.grids import make_grid
from homexp.homcount import hom_count, log_density


def test_psi_of_isolated_node_is_one():
    assert psi(SimpleGraph(1), 0, uniform_complete_target(5)) == pytest.approx(1.0)
    assert psi(SimpleGraph(1), 0, uniform_complete_target(5, exact=True), method="gibbs") == 1


@pytest.mark.parametrize("q", [5, 7, 12])
def test_psi_on_an_edge(q):
    assert psi(complete_graph(2), 0, uniform_complete_target(q)) == pytest.approx(1 - 1 / q, rel=1e-14)
    assert psi(complete_graph(2), 1, uniform_complete_target(q, exact=True), method="gibbs") == 1 - Fraction(1, q)


@settings(max_examples=30)
@given(simple_graphs(max_nodes=5, max_degree=2), st.integers(5, 9), st.data())
def test_psi_bounds_and_methods_agree(K, q, data):
    v = data.draw(st.integers(0, K.node_count - 1))
    H = uniform_complete_target(q, exact=True)
    p_ratio = psi(K, v, H, D=2)
    p_gibbs = psi(K, v, H, D=2, method="gibbs")
    assert 0.5 < p_ratio <= 1 + 1e-12
    assert float(p_gibbs) == pytest.approx(p_ratio, rel=1e-12)


def test_psi_refuses_outside_regime():
    with pytest.raises(PreconditionError):
        psi(cycle_graph(5), 0, uniform_complete_target(3))


def test_sequential_on_path_any_ordering():
    H = uniform_complete_target(3)
    exact = log_density(path_graph(3), H)
    for order in ([0, 1, 2], [1, 0, 2], [2, 1, 0]):
        assert sequential_ln_t(path_graph(3), H, order, check=False) == pytest.approx(exact, abs=1e-10)
    assert sequential_ln_t(SimpleGraph(1), H, check=False) == pytest.approx(0.0, abs=1e-15)


def test_sequential_orderings_of_c5_agree():
    H = uniform_complete_target(7)
    a = sequential_ln_t(cycle_graph(5), H, [0, 1, 2, 3, 4])
    b = sequential_ln_t(cycle_graph(5), H, [3, 0, 4, 2, 1])
    assert a == pytest.approx(b, abs=1e-10)


@pytest.mark.parametrize("seed", range(6))
def test_sequential_matches_exact(seed):
    rng = np.random.default_rng(seed)
    G = random_connected_graph(rng, 8, 0.4, max_degree=3)
    H = uniform_complete_target(13)
    order = rng.permutation(8)
    exact = log_density(G, H)
    assert sequential_ln_t(G, H, order) == pytest.approx(exact, rel=1e-10)


@pytest.mark.parametrize("r", [2, 3])
def test_local_estimate_on_cycle(r):
    H = uniform_complete_target(9)
    G = cycle_graph(12)
    exact = log_density(G, H) / 12
    res = local_estimate_ln_t(G, H, CavityConfig(r, 100, seed=1))
    assert abs(res.value - exact) <= res.error_radius
    assert res.details["kappa"] == pytest.approx(4 / 9)


def test_local_estimate_on_a_tree_with_large_radius():
    """2 D kappa^r is tiny, so the estimate is pinned to the sequential value."""
    G = path_graph(9)
    H = uniform_complete_target(40)
    cfg = CavityConfig(r=8, ordering_samples=50, seed=3, D=2)
    res = local_estimate_ln_t(G, H, cfg)
    assert 2 * 2 * cfg.kappa(H, G) ** 8 < 1e-6
    assert abs(res.value - sequential_ln_t(G, H) / 9) <= res.error_radius


def test_all_ones_target_gives_zero():
    H = WeightedGraph([0.5, 0.5], [[1.0, 1.0], [1.0, 1.0]])
    res = local_estimate_ln_t(cycle_graph(6), H, CavityConfig(2, 20))
    assert res.value == 0
    assert psi(cycle_graph(6), 0, H) == 1


def test_local_estimate_is_seeded():
    G = make_grid("path", 4, 3)
    cfg = CavityConfig(2, 30, seed=5, D=4)
    H17 = uniform_complete_target(17)
    a = local_estimate_ln_t(G, H17, cfg)
    b = local_estimate_ln_t(G, H17, cfg)
    assert (a.value, a.error_radius) == (b.value, b.error_radius)


def test_local_estimate_refuses_without_locality():
    with pytest.raises(PreconditionError):
        local_estimate_ln_t(cycle_graph(6), uniform_complete_target(4), CavityConfig(2))


def test_locality_gap_cycle_vs_long_path():
    H = uniform_complete_target(9)
    kappa = locality_constant(H, 2)
    gap = psi_locality_gap(cycle_graph(20), 0, path_graph(41), 20, H, 4)
    assert gap < 2 * kappa ** 4
    assert psi_locality_gap(cycle_graph(20), 0, path_graph(41), 20, H, 4, log=True) < 2 * 2 * kappa ** 4
    assert psi_locality_gap(cycle_graph(8), 0, cycle_graph(8), 0, H, 2) == 0
    assert psi_locality_gap(cycle_graph(8), 0, cycle_graph(8), 3, H, 2) == pytest.approx(0, abs=1e-14)
    with pytest.raises(PreconditionError):
        psi_locality_gap(cycle_graph(8), 0, path_graph(8), 0, H, 2)


def test_hardcore_target():
    H = hardcore_weighted_graph(1)
    assert H.alpha.tolist() == [Fraction(1, 2), Fraction(1, 2)]
    for n in range(1, 11):
        assert hom_count(path_graph(n), H) * 2 ** n == fibonacci(n + 2)


@pytest.mark.parametrize("D", [1, 2, 3, 4])
def test_hardcore_locality_threshold(D):
    """c(H-bar) = lam/(1+lam), so kappa < 1 exactly when lam < 1/(2D-1)."""
    for lam in (Fraction(1, 2 * D - 1) * f for f in (Fraction(1, 2), Fraction(99, 100), 1, Fraction(101, 100), 2)):
        H = hardcore_weighted_graph(lam)
        assert interaction_norm(complement_weights(H)) == lam / (1 + lam)
        assert (locality_constant(H, D) < 1) == (lam < Fraction(1, 2 * D - 1))

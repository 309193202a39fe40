"""Acceptance gate: one test group per criterion, run at the stated tolerances.

The terminal summary (see conftest.py) prints one PASS/FAIL line per criterion.
"""
import itertools
import math
import os
import subprocess
import sys
import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from _support import (all_graphs, brute_crapo, fibonacci, random_connected_graph, random_graph,
                      random_rational_target)
from homexp.cavity import (CavityConfig, hardcore_weighted_graph, local_estimate_ln_t, locality_constant, log_psi,
                           psi, psi_locality_gap, sequential_ln_t)
from homexp.cluster import expansion_constants, k_constant, truncated_ln_t
from homexp.enumeration import (count_connected_subgraphs, count_rooted_subtrees, spanning_tree_count,
                                subtree_bound)
from homexp.graph import (WeightedGraph, complete_graph, cycle_graph, interaction_norm, path_graph,
                          uniform_complete_target, weighted_from_simple)
from homexp.grids import grid_hom, grid_ln_hom, make_grid
from homexp.homcount import density, hom_count, log_density, z_inversion_check, z_value
from homexp.inversion import build_family, hom_matrices, inversion_system, recover_counts, subgraph_copies
from homexp.invariants import chromatic_polynomial, crapo_invariant, weighted_crapo, weighted_tree_sum
from homexp.localstats import local_distance
from homexp.polymer import polymer_system_from

C1 = pytest.mark.criterion(1, "exact identities in rational mode")
C2 = pytest.mark.criterion(2, "inequality suite")
C3 = pytest.mark.criterion(3, "cluster-expansion soundness")
C4 = pytest.mark.criterion(4, "cavity soundness")
C5 = pytest.mark.criterion(5, "inversion recovery")
C6 = pytest.mark.criterion(6, "grid suite")
C7 = pytest.mark.criterion(7, "left-convergence diagnostics")
C8 = pytest.mark.criterion(8, "determinism")

GRAPHS_5 = all_graphs(5)


def chromatic_log_density(G, q: int) -> float:
    """Independent exact oracle for H = uniform K_q: ln(chr(G, q) / q^n)."""
    return math.log(chromatic_polynomial(G)(q)) - G.node_count * math.log(q)


class Timer:
    def __init__(self, limit: float):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, budget {self.limit}s"


# -- 1 ---------------------------------------------------------------------------------
@C1
def test_c1_exact_identities():
    rng = np.random.default_rng(2024)
    targets = [random_rational_target(rng, 3) for _ in range(3)]
    checked = 0
    with Timer(60):
        for G in GRAPHS_5:
            P = chromatic_polynomial(G)
            for q in range(1, 5):
                assert P(q) == hom_count(G, complete_graph(q))
            assert crapo_invariant(G) == (P.linear_coefficient if G.is_connected() else 0)
            if G.node_count > 1:
                assert brute_crapo(G) == P.linear_coefficient
            for H in targets:
                assert H.exact
                if G.is_connected():
                    # the inversion identity is stated over connected spanning subgraphs of a connected G
                    assert z_inversion_check(G, H)
                assert polymer_system_from(G, H).stab() == density(G, H)
                checked += 1
    assert checked == 3 * len(GRAPHS_5) == 156


# -- 2 ---------------------------------------------------------------------------------
@C2
def test_c2_inequalities():
    rng = np.random.default_rng(7)
    instances = violations = 0
    with Timer(120):
        # |cr(H)| <= tree(H) for edge weights in [0, 1]
        for _ in range(150):
            H = random_rational_target(rng, int(rng.integers(2, 6)))
            instances += 1
            violations += abs(weighted_crapo(H)) > weighted_tree_sum(H)
        # |z(G, H)| <= tree(G) c(H)^(|G|-1)
        for _ in range(150):
            G = random_connected_graph(rng, int(rng.integers(2, 6)), 0.5)
            H = random_rational_target(rng, 3)
            instances += 1
            violations += abs(z_value(G, H)) > spanning_tree_count(G) * interaction_norm(H) ** (G.node_count - 1)
        # subtree and connected-subgraph counts through a node
        for _ in range(150):
            D = int(rng.integers(2, 4))
            G = random_graph(rng, int(rng.integers(3, 9)), 0.6, max_degree=D)
            v = int(rng.integers(G.node_count))
            k = int(rng.integers(1, 6))
            instances += 1
            violations += count_rooted_subtrees(G, v, k) > subtree_bound(D, k) == comb(k * D, k - 1) // k
            violations += count_connected_subgraphs(G, v, k) > 2 ** (D * k)
        # chromatic coefficients alternate; (-1)^(n-1) cr(G) > 0 for connected G
        for G in all_graphs(6):
            instances += 1
            violations += not chromatic_polynomial(G).alternates_in_sign()
            if G.is_connected() and G.node_count >= 2:
                violations += (-1) ** (G.node_count - 1) * crapo_invariant(G) <= 0
    assert instances >= 500
    assert violations == 0


# -- 3 ---------------------------------------------------------------------------------
@C3
def test_c3_constant_k():
    K = k_constant(Fraction(2, 5))
    assert 7.96 < K < 8


@C3
def test_c3_cluster_radius_soundness():
    rng = np.random.default_rng(33)
    cases = violations = 0
    worst = 0.0
    with Timer(600):
        for _ in range(100):
            G = random_graph(rng, int(rng.integers(2, 9)), 0.5, max_degree=3)
            q = int(rng.choice([64, 80, 128]))
            H = uniform_complete_target(q)
            D = 3
            assert expansion_constants(D, H, 0.4).valid and 1 / q < 1 / (8 * D)
            exact = chromatic_log_density(G, q) / G.node_count
            for k in range(2, 7):
                res = truncated_ln_t(G, H, k, b=0.4, D=D)
                c = expansion_constants(D, H, 0.4)
                assert res.error_radius == pytest.approx(0.4 * math.exp(-c.epsilon * (k + 1)))
                err = abs(float(res.value) - exact)
                worst = max(worst, err / res.error_radius)
                violations += err > res.error_radius
            cases += 1
    assert cases >= 100
    assert violations == 0, f"worst error/radius {worst:.3g}"


# -- 4 ---------------------------------------------------------------------------------
CAVITY_GRAPHS = {"C12": (cycle_graph(12), 2), "P20": (path_graph(20), 2), "P4xP3": (make_grid("path", 4, 3), 4)}


@C4
@pytest.mark.parametrize("name", sorted(CAVITY_GRAPHS))
def test_c4_sequential_identity_and_psi_bounds(name):
    G, D = CAVITY_GRAPHS[name]
    H = uniform_complete_target(4 * D + 1)
    assert interaction_norm(weighted_from_simple(complete_graph(1))) == 0
    exact = log_density(G, H)
    rng = np.random.default_rng(4)
    for _ in range(3):
        order = [int(v) for v in rng.permutation(G.node_count)]
        assert sequential_ln_t(G, H, order, D=D) == pytest.approx(exact, rel=1e-10)
        # every Psi met along the ordering lies in (1/2, 1]
        removed = []
        for v in order:
            K = G.remove_nodes(removed) if removed else G
            keep = [u for u in range(G.node_count) if u not in removed]
            p = psi(K, keep.index(v), H, D=D)
            assert 0.5 < p <= 1.0 + 1e-12
            removed.append(v)


@C4
@pytest.mark.parametrize("r", [2, 3, 4])
@pytest.mark.parametrize("name", sorted(CAVITY_GRAPHS))
def test_c4_local_estimate_within_radius(name, r):
    G, D = CAVITY_GRAPHS[name]
    H = uniform_complete_target(4 * D + 1)
    exact = log_density(G, H) / G.node_count
    with Timer(120):
        res = local_estimate_ln_t(G, H, CavityConfig(r, ordering_samples=200, seed=0, D=D))
    assert res.details["kappa"] == pytest.approx(2 * D / (4 * D + 1))
    assert abs(res.value - exact) <= res.error_radius


@C4
@pytest.mark.parametrize("r", [2, 3, 4])
def test_c4_psi_locality_gaps(r):
    D = 2
    H = uniform_complete_target(4 * D + 1)
    kappa = locality_constant(H, D)
    pairs = [(cycle_graph(20), 0, path_graph(41), 20), (cycle_graph(2 * r + 3), 1, path_graph(2 * r + 5), r + 2),
             (path_graph(30), r, path_graph(2 * r + 1), r)]
    for K, v, K2, v2 in pairs:
        assert psi_locality_gap(K, v, K2, v2, H, r, D) <= D * kappa ** r
        assert psi_locality_gap(K, v, K2, v2, H, r, D, log=True) <= 2 * D * kappa ** r
    G = make_grid("path", 8, 3)
    H4 = uniform_complete_target(17)
    k4 = locality_constant(H4, 4)
    assert psi_locality_gap(G, 3 * 3 + 1, make_grid("path", 9, 3), 4 * 3 + 1, H4, min(r, 2), 4) <= 4 * k4 ** min(r, 2)


# -- 5 ---------------------------------------------------------------------------------
Q_VALUES = (20, 40, 80)


def _recovery_errors():
    rng = np.random.default_rng(55)
    graphs = [random_graph(rng, int(rng.integers(10, 21)), 0.3, max_degree=3) for _ in range(10)]
    errors = np.zeros((len(Q_VALUES), len(graphs)))
    for a, q in enumerate(Q_VALUES):
        system = inversion_system(2, q)
        for b, G in enumerate(graphs):
            errors[a, b] = abs(recover_counts(G, system).estimates[0] - G.edge_count)
    return graphs, errors


@pytest.fixture(scope="module")
def recovery_errors():
    with Timer(300):
        return _recovery_errors()


@C5
def test_c5_recovery_error_decreases_with_q(recovery_errors):
    graphs, errors = recovery_errors
    assert all(subgraph_copies(complete_graph(2), G) == G.edge_count for G in graphs)
    mean = errors.mean(axis=1)
    assert all(b < a for a, b in zip(mean, mean[1:]))
    nonzero = errors[:, errors[0] > 0]
    assert np.all(nonzero[1:] < nonzero[:-1])


@C5
def test_c5_recovery_rate_exponent(recovery_errors):
    """Log-log slope of the mean recovery error against q must be at most -1.5."""
    graphs, errors = recovery_errors
    slope = np.polyfit(np.log(Q_VALUES), np.log(errors.mean(axis=1)), 1)[0]
    assert slope <= -1.5, f"empirical rate exponent {slope:.3f}"


@C5
def test_c5_matrix_structure_m3():
    M = hom_matrices(build_family(3))
    N = M.inj.shape[0]
    assert all(M.inj[i, j] == 0 for i in range(N) for j in range(i)) and all(M.inj[i, i] > 0 for i in range(N))
    assert all(M.surj[i, j] == 0 for i in range(N) for j in range(i + 1, N)) and all(M.surj[i, i] > 0 for i in range(N))
    inv_aut = np.diag([Fraction(1, int(M.aut[i, i])) for i in range(N)])
    assert (M.surj.dot(inv_aut).dot(M.inj) == M.hom).all()


# -- 6 ---------------------------------------------------------------------------------
K3 = weighted_from_simple(complete_graph(3))
K2 = weighted_from_simple(complete_graph(2))


@C6
def test_c6_transfer_matches_brute_force():
    G = make_grid("path", 3, 3)
    assert grid_hom("path", 3, 3, K3) == hom_count(G, K3, method="brute") == 246


@C6
def test_c6_hardcore_fibonacci():
    H = hardcore_weighted_graph(1)
    lam = 1
    for n in range(1, 11):
        assert grid_hom("path", n, 1, H) * (1 + lam) ** n == fibonacci(n + 2)


@C6
def test_c6_subadditivity():
    rng = np.random.default_rng(6)
    for H in [K3] + [random_rational_target(rng, 3) for _ in range(3)]:
        for m in (1, 2, 3):
            for n1, n2 in itertools.product(range(1, 6), repeat=2):
                assert grid_hom("path", n1 + n2, m, H) <= grid_hom("path", n1, m, H) * grid_hom("path", n2, m, H)


@C6
def test_c6_even_cylinder_lower_bound():
    for n in (4, 6):
        for m in (2, 3):
            lhs = grid_hom("cylinder", n, m, K3)
            assert lhs >= Fraction(grid_hom("path", n // 2 + 1, m, K3) ** 2, 3 ** (2 * m))


@C6
def test_c6_odd_cylinder_parity_obstruction():
    for n in (3, 5, 7, 9):
        for m in (1, 2, 3):
            assert grid_ln_hom("cylinder", n, m, K2.to_float()) == -math.inf
    for n in (4, 6):
        assert grid_ln_hom("cylinder", n, 1, K2) == pytest.approx(math.log(2) / n)


# -- 7 ---------------------------------------------------------------------------------
@C7
def test_c7_cycle_sequence():
    cycles = [cycle_graph(n) for n in (10, 20, 40)]
    H = uniform_complete_target(64)
    with Timer(60):
        for A, B in itertools.combinations(cycles, 2):
            for r in range(5):
                assert local_distance(A, B, r) == 0
        cluster = [truncated_ln_t(G, H, 4) for G in cycles]
        cavity = [local_estimate_ln_t(G, H, CavityConfig(3, 100, seed=0)) for G in cycles]
    for results in (cluster, cavity):
        for a, b in itertools.combinations(results, 2):
            assert abs(float(a.value) - float(b.value)) <= 2 * max(a.error_radius, b.error_radius)
    for a, b in zip(cluster, cavity):
        assert abs(float(a.value) - float(b.value)) <= 2 * max(a.error_radius, b.error_radius)


# -- 8 ---------------------------------------------------------------------------------
def _write_inputs(tmp_path):
    from homexp.io import write_graph, write_weighted_graph
    write_graph(tmp_path / "grid.graph", make_grid("path", 4, 3))
    write_graph(tmp_path / "c12.graph", cycle_graph(12))
    write_weighted_graph(tmp_path / "u64.wgraph", uniform_complete_target(64))
    write_weighted_graph(tmp_path / "u17.wgraph", uniform_complete_target(17))
    write_weighted_graph(tmp_path / "k3.wgraph", K3)
    (tmp_path / "x.vec").write_text(" ".join(["0.05"] * 12) + "\n")


REPORTS = [
    ["lnt", "--method", "cluster", "-k", "4", "-G", "grid.graph", "-H", "u64.wgraph"],
    ["lnt", "--method", "cavity", "-r", "2", "--samples", "50", "--seed", "17", "-G", "grid.graph", "-H", "u17.wgraph"],
    ["lnt", "--method", "exact", "-G", "c12.graph", "-H", "u17.wgraph"],
    ["mayer", "c12.graph", "--x", "x.vec", "--mmax", "6"],
    ["invert", "-m", "3", "-q", "30", "-G", "c12.graph"],
    ["gridconv", "--kind", "path", "-H", "k3.wgraph", "--sizes", "2,3,4"],
    ["balls", "-r", "2", "grid.graph"],
]


@C8
@pytest.mark.parametrize("argv", REPORTS, ids=lambda a: "-".join(a[:3]))
def test_c8_byte_identical_reports(argv, tmp_path):
    _write_inputs(tmp_path)
    outs = []
    for hashseed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run([sys.executable, "-m", "homexp", *argv], cwd=tmp_path, env=env,
                              capture_output=True)
        assert proc.returncode == 0, proc.stderr.decode()
        outs.append(proc.stdout)
    assert outs[0] == outs[1] == outs[2]
    assert b"# seed:" in outs[0]

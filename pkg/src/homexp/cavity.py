"""Cavity route to ln t(G, H): the Psi ratio, exact telescoping, local estimates.

Psi_K(v) = t(K, H) / t(K - v, H) with node weights normalized to sum 1.
Removing nodes one at a time telescopes ln t(G, H) into a sum of ln Psi.
Averaging over a uniformly random removal order, each node contributes
E ln Psi_{G(v, sigma)}(v), where G(v, sigma) keeps v and the nodes removed
after it.  When kappa = 2 D c(H-bar) < 1, replacing G(v, sigma) by its
r-ball around v changes ln Psi by less than 2 D kappa^r, and that ball only
depends on the r-ball of v in G and on the relative order inside it.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .canon import rooted_canonical_form
from .certified import CertifiedLog
from .cluster import check_unit_interval
from .exceptions import DegenerateDistributionError, InternalConsistencyError, PreconditionError
from .graph import SimpleGraph, WeightedGraph, complement_weights, interaction_norm
from .homcount import gibbs_distribution, log_hom
from .localstats import RootedBall, ball, ball_nodes, histogram

DEFAULT_ORDERINGS = 200
MC_STANDARD_ERRORS = 3.0
# ball classes with more nodes than this cannot use exact ordering enumeration
EXACT_ORDERING_MAX_NODES = 20


def locality_constant(H: WeightedGraph, D: int) -> float:
    """kappa = 2 D c(H-bar)."""
    return 2 * D * float(interaction_norm(complement_weights(H)))


@dataclass(frozen=True)
class CavityConfig:
    r: int
    ordering_samples: int = DEFAULT_ORDERINGS
    seed: int = 0
    D: int | None = None
    exact_orderings: bool = False

    def kappa(self, H: WeightedGraph, G: SimpleGraph | None = None) -> float:
        D = self.D if self.D is not None else max(G.max_degree if G is not None else 1, 1)
        return locality_constant(H, D)


@dataclass(frozen=True)
class BallContribution:
    ball: RootedBall
    frequency: Fraction
    mean: float  # estimate of E ln Psi over orderings
    sample_count: int
    standard_error: float


def _check_psi_preconditions(H: WeightedGraph, D: int) -> bool:
    check_unit_interval(H)
    c_bar = float(interaction_norm(complement_weights(H)))
    return c_bar < 1 / (2 * D)


def _component(K: SimpleGraph, v: int) -> tuple[SimpleGraph, int]:
    comp = sorted(K.distances_from(v))
    return K.induced_subgraph(comp), comp.index(v)


def _log_psi_ratio(C: SimpleGraph, v: int, Hn: WeightedGraph) -> float:
    den = log_hom(C.remove_nodes([v]), Hn)
    if den == -math.inf:
        raise DegenerateDistributionError("hom(K - v, H) = 0: Psi is undefined")
    return log_hom(C, Hn) - den


def _psi_gibbs(C: SimpleGraph, v: int, Hn: WeightedGraph):
    rest = [w for w in C.nodes() if w != v]
    Km = C.induced_subgraph(rest)
    nbrs = [rest.index(w) for w in C.neighbors(v)]
    table = gibbs_distribution(Km, Hn)
    total = Fraction(0) if Hn.exact else 0.0
    for phi, p in zip(table.maps, table.probabilities):
        inner = Fraction(0) if Hn.exact else 0.0
        for i in range(Hn.q):
            w = Hn.alpha[i]
            for u in nbrs:
                w = w * Hn.beta[i, phi[u]]
            inner += w
        total += p * inner
    return total


def log_psi(K: SimpleGraph, v: int, H: WeightedGraph, D: int | None = None, check: bool = True) -> float:
    """ln Psi_K(v), computed on the component of v."""
    D = max(K.max_degree, 1) if D is None else D
    in_regime = _check_psi_preconditions(H, D)
    if check and not in_regime:
        raise PreconditionError(f"Psi bounds need c(H-bar) < 1/(2D) = {1 / (2 * D):.6g}")
    C, root = _component(K, v)
    val = _log_psi_ratio(C, root, H.normalized())
    if in_regime and not (math.log(0.5) < val <= 1e-12):
        raise InternalConsistencyError(f"Psi = {math.exp(val)} outside (1/2, 1] inside the certified regime")
    return val


def psi(K: SimpleGraph, v: int, H: WeightedGraph, D: int | None = None, method: str = "ratio",
        check: bool = True):
    """Psi_K(v): expected weight of v's spin given the Gibbs measure on K - v.

    ``method='ratio'`` uses t(K)/t(K - v); ``method='gibbs'`` sums over the
    full Gibbs table of K - v (exact in rational mode; small K only).
    """
    if method == "ratio":
        return math.exp(log_psi(K, v, H, D, check))
    if method != "gibbs":
        raise PreconditionError(f"unknown method {method!r}; expected 'ratio' or 'gibbs'")
    D = max(K.max_degree, 1) if D is None else D
    if check and not _check_psi_preconditions(H, D):
        raise PreconditionError(f"Psi bounds need c(H-bar) < 1/(2D) = {1 / (2 * D):.6g}")
    C, root = _component(K, v)
    return _psi_gibbs(C, root, H.normalized())


def sequential_ln_t(G: SimpleGraph, H: WeightedGraph, ordering=None, D: int | None = None,
                    check: bool = True) -> float:
    """Sum over k of ln Psi of v_k in the graph with v_1..v_{k-1} removed."""
    n = G.node_count
    order = list(range(n)) if ordering is None else [int(v) for v in ordering]
    if sorted(order) != list(range(n)):
        raise PreconditionError("ordering must be a permutation of the nodes")
    D = max(G.max_degree, 1) if D is None else D
    remaining = set(range(n))
    total = 0.0
    for v in order:
        keep = sorted(remaining)
        total += log_psi(G.induced_subgraph(keep), keep.index(v), H, D, check)
        remaining.discard(v)
    return total


def _suffix_ball(B: SimpleGraph, later, r: int) -> tuple[SimpleGraph, int]:
    keep = sorted({0} | set(later))
    K = B.induced_subgraph(keep)
    nodes = ball_nodes(K, 0, r)
    return K.induced_subgraph(nodes), 0  # node 0 stays first after both relabelings


def _seed_words(seed: int, encoding: bytes, index: int) -> list:
    digest = hashlib.sha256(encoding).digest()
    words = [int.from_bytes(digest[i:i + 4], "big") for i in range(0, 16, 4)]
    return [int(seed) & 0xFFFFFFFFFFFFFFFF] + words + [index]


class _PsiCache:
    def __init__(self, H: WeightedGraph, D: int):
        self.H, self.D, self.memo = H, D, {}

    def log_psi(self, K: SimpleGraph, root: int) -> float:
        key = rooted_canonical_form(K, root)
        if key not in self.memo:
            self.memo[key] = log_psi(K, root, self.H, self.D)
        return self.memo[key]


def _ball_mean_exact(B: SimpleGraph, r: int, cache: _PsiCache) -> float:
    others = list(range(1, B.node_count))
    n = B.node_count
    total = 0.0
    for s in range(n):
        inner = math.fsum(cache.log_psi(*_suffix_ball(B, S, r)) for S in combinations(others, s))
        total += inner / comb(n - 1, s)
    return total / n


def _ball_samples(B: SimpleGraph, enc: bytes, r: int, cfg: CavityConfig, cache: _PsiCache) -> np.ndarray:
    n = B.node_count
    out = np.empty(cfg.ordering_samples)
    for i in range(cfg.ordering_samples):
        rng = np.random.default_rng(np.random.SeedSequence(_seed_words(cfg.seed, enc, i)))
        rank = rng.permutation(n)
        later = [w for w in range(1, n) if rank[w] > rank[0]]
        out[i] = cache.log_psi(*_suffix_ball(B, later, r))
    return out


def local_estimate_ln_t(G: SimpleGraph, H: WeightedGraph, cfg: CavityConfig) -> CertifiedLog:
    """Per-node estimate of ln t(G, H) from r-ball statistics and random orderings.

    error_radius = 2 D kappa^r (locality) + 3 Monte-Carlo standard errors.
    """
    if cfg.r < 0:
        raise PreconditionError("radius must be nonnegative")
    if G.node_count == 0:
        raise PreconditionError("G must have at least one node")
    D = cfg.D if cfg.D is not None else max(G.max_degree, 1)
    if G.max_degree > D:
        raise PreconditionError(f"G has maximum degree {G.max_degree} > D = {D}")
    check_unit_interval(H)
    kappa = locality_constant(H, D)
    if kappa >= 1:
        raise PreconditionError(f"no locality certificate: kappa = 2 D c(H-bar) = {kappa:.6g} >= 1")
    if not cfg.exact_orderings and cfg.ordering_samples < 2:
        raise PreconditionError("at least two ordering samples are needed for an error estimate")
    cache = _PsiCache(H, D)
    contributions = []
    value = 0.0
    variance = 0.0
    for U, mu in histogram(G, cfg.r).items():
        B = U.graph()
        if cfg.exact_orderings:
            if B.node_count > EXACT_ORDERING_MAX_NODES:
                raise PreconditionError(
                    f"exact ordering enumeration limited to balls of {EXACT_ORDERING_MAX_NODES} nodes")
            mean, se, count = _ball_mean_exact(B, cfg.r, cache), 0.0, 0
        else:
            xs = _ball_samples(B, U.encoding, cfg.r, cfg, cache)
            mean = math.fsum(xs) / len(xs)
            se = float(np.std(xs, ddof=1)) / math.sqrt(len(xs))
            count = len(xs)
        contributions.append(BallContribution(U, mu, mean, count, se))
        value += float(mu) * mean
        variance += float(mu) ** 2 * se ** 2
    locality = 2 * D * kappa ** cfg.r
    mc = MC_STANDARD_ERRORS * math.sqrt(variance)
    return CertifiedLog(value, locality + mc, per_node=True, valid=True,
                        details={"kappa": kappa, "locality": locality, "monte_carlo": mc, "D": D,
                                 "r": cfg.r, "contributions": tuple(contributions)})


def psi_locality_gap(K: SimpleGraph, v: int, K2: SimpleGraph, v2: int, H: WeightedGraph, r: int,
                     D: int | None = None, log: bool = False) -> float:
    """|Psi_K(v) - Psi_K2(v2)| (or of their logs) for nodes with isomorphic r-balls."""
    if ball(K, v, r) != ball(K2, v2, r):
        raise PreconditionError("the two r-balls are not isomorphic")
    D = max(K.max_degree, K2.max_degree, 1) if D is None else D
    a, b = log_psi(K, v, H, D), log_psi(K2, v2, H, D)
    if log:
        return abs(a - b)
    return abs(math.exp(a) - math.exp(b))


def hardcore_weighted_graph(lam) -> WeightedGraph:
    """Two spins; spin 1 carries weight lam and two 1-spins may not be adjacent."""
    exact = isinstance(lam, (int, Fraction)) and not isinstance(lam, bool)
    lam = Fraction(lam) if exact else float(lam)
    if lam <= 0:
        raise PreconditionError("lambda must be positive")
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    beta = np.array([[one, one], [one, zero]], dtype=object if exact else float)
    return WeightedGraph([one / (1 + lam), lam / (1 + lam)], beta, exact=exact)

"""Truncated cluster expansion of ln t(G, H) with a certified tail.

ln t(G, H) is the sum over connected induced subgraphs F of G of a
quantity v(F, H) that depends only on the isomorphism type of F.  v(F, H)
collects the Mayer clusters of the polymer system CInd(F) whose polymers
cover all of V(F).  Grouping clusters by the node set they cover, the
Mayer series of CInd(F[S]) for S a subset of V(F) is the sum of the
covered-set contributions over subsets of S, so v(F) follows from those
series by inclusion-exclusion over S.  That holds order by order, so
truncating at m_max commutes with the inversion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .canon import canonical_form, decode_form
from .certified import CertifiedLog
from .config import Budget
from .enumeration import connected_node_sets
from .exceptions import PreconditionError
from .graph import SimpleGraph, WeightedGraph, complement_weights, interaction_norm
from .homcount import z_value
from .polymer import intersection_graph, mayer_orders, mayer_terms

DEFAULT_B = 0.4


@dataclass(frozen=True)
class ExpansionConstants:
    D: int
    b: float
    K: float
    c_bar: float  # interaction norm of the complement weights
    epsilon: float
    valid: bool

    @property
    def threshold(self) -> float:
        """Largest admissible c_bar (exclusive): 1 / (K D)."""
        return 1.0 / (self.K * self.D)


def k_constant(b: float) -> float:
    """(b + e^b) / ln(1 + b e^-b)."""
    if b <= 0:
        raise PreconditionError("b must be positive")
    return (b + math.exp(b)) / math.log1p(b * math.exp(-b))


def check_unit_interval(H: WeightedGraph) -> None:
    if not H.weights_in_unit_interval():
        raise PreconditionError("edge weights of H must lie in [0, 1]")


def expansion_constants(D: int, H: WeightedGraph, b: float = DEFAULT_B) -> ExpansionConstants:
    if D < 1:
        raise PreconditionError("the degree bound D must be at least 1")
    check_unit_interval(H)
    K = k_constant(b)
    c_bar = float(interaction_norm(complement_weights(H)))
    prod = D * K * c_bar
    eps = math.inf if prod == 0 else -math.log(prod)
    return ExpansionConstants(D, b, K, c_bar, eps, prod < 1)


def require_valid(c: ExpansionConstants) -> None:
    if not c.valid:
        raise PreconditionError(
            f"cluster expansion not certified: c(H-bar) = {c.c_bar:.6g} is not below "
            f"1/(K D) = {c.threshold:.6g} (K = {c.K:.6g}, D = {c.D})")


class ClusterContext:
    """Caches shared by every v(F, H) evaluation with one target H."""

    def __init__(self, H: WeightedGraph, m_max: int, budget: Budget | None = None):
        self.H = H
        self.Hbar = complement_weights(H)
        self.m_max = m_max
        self.budget = budget
        self.exact = H.exact
        self.density_memo: dict = {}
        self.z_memo: dict = {}
        self.series_memo: dict = {}
        self.v_memo: dict = {}

    def zero(self):
        return Fraction(0) if self.exact else 0.0

    def activity(self, g: SimpleGraph, key: bytes | None = None):
        key = canonical_form(g) if key is None else key
        if key not in self.z_memo:
            self.z_memo[key] = z_value(g, self.Hbar, self.density_memo, self.budget)
        return self.z_memo[key]

    def polymers(self, F: SimpleGraph):
        sets = [s for s in connected_node_sets(F, F.node_count, min_nodes=2)]
        acts = [self.activity(F.induced_subgraph(s)) for s in sets]
        return sets, acts

    def truncated_log(self, F: SimpleGraph):
        """Mayer series of the polymer system CInd(F), summed through m_max."""
        if F.edge_count == 0:
            return self.zero()
        key = canonical_form(F)
        if key not in self.series_memo:
            sets, acts = self.polymers(F)
            orders = mayer_orders(intersection_graph(sets), acts, self.m_max, "series", self.budget)
            self.series_memo[key] = sum(orders, self.zero())
        return self.series_memo[key]


def _v_series(F: SimpleGraph, ctx: ClusterContext):
    n = F.node_count
    total = ctx.zero()
    for size in range(2, n + 1):
        sign = -1 if (n - size) % 2 else 1
        for S in combinations(range(n), size):
            val = ctx.truncated_log(F.induced_subgraph(S))
            total += -val if sign < 0 else val
    return total


def _v_terms(F: SimpleGraph, ctx: ClusterContext):
    sets, acts = ctx.polymers(F)
    full = frozenset(range(F.node_count))
    total = ctx.zero()
    for term in mayer_terms(intersection_graph(sets), acts, ctx.m_max, budget=ctx.budget):
        if frozenset().union(*(sets[i] for i in term.polymers)) == full:
            total += term.contribution
    return total


def cluster_v(F: SimpleGraph, H: WeightedGraph, m_max: int, method: str = "series",
              context: ClusterContext | None = None):
    """v(F, H) truncated at cluster order m_max.

    Zero for disconnected F and for a single node.  ``method='terms'``
    sums the covering Mayer terms directly (slow; for cross-checks).
    """
    if m_max < 1:
        raise PreconditionError("m_max must be at least 1")
    ctx = context if context is not None else ClusterContext(H, m_max)
    if F.node_count < 2 or not F.is_connected():
        return ctx.zero()
    if method == "terms":
        return _v_terms(F, ctx)
    if method != "series":
        raise PreconditionError(f"unknown method {method!r}; expected 'series' or 'terms'")
    key = canonical_form(F)
    if key not in ctx.v_memo:
        ctx.v_memo[key] = _v_series(F, ctx)
    return ctx.v_memo[key]


def induced_type_counts(G: SimpleGraph, k: int) -> dict:
    """ind_0 counts: canonical form -> number of connected induced copies, 2..k nodes."""
    counts: dict = {}
    for s in connected_node_sets(G, k, min_nodes=2):
        key = canonical_form(G.induced_subgraph(s))
        counts[key] = counts.get(key, 0) + 1
    return counts


def error_radius(consts: ExpansionConstants, k: int) -> float:
    """Per-node tail radius b e^{-eps (k+1)} of the truncation at type size k."""
    return consts.b * math.exp(-consts.epsilon * (k + 1))


def truncated_ln_t(G: SimpleGraph, H: WeightedGraph, k: int, b: float = DEFAULT_B,
                   D: int | None = None, m_max: int | None = None,
                   context: ClusterContext | None = None) -> CertifiedLog:
    """Per-node ln t(G, H) from connected induced types with at most k nodes.

    Refuses (PreconditionError) unless c(H-bar) < 1/(K D).
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if G.node_count == 0:
        raise PreconditionError("G must have at least one node")
    D = max(G.max_degree, 1) if D is None else D
    if G.max_degree > D:
        raise PreconditionError(f"G has maximum degree {G.max_degree} > D = {D}")
    consts = expansion_constants(D, H, b)
    require_valid(consts)
    m_max = 2 * k if m_max is None else m_max
    if m_max < k:
        raise PreconditionError("m_max must be at least k for the tail bound to apply")
    ctx = context if context is not None and context.m_max == m_max else ClusterContext(H, m_max)
    total = ctx.zero()
    for form, count in sorted(induced_type_counts(G, k).items()):
        total += count * cluster_v(decode_form(form), H, m_max, context=ctx)
    value = total / G.node_count if not ctx.exact else Fraction(total) / G.node_count
    return CertifiedLog(value, error_radius(consts, k), per_node=True, valid=True,
                        details={"K": consts.K, "epsilon": consts.epsilon, "c_bar": consts.c_bar,
                                 "D": D, "k": k, "m_max": m_max, "b": b})


@dataclass(frozen=True)
class ConvergenceRow:
    index: int
    nodes: int
    value: float
    error_radius: float
    delta: float  # difference to the previous row (nan for the first)


def ln_t_convergence_table(graphs, H: WeightedGraph, k: int, b: float = DEFAULT_B,
                           D: int | None = None) -> list:
    """Truncated per-node values along a graph sequence with successive differences."""
    graphs = list(graphs)
    if D is None:
        D = max(max(g.max_degree for g in graphs), 1)
    ctx = ClusterContext(H, 2 * k)
    rows, prev = [], None
    for i, g in enumerate(graphs):
        res = truncated_ln_t(g, H, k, b, D, context=ctx)
        val = float(res.value)
        rows.append(ConvergenceRow(i, g.node_count, val, res.error_radius,
                                   math.nan if prev is None else val - prev))
        prev = val
    return rows


def convergence_condition_margin(G: SimpleGraph, H: WeightedGraph, b: float = DEFAULT_B,
                                 D: int | None = None) -> float:
    """max over nodes i of sum_{F in CInd(G), i in F} |z~_F| e^{b|F|}; certified when <= b."""
    D = max(G.max_degree, 1) if D is None else D
    consts = expansion_constants(D, H, b)
    require_valid(consts)
    ctx = ClusterContext(H, 1)
    per_node = [0.0] * G.node_count
    for s in connected_node_sets(G, G.node_count, min_nodes=2):
        z = abs(float(ctx.activity(G.induced_subgraph(s))))
        if z == 0:
            continue
        w = math.exp(consts.epsilon * (len(s) - 1)) * z * math.exp(b * len(s))
        for i in s:
            per_node[i] += w
    return max(per_node, default=0.0)

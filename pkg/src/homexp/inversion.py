"""Recovering subgraph counts from partition-function values.

For each connected graph F_i with 2..m nodes the target H_i is the looped
complement of F_i padded with isolated nodes to q nodes.  For large q,
ln t(G, H_j) is nearly linear in the subgraph counts inj_0(F_i, G) with
coefficients u(F_i, H_j); inverting that N x N matrix recovers the counts.

u(F, H) collects the Mayer clusters of connected subgraphs of F (polymers
meet when they share a node) whose union is all of F, with activities
t(J, H - 1).  Grouping clusters by their union, the truncated Mayer series
of the polymer system on each edge subset of F gives u(F, H) by
inclusion-exclusion over edge subsets.  Without truncation the same
inclusion-exclusion applied to ln t gives u exactly.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

import numpy as np

from ._linalg import det_exact
from .canon import canonical_form, canonical_graph
from .config import Budget
from .enumeration import connected_node_sets, connected_spanning_edge_sets, iter_family
from .exceptions import InternalConsistencyError, PreconditionError
from .graph import SimpleGraph, WeightedGraph, collapse_twins
from .homcount import hom_count, inj_ind_surj_aut, log_density
from .polymer import intersection_graph, mayer_orders

FAMILY_MAX_M = 5
CONDITION_WARN = 1e12


@dataclass(frozen=True)
class GraphFamily:
    m: int
    members: tuple  # canonical representatives, ordered by (nodes, edges, canonical form)

    def __len__(self):
        return len(self.members)

    def names(self) -> list:
        return [graph_label(F) for F in self.members]


def graph_label(F: SimpleGraph) -> str:
    """Short readable name, e.g. ``n3e2:01,12``."""
    edges = ",".join(f"{u}{v}" if F.node_count <= 10 else f"{u}-{v}" for u, v in F.sorted_edges())
    return f"n{F.node_count}e{F.edge_count}:{edges}"


def build_family(m: int) -> GraphFamily:
    """All connected simple graphs with 2..m nodes up to isomorphism."""
    if not 2 <= m <= FAMILY_MAX_M:
        raise PreconditionError(f"m must be between 2 and {FAMILY_MAX_M}")
    found: dict = {}
    for n in range(2, m + 1):
        pairs = list(combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            G = SimpleGraph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
            if G.edge_count >= n - 1 and G.is_connected():
                key = canonical_form(G)
                if key not in found:
                    found[key] = canonical_graph(G)
    order = sorted(found, key=lambda k: (found[k].node_count, found[k].edge_count, k))
    return GraphFamily(m, tuple(found[k] for k in order))


class HomMatrices(NamedTuple):
    inj: np.ndarray
    surj: np.ndarray
    hom: np.ndarray
    aut: np.ndarray  # diagonal matrix


def hom_matrices(family: GraphFamily, budget: Budget | None = None) -> HomMatrices:
    """Integer matrices [inj(F_i, F_j)], [surj(F_i, F_j)], [hom(F_i, F_j)] and diag aut(F_i).

    Checks M_hom = M_surj D_aut^-1 M_inj exactly and that all three are nonsingular.
    """
    N = len(family)
    inj = np.zeros((N, N), dtype=object)
    surj = np.zeros((N, N), dtype=object)
    hom = np.zeros((N, N), dtype=object)
    aut = np.zeros((N, N), dtype=object)
    for i, Fi in enumerate(family.members):
        for j, Fj in enumerate(family.members):
            c = inj_ind_surj_aut(Fi, Fj, budget)
            inj[i, j], surj[i, j], hom[i, j] = c.inj, c.surj, c.hom
            if i == j:
                aut[i, i] = c.aut
    inv_aut = np.zeros((N, N), dtype=object)
    inv_aut[:] = Fraction(0)
    for i in range(N):
        inv_aut[i, i] = Fraction(1, aut[i, i])
    if not np.array_equal(surj.dot(inv_aut).dot(inj), hom):
        raise InternalConsistencyError("M_hom differs from M_surj D_aut^-1 M_inj")
    for name, M in (("inj", inj), ("surj", surj), ("hom", hom)):
        if det_exact(M.tolist()) == 0:
            raise InternalConsistencyError(f"M_{name} is singular")
    return HomMatrices(inj, surj, hom, aut)


def build_targets(family: GraphFamily, q: int, delta=None, collapse: bool = False) -> list:
    """Looped complements of the family members padded to q nodes.

    ``delta`` replaces the zero weights by 1 - delta; ``collapse`` merges the
    padding nodes (twins) into one node carrying their total weight.
    """
    if q <= family.m:
        raise PreconditionError("q must exceed m")
    exact = delta is None or isinstance(delta, (int, Fraction))
    one = Fraction(1) if exact else 1.0
    low = 0 * one if delta is None else one - delta
    if delta is not None and not 0 < delta <= 1:
        raise PreconditionError("delta must lie in (0, 1]")
    out = []
    for F in family.members:
        beta = np.empty((q, q), dtype=object if exact else float)
        beta[:] = one
        for u, v in F.edges:
            beta[u, v] = beta[v, u] = low
        H = WeightedGraph([one] * q, beta, exact=exact)
        out.append(collapse_twins(H)[0] if collapse else H)
    return out


# -- u coefficients --------------------------------------------------------------
def _edge_subgraph(F: SimpleGraph, edges) -> SimpleGraph:
    nodes = sorted({x for e in edges for x in e})
    index = {v: i for i, v in enumerate(nodes)}
    return SimpleGraph(len(nodes), [(index[a], index[b]) for a, b in edges])


class _UContext:
    """Memoized truncated series for one target (built from ``base``)."""

    def __init__(self, base: SimpleGraph, q: int, low, k_max: int):
        self.base, self.q, self.k_max = base, q, k_max
        self.step = low - 1  # the weight of H - 1 on edges of F_i
        self.exact = isinstance(low, (int, Fraction))
        self.memo: dict = {}

    def activity(self, J: SimpleGraph):
        h = hom_count(J, self.base)
        if self.exact:
            return Fraction(h, self.q ** J.node_count) * Fraction(self.step) ** J.edge_count
        return h * float(self.step) ** J.edge_count / float(self.q) ** J.node_count

    def truncated_log(self, S: SimpleGraph):
        if S.edge_count == 0:
            return 0
        key = canonical_form(S)
        if key not in self.memo:
            polys = list(iter_family(S, "Con", S.node_count))
            acts = [self.activity(P.as_graph()) for P in polys]
            orders = mayer_orders(intersection_graph([P.nodes for P in polys]), acts, self.k_max)
            self.memo[key] = sum(orders, Fraction(0) if self.exact else 0.0)
        return self.memo[key]


def u_value(F: SimpleGraph, base: SimpleGraph, q: int, k_max: int, delta=None, context=None):
    """u(F, H) for the target H built from ``base``, cluster series truncated at k_max.

    Exact rational unless delta is a float.
    """
    low = 0 if delta is None else 1 - delta
    ctx = context or _UContext(base, q, low, k_max)
    edges = F.sorted_edges()
    total = 0
    for r in range(1, len(edges) + 1):
        sign = -1 if (len(edges) - r) % 2 else 1
        for sub in combinations(edges, r):
            total += sign * ctx.truncated_log(_edge_subgraph(F, sub))
    return total


def u_value_exact(F: SimpleGraph, H: WeightedGraph) -> float:
    """u(F, H) = sum over edge subsets E' of (-1)^{|E - E'|} ln t((V, E'), H), untruncated."""
    Hc = collapse_twins(H)[0]
    edges = F.sorted_edges()
    total = 0.0
    for r in range(1, len(edges) + 1):
        sign = -1 if (len(edges) - r) % 2 else 1
        for sub in combinations(edges, r):
            total += sign * log_density(_edge_subgraph(F, sub), Hc)
    return total


def u_coefficients(family: GraphFamily, q: int, k_max: int | None = None, delta=None,
                   method: str = "series") -> np.ndarray:
    """Matrix U with U[i, j] = u(F_i, H_j).

    ``series`` truncates the cluster series at k_max (default N) and is exact
    rational for rational delta; ``exact`` uses logarithms of exact densities.
    """
    N = len(family)
    k_max = N if k_max is None else k_max
    targets = build_targets(family, q, delta) if method == "exact" else None
    low = 0 if delta is None else 1 - delta
    exact = method == "series" and not isinstance(low, float)
    U = np.zeros((N, N), dtype=object if exact else float)
    for j, Fj in enumerate(family.members):
        if method == "series":
            ctx = _UContext(Fj, q, low, k_max)
            for i, Fi in enumerate(family.members):
                val = u_value(Fi, Fj, q, k_max, delta, ctx)
                U[i, j] = Fraction(val) if exact else float(val)
        elif method == "exact":
            for i, Fi in enumerate(family.members):
                U[i, j] = u_value_exact(Fi, targets[j])
        else:
            raise PreconditionError(f"unknown method {method!r}; expected 'series' or 'exact'")
    return U


# -- recovery --------------------------------------------------------------------
@dataclass(frozen=True)
class InversionSystem:
    family: GraphFamily
    q: int
    targets: tuple  # twin-collapsed targets used for evaluation
    u_matrix: np.ndarray
    w_matrix: np.ndarray
    condition: float
    delta: object = None


def _exact_inverse(U: np.ndarray) -> np.ndarray:
    N = U.shape[0]
    A = [[Fraction(U[i, j]) for j in range(N)] + [Fraction(int(i == k)) for k in range(N)] for i in range(N)]
    for c in range(N):
        p = next((r for r in range(c, N) if A[r][c] != 0), None)
        if p is None:
            raise InternalConsistencyError("u matrix is singular")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(N):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return np.array([row[N:] for row in A], dtype=object)


def inversion_system(m: int, q: int, k_max: int | None = None, delta=None, method: str = "series") -> InversionSystem:
    family = build_family(m)
    U = u_coefficients(family, q, k_max, delta, method)
    Uf = U.astype(float)
    cond = float(np.linalg.cond(Uf))
    if U.dtype == object:
        W = _exact_inverse(U).astype(float)
    else:
        W = np.linalg.inv(Uf)
    if cond > CONDITION_WARN:
        warnings.warn(f"u matrix is ill-conditioned (condition number {cond:.3g})", RuntimeWarning)
    targets = tuple(build_targets(family, q, delta, collapse=True))
    return InversionSystem(family, q, targets, Uf, W, cond, delta)


@dataclass(frozen=True)
class Recovery:
    estimates: tuple  # recovered inj_0(F_i, G)
    log_densities: tuple  # ln t(G, H_j)
    residual_scale: float


def recover_counts(G: SimpleGraph, system: InversionSystem) -> Recovery:
    """inj_0(F_i, G) estimated as sum_j w_ji ln t(G, H_j)."""
    logs = [log_density(G, H.to_float()) for H in system.targets]
    if any(math.isinf(x) for x in logs):
        raise PreconditionError("t(G, H_j) vanished; the targets should always admit a homomorphism")
    est = [math.fsum(system.w_matrix[j, i] * logs[j] for j in range(len(logs))) for i in range(len(logs))]
    # omitted types F with m + 1 nodes have u(F, H_j) ~ q^-(m+1) hom(F, F_j) against w = O(q^m),
    # so each estimate carries an O(|G| / q) residual
    return Recovery(tuple(est), tuple(logs), G.node_count / system.q)


def subgraph_copies(F: SimpleGraph, G: SimpleGraph) -> int:
    """inj_0(F, G): number of subgraphs of G isomorphic to F (F connected)."""
    if not F.is_connected():
        raise PreconditionError("F must be connected")
    if F.node_count == 1:
        return G.node_count
    target = canonical_form(F)
    total = 0
    for s in connected_node_sets(G, F.node_count, min_nodes=F.node_count):
        nodes = sorted(s)
        sub = G.induced_subgraph(nodes)
        if sub.edge_count < F.edge_count:
            continue
        for es in connected_spanning_edge_sets(range(len(nodes)), sub.edges):
            if len(es) == F.edge_count and canonical_form(SimpleGraph(len(nodes), es)) == target:
                total += 1
    return total

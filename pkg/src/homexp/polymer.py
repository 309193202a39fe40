"""Stable-set polynomials, abstract polymer systems and the Mayer expansion.

A polymer system is a simple graph whose nodes carry activities; two
polymers are incompatible when adjacent (a polymer is always incompatible
with itself).  Its partition function is the multivariate stable-set
polynomial and the Mayer expansion is the Taylor series of its logarithm.

The Mayer series is computed in two independent ways:

``series``  The order-m part of ln stab(G, x) is the coefficient of s^m in
            ln stab(G, s x).  The graded stable-set counts are exact
            polynomials in s, and the logarithm of a power series with
            constant term 1 follows from a triangular recurrence.
``terms``   Direct summation over multisets of polymers with connected
            overlap graph, each weighted by the Crapo invariant of the
            blown-up sequence graph divided by the multiplicity factorials.

Error radii come from Dobrushin's criterion applied to the rescaled
activities rho |x|: when it holds with bound B_rho, the absolute order-m
sums A_m satisfy sum_m rho^m A_m <= B_rho, so the tail beyond m_max is at
most rho^-(m_max+1) (B_rho - sum_{m<=m_max} rho^m A_m).
"""
from __future__ import annotations

import math
from fractions import Fraction
from math import factorial
from typing import NamedTuple, Sequence

import numpy as np

from .canon import canonical_form
from .certified import CertifiedLog
from .config import Budget, get_budget
from .enumeration import connected_node_sets, enumerate_family
from .exceptions import PreconditionError, ResourceError
from .graph import SimpleGraph, WeightedGraph, complement_weights
from .homcount import z_value
from .invariants import crapo_invariant

# Geometric grid of activity rescalings tried when certifying a tail.
RHO_STEP = 1.25
RHO_STEPS = 60
# float mode: allowance for rounding in the series arithmetic, per unit of the absolute series
ROUNDING_UNIT = 64 * np.finfo(float).eps


def _vector(x: Sequence, n: int) -> tuple[list, bool]:
    vals = list(x)
    if len(vals) != n:
        raise PreconditionError(f"activity vector has {len(vals)} entries, graph has {n} nodes")
    exact = all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in vals)
    if exact:
        return [Fraction(v) for v in vals], True
    return [float(v) for v in vals], False


# -- stable sets -------------------------------------------------------------
def _series_connected(nodes: list, adj, x, M: int, budget: Budget, exact: bool) -> list:
    """Graded stable-set sums of the graph induced on ``nodes`` (truncated at degree M)."""
    index = {v: i for i, v in enumerate(nodes)}
    closed = [0] * len(nodes)
    for v, i in index.items():
        mask = 1 << i
        for w in adj[v]:
            if w in index:
                mask |= 1 << index[w]
        closed[i] = mask
    xs = [x[v] for v in nodes]
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    memo: dict = {}

    def rec(avail: int) -> list:
        if avail == 0:
            return [one]
        hit = memo.get(avail)
        if hit is not None:
            return hit
        if len(memo) >= budget.enum_cap:
            raise ResourceError(
                f"stable-set enumeration exceeded enum_cap={budget.enum_cap}", "enum_cap", budget.enum_cap)
        i = (avail & -avail).bit_length() - 1
        out = list(rec(avail & ~(1 << i)))
        inc = rec(avail & ~closed[i])
        xi = xs[i]
        for d, c in enumerate(inc[:M]):
            if d + 1 < len(out):
                out[d + 1] = out[d + 1] + xi * c
            else:
                out.append(xi * c)
        while len(out) > 1 and out[-1] == zero:
            out.pop()
        memo[avail] = out
        return out

    return rec((1 << len(nodes)) - 1)


def _pmul_trunc(a: list, b: list, M: int, zero) -> list:
    out = [zero] * min(len(a) + len(b) - 1, M + 1)
    for i, u in enumerate(a):
        if i > M:
            break
        for j, w in enumerate(b):
            if i + j > M:
                break
            out[i + j] = out[i + j] + u * w
    return out


def stable_set_series(G: SimpleGraph, x: Sequence, max_size: int | None = None,
                      budget: Budget | None = None) -> list:
    """[s_0, s_1, ...] with s_j the sum over stable sets of size j of the activity products."""
    budget = budget or get_budget()
    xs, exact = _vector(x, G.node_count)
    M = G.node_count if max_size is None else max_size
    zero = Fraction(0) if exact else 0.0
    out = [Fraction(1) if exact else 1.0]
    for comp in G.components():
        part = _series_connected(sorted(comp), G.adjacency, xs, M, budget, exact)
        out = _pmul_trunc(out, part, M, zero)
    return out + [zero] * (M + 1 - len(out))


def stab_polynomial(G: SimpleGraph, x: Sequence, budget: Budget | None = None):
    """Sum over stable sets S of prod_{i in S} x_i."""
    return sum(stable_set_series(G, x, budget=budget))


def _log_series(s: list, M: int, exact: bool) -> list:
    """Coefficients c_1..c_M of ln(1 + s_1 t + s_2 t^2 + ...)."""
    c = [None] * (M + 1)
    for m in range(1, M + 1):
        acc = s[m] * m
        for j in range(1, m):
            acc = acc - j * c[j] * s[m - j]
        c[m] = acc / m if not exact else Fraction(acc) / m
    return c[1:]


# -- Mayer terms -------------------------------------------------------------
class MayerTerm(NamedTuple):
    order: int
    polymers: tuple  # nondecreasing, repeats allowed
    crapo: int  # Crapo invariant of the sequence graph
    multiplicity: int  # number of sequences giving this multiset
    activity: object  # product of the activities

    @property
    def contribution(self):
        return self.multiplicity * self.crapo * self.activity / factorial(self.order)


def sequence_graph(G: SimpleGraph, seq: Sequence) -> SimpleGraph:
    """Positions i, j adjacent iff seq[i] and seq[j] are equal or adjacent in G."""
    m = len(seq)
    return SimpleGraph(m, [(i, j) for i in range(m) for j in range(i + 1, m)
                           if seq[i] == seq[j] or G.has_edge(seq[i], seq[j])])


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def mayer_terms(G: SimpleGraph, x: Sequence, m_max: int, memo: dict | None = None,
                budget: Budget | None = None) -> list:
    """Every nonzero Mayer term of order <= m_max, one per polymer multiset.

    Only multisets whose support is connected in G are produced; the others
    have a disconnected sequence graph and a vanishing Crapo invariant.
    """
    if m_max < 1:
        raise PreconditionError("m_max must be at least 1")
    budget = budget or get_budget()
    xs, exact = _vector(x, G.node_count)
    memo = {} if memo is None else memo
    out = []
    for support in connected_node_sets(G, m_max):
        supp = sorted(support)
        for m in range(len(supp), m_max + 1):
            for mult in _compositions(m, len(supp)):
                seq = tuple(v for v, k in zip(supp, mult) for _ in range(k))
                SG = sequence_graph(G, seq)
                key = canonical_form(SG)
                if key not in memo:
                    memo[key] = crapo_invariant(SG)
                count = factorial(m)
                activity = Fraction(1) if exact else 1.0
                for v, k in zip(supp, mult):
                    count //= factorial(k)
                    activity = activity * xs[v] ** k
                out.append(MayerTerm(m, seq, memo[key], count, activity))
                if len(out) > budget.enum_cap:
                    raise ResourceError(f"Mayer term count exceeded enum_cap={budget.enum_cap}",
                                        "enum_cap", budget.enum_cap)
    return out


def mayer_orders(G: SimpleGraph, x: Sequence, m_max: int, method: str = "series",
                 budget: Budget | None = None) -> list:
    """[c_1, ..., c_{m_max}], the order-by-order sums of the Mayer series."""
    if m_max < 1:
        raise PreconditionError("m_max must be at least 1")
    xs, exact = _vector(x, G.node_count)
    if method == "series":
        s = stable_set_series(G, xs, m_max, budget)
        return _log_series(s, m_max, exact)
    if method == "terms":
        zero = Fraction(0) if exact else 0.0
        orders = [zero] * m_max
        for term in mayer_terms(G, xs, m_max, budget=budget):
            orders[term.order - 1] += term.contribution
        return orders
    raise PreconditionError(f"unknown method {method!r}; expected 'series' or 'terms'")


# -- Dobrushin certificate ---------------------------------------------------
class DobrushinCertificate(NamedTuple):
    holds: bool
    bound: float  # bound on |ln stab|; inf when the certificate fails


def _closed_adjacency(G: SimpleGraph) -> np.ndarray:
    A = np.eye(G.node_count)
    for u, v in G.edges:
        A[u, v] = A[v, u] = 1.0
    return A


def dobrushin_certificate(G: SimpleGraph, x: Sequence, b: Sequence) -> DobrushinCertificate:
    """Check sum_{j in N[i]} ln(1 + |x_j| e^{b_j}) <= b_i for every node i."""
    n = G.node_count
    xa = np.abs(np.array([float(v) for v in x], dtype=float))
    ba = np.array([float(v) for v in b], dtype=float)
    if xa.shape != (n,) or ba.shape != (n,):
        raise PreconditionError("x and b need one entry per node")
    if np.any(ba < 0):
        raise PreconditionError("Dobrushin weights must be nonnegative")
    terms = np.log1p(xa * np.exp(ba))
    holds = bool(np.all(_closed_adjacency(G) @ terms <= ba))
    return DobrushinCertificate(holds, float(terms.sum()) if holds else math.inf)


def dobrushin_weights(G: SimpleGraph, x: Sequence, max_iter: int = 5000, cap: float = 50.0):
    """Smallest weights satisfying the criterion, found by monotone iteration, or None.

    Starting from b = 0 the map b -> sum_{N[i]} ln(1 + |x_j| e^{b_j}) increases
    to its least fixed point whenever any admissible b exists.  The limit is
    inflated slightly and re-checked, so a returned vector always certifies.
    """
    n = G.node_count
    xa = np.abs(np.array([float(v) for v in x], dtype=float))
    if n == 0:
        return np.zeros(0)
    A = _closed_adjacency(G)
    b = np.zeros(n)
    for _ in range(max_iter):
        nxt = A @ np.log1p(xa * np.exp(b))
        if np.any(nxt > cap):
            return None
        if np.max(np.abs(nxt - b)) <= 1e-14 * (1.0 + np.max(nxt)):
            b = nxt
            break
        b = nxt
    else:
        return None
    b = b * (1 + 1e-9) + 1e-12
    return b if dobrushin_certificate(G, xa, b).holds else None


def mayer_tail_bound(G: SimpleGraph, x: Sequence, m_max: int, abs_orders: Sequence | None = None) -> tuple:
    """Certified bound on sum_{m > m_max} |order-m terms|, and the rescaling used.

    Returns ``(math.inf, None)`` when Dobrushin's criterion fails even at rho = 1.
    """
    xa = [abs(float(v)) for v in x]
    if abs_orders is None:
        neg = [-v for v in xa]
        abs_orders = [-c for c in mayer_orders(G, neg, m_max)]
    A = [max(0.0, float(a)) for a in abs_orders]
    best, best_rho = math.inf, None
    rho = 1.0
    for _ in range(RHO_STEPS):
        scaled = [rho * v for v in xa]
        b = dobrushin_weights(G, scaled)
        if b is None:
            break
        B = dobrushin_certificate(G, scaled, b).bound
        head = sum(a * rho ** (m + 1) for m, a in enumerate(A))
        tail = max(B - head, 0.0) * rho ** -(m_max + 1)
        # absorb float rounding in B and the head sum
        tail += 1e-12 * B * rho ** -(m_max + 1)
        if tail < best:
            best, best_rho = tail, rho
        rho *= RHO_STEP
    return best, best_rho


def mayer_log_stab(G: SimpleGraph, x: Sequence, m_max: int, method: str = "series",
                   certify: bool = True, budget: Budget | None = None) -> CertifiedLog:
    """Partial Mayer sum of ln stab(G, x) through order m_max, with a tail radius."""
    xs, exact = _vector(x, G.node_count)
    orders = mayer_orders(G, xs, m_max, method, budget)
    value = sum(orders, Fraction(0) if exact else 0.0)
    radius, rho = math.inf, None
    if certify:
        neg = [-abs(float(v)) for v in xs]
        abs_orders = [-c for c in mayer_orders(G, neg, m_max, "series", budget)]
        radius, rho = mayer_tail_bound(G, xs, m_max, abs_orders)
        if not exact and math.isfinite(radius):
            scale = sum(abs(float(a)) for a in abs_orders) + abs(value)
            radius += ROUNDING_UNIT * (G.node_count + m_max) * scale
    return CertifiedLog(value, radius, per_node=False, valid=math.isfinite(radius),
                        details={"orders": tuple(orders), "rho": rho, "method": method})


# -- polymer systems -----------------------------------------------------------
def intersection_graph(node_sets: Sequence) -> SimpleGraph:
    sets = [frozenset(s) for s in node_sets]
    n = len(sets)
    return SimpleGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if sets[i] & sets[j]])


class PolymerSystem(NamedTuple):
    polymers: tuple  # Subgraph members of CInd(G)
    polymer_graph: SimpleGraph
    activities: tuple

    def stab(self, budget: Budget | None = None):
        return stab_polynomial(self.polymer_graph, self.activities, budget)

    def log_stab(self, m_max: int, method: str = "series", certify: bool = True) -> CertifiedLog:
        return mayer_log_stab(self.polymer_graph, self.activities, m_max, method, certify)


def polymer_system_from(G: SimpleGraph, H: WeightedGraph, max_polymer_nodes: int | None = None,
                        memo: dict | None = None, budget: Budget | None = None) -> PolymerSystem:
    """Connected induced subgraphs of G as polymers with activity z(F, complement of H).

    Untruncated, stab of the result equals t(G, H).  ``memo`` caches
    activities by canonical form and may be reused with the same H.
    """
    k = G.node_count if max_polymer_nodes is None else max_polymer_nodes
    family = enumerate_family(G, "CInd", max(k, 1), cap=(budget or get_budget()).enum_cap)
    Hbar = complement_weights(H)
    memo = {} if memo is None else memo
    dens: dict = {}
    acts = []
    for F in family.members:
        g = F.as_graph()
        key = canonical_form(g)
        if key not in memo:
            memo[key] = z_value(g, Hbar, dens, budget)
        acts.append(memo[key])
    return PolymerSystem(family.members, intersection_graph([F.nodes for F in family.members]), tuple(acts))

"""Homomorphism counts, densities, z(G, H), random maps and Gibbs measures.

Two summation engines are provided.  ``brute`` walks all |V(H)|^|F| maps
and is the reference oracle.  ``elimination`` (the default) performs the
same sum by eliminating the nodes of F one at a time in a greedy min-fill
order; it is exact in exact mode and works in the log domain in float mode,
so it reaches graphs the brute force cannot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from .canon import canonical_form
from .config import Budget, get_budget
from .enumeration import connected_spanning_edge_sets
from .exceptions import DegenerateDistributionError, PreconditionError, ResourceError
from .graph import SimpleGraph, WeightedGraph, weighted_from_simple


@dataclass(frozen=True)
class HomCounts:
    hom: int
    inj: int
    ind: int
    surj: int
    aut: int  # automorphisms of the source graph

    @property
    def inj0(self) -> Fraction:
        return Fraction(self.inj, self.aut)

    @property
    def ind0(self) -> Fraction:
        return Fraction(self.ind, self.aut)


@dataclass(frozen=True)
class GibbsWeight:
    phi: tuple
    weight: object


@dataclass(frozen=True)
class GibbsTable:
    maps: tuple
    probabilities: tuple
    partition: object

    def marginal(self, v: int, q: int) -> list:
        out = [0] * q
        for phi, p in zip(self.maps, self.probabilities):
            out[phi[v]] += p
        return out


def _as_target(target) -> tuple[WeightedGraph, bool]:
    if isinstance(target, WeightedGraph):
        return target, False
    if isinstance(target, SimpleGraph):
        return weighted_from_simple(target, exact=True), True
    raise TypeError(f"unsupported target type {type(target).__name__}")


# -- variable elimination ------------------------------------------------------
def _elimination_order(F: SimpleGraph) -> list:
    nbrs = {v: set(F.neighbors(v)) for v in F.nodes()}
    order = []
    while nbrs:
        def cost(v):
            nb = nbrs[v]
            fill = sum(1 for a in nb for b in nb if a < b and b not in nbrs[a])
            return (fill, len(nb), v)
        v = min(nbrs, key=cost)
        nb = nbrs.pop(v)
        for a in nb:
            nbrs[a].discard(v)
            nbrs[a].update(nb - {a})
        order.append(v)
    return order


def _support_blocks(H: WeightedGraph) -> list:
    """Node sets of the connected components of H's edge support (loops ignored)."""
    q = H.q
    beta = np.asarray(H.beta)
    parent = list(range(q))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for i in range(q):
        for j in range(i + 1, q):
            if beta[i, j] != 0:
                parent[find(i)] = find(j)
    blocks: dict = {}
    for i in range(q):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values())


def _signed_log_sum(terms):
    terms = [(s, la) for s, la in terms if s != 0]
    if not terms:
        return 0, -math.inf
    top = max(la for _, la in terms)
    total = sum(s * math.exp(la - top) for s, la in terms)
    if total == 0:
        return 0, -math.inf
    return (1 if total > 0 else -1), top + math.log(abs(total))


def _eliminate(F: SimpleGraph, H: WeightedGraph, budget: Budget):
    """Return ``(sign, log_abs)`` in float mode or the exact sum in exact mode.

    A connected F maps into a single component of H's edge support, so when
    that support splits, each component of F is summed block by block.
    """
    blocks = _support_blocks(H)
    if len(blocks) == 1 or F.edge_count == 0:
        return _eliminate_dense(F, H, budget)
    alpha, beta = np.asarray(H.alpha), np.asarray(H.beta)
    parts = [WeightedGraph(list(alpha[b]), beta[np.ix_(b, b)], exact=H.exact) for b in blocks]
    comps = [F.induced_subgraph(c) for c in F.components()]
    if H.exact:
        total = Fraction(1)
        for C in comps:
            total *= sum((_eliminate_dense(C, P, budget) for P in parts), Fraction(0))
        return total
    sign, log_abs = 1, 0.0
    for C in comps:
        s, la = _signed_log_sum(_eliminate_dense(C, P, budget) for P in parts)
        if s == 0:
            return 0, -math.inf
        sign, log_abs = sign * s, log_abs + la
    return sign, log_abs


def _eliminate_dense(F: SimpleGraph, H: WeightedGraph, budget: Budget):
    q = H.q
    exact = H.exact
    factors = [((v,), H.alpha) for v in F.nodes()]
    factors += [((u, v), H.beta) for u, v in F.sorted_edges()]
    log_scale = 0.0
    for v in _elimination_order(F):
        mine = [f for f in factors if v in f[0]]
        factors = [f for f in factors if v not in f[0]]
        scope = sorted({x for f in mine for x in f[0]})
        if q ** len(scope) > budget.tensor_cap:
            raise ResourceError(
                f"elimination table of {q}^{len(scope)} entries exceeds tensor_cap={budget.tensor_cap}",
                "tensor_cap", budget.tensor_cap)
        prod = None
        for vars_, arr in mine:
            shape = [q if x in vars_ else 1 for x in scope]
            part = np.reshape(arr, shape)
            prod = part if prod is None else prod * part
        table = prod.sum(axis=scope.index(v))
        if not exact:
            peak = float(np.max(np.abs(table))) if table.size else 0.0
            if peak == 0.0:
                return 0, -math.inf
            table = table / peak
            log_scale += math.log(peak)
        factors.append((tuple(x for x in scope if x != v), table))
    total = Fraction(1) if exact else 1.0
    for _, arr in factors:
        total = total * (arr[()] if isinstance(arr, np.ndarray) else arr)
    if exact:
        return total
    if total == 0:
        return 0, -math.inf
    return (1 if total > 0 else -1), log_scale + math.log(abs(total))


def _brute(F: SimpleGraph, H: WeightedGraph, budget: Budget):
    q, n = H.q, F.node_count
    if q ** n > budget.map_cap:
        raise ResourceError(f"{q}^{n} maps exceed map_cap={budget.map_cap}", "map_cap", budget.map_cap)
    a, b = H.alpha, H.beta
    edges = F.sorted_edges()
    total = Fraction(0) if H.exact else 0.0
    for phi in product(range(q), repeat=n):
        w = Fraction(1) if H.exact else 1.0
        for u in range(n):
            w = w * a[phi[u]]
        for u, v in edges:
            w = w * b[phi[u], phi[v]]
            if w == 0:
                break
        total += w
    return total


def hom_count(F: SimpleGraph, target, method: str = "elimination", budget: Budget | None = None):
    """hom(F, target) for a simple or weighted target.

    Simple targets give an int, exact weighted targets a Fraction, float
    targets a float (which may overflow to inf; use :func:`log_hom`).
    """
    budget = budget or get_budget()
    H, simple = _as_target(target)
    if method == "brute":
        val = _brute(F, H, budget)
    elif method == "elimination":
        val = _eliminate(F, H, budget)
        if not H.exact:
            sign, la = val
            val = 0.0 if sign == 0 else sign * math.exp(la)
    else:
        raise PreconditionError(f"unknown method {method!r}")
    if simple:
        return int(val)
    return val


def log_hom(F: SimpleGraph, H: WeightedGraph, budget: Budget | None = None) -> float:
    """Natural log of hom(F, H); ``-inf`` when hom vanishes."""
    budget = budget or get_budget()
    H, _ = _as_target(H)
    if H.exact:
        val = _eliminate(F, H, budget)
        if val < 0:
            raise PreconditionError("hom(F, H) is negative; its logarithm is undefined")
        return -math.inf if val == 0 else math.log(val.numerator) - math.log(val.denominator)
    sign, la = _eliminate(F, H, budget)
    if sign < 0:
        raise PreconditionError("hom(F, H) is negative; its logarithm is undefined")
    return la


def log_density(F: SimpleGraph, H: WeightedGraph, budget: Budget | None = None) -> float:
    """ln t(F, H)."""
    H, _ = _as_target(H)
    return log_hom(F, H.normalized(), budget)


def density(F: SimpleGraph, target, method: str = "elimination", budget: Budget | None = None):
    """t(F, H) = hom(F, H) / alpha_H^|F|."""
    H, _ = _as_target(target)
    return hom_count(F, H.normalized(), method=method, budget=budget)


# -- injective / induced / surjective ----------------------------------------
def inj_ind_surj_aut(F: SimpleGraph, G: SimpleGraph, budget: Budget | None = None) -> HomCounts:
    """Brute-force hom, inj, ind, surj counts of F into G and aut(F)."""
    budget = budget or get_budget()
    n, m = F.node_count, G.node_count
    if max(m, n) ** n > budget.map_cap:
        raise ResourceError(f"{m}^{n} maps exceed map_cap={budget.map_cap}", "map_cap", budget.map_cap)
    f_edges = F.sorted_edges()
    g_edges = G.edges
    hom = surj = 0
    for phi in product(range(m), repeat=n):
        if all(G.has_edge(phi[u], phi[v]) for u, v in f_edges):
            hom += 1
            if len(set(phi)) == m:
                img = {tuple(sorted((phi[u], phi[v]))) for u, v in f_edges}
                if img == g_edges:
                    surj += 1
    inj, ind = _inj_ind(F, G)
    aut = _inj_ind(F, F)[1]
    return HomCounts(hom, inj, ind, surj, aut)


def _inj_ind(F: SimpleGraph, G: SimpleGraph) -> tuple[int, int]:
    n = F.node_count
    f_edges = F.sorted_edges()
    f_non = [(u, v) for u in range(n) for v in range(u + 1, n) if not F.has_edge(u, v)]
    inj = ind = 0
    for phi in permutations(range(G.node_count), n):
        if all(G.has_edge(phi[u], phi[v]) for u, v in f_edges):
            inj += 1
            if not any(G.has_edge(phi[u], phi[v]) for u, v in f_non):
                ind += 1
    return inj, ind


def aut_count(F: SimpleGraph) -> int:
    return _inj_ind(F, F)[1]


# -- z(G, H) -------------------------------------------------------------------
def _cspan_graphs(G: SimpleGraph):
    n = G.node_count
    for es in connected_spanning_edge_sets(range(n), G.edges):
        yield len(es), SimpleGraph(n, es)


def z_value(G: SimpleGraph, H: WeightedGraph, memo: dict | None = None, budget: Budget | None = None):
    """Alternating sum of t(F, H) over connected spanning subgraphs F of G.

    ``memo`` caches densities by canonical form and may be shared across calls
    with the same H.
    """
    if G.node_count == 0:
        raise PreconditionError("z is defined for graphs with at least one node")
    if not G.is_connected():
        return Fraction(0) if H.exact else 0.0
    memo = {} if memo is None else memo
    Hn = H.normalized()
    total = Fraction(0) if H.exact else 0.0
    for m, F in _cspan_graphs(G):
        key = canonical_form(F)
        if key not in memo:
            memo[key] = hom_count(F, Hn, budget=budget)
        t = memo[key]
        total += -t if m % 2 else t
    return total


def z_inversion_check(G: SimpleGraph, H: WeightedGraph, rtol: float = 1e-9) -> bool:
    """Check that the alternating CSpan sum of z(F, H) gives back t(G, H).

    The identity holds for connected G only.
    """
    if not G.is_connected():
        raise PreconditionError("the inversion identity needs a connected graph")
    memo_t: dict = {}
    memo_z: dict = {}
    total = Fraction(0) if H.exact else 0.0
    for m, F in _cspan_graphs(G):
        key = canonical_form(F)
        if key not in memo_z:
            memo_z[key] = z_value(F, H, memo_t)
        total += -memo_z[key] if m % 2 else memo_z[key]
    t = density(G, H)
    if H.exact:
        return total == t
    return abs(total - t) <= rtol * max(1.0, abs(t))


# -- random maps and Gibbs measure -----------------------------------------------
def map_weight(G: SimpleGraph, H: WeightedGraph, phi) -> object:
    w = Fraction(1) if H.exact else 1.0
    for u in G.nodes():
        w = w * H.alpha[phi[u]]
    for u, v in G.sorted_edges():
        w = w * H.beta[phi[u], phi[v]]
    return w


def sample_random_map(G: SimpleGraph, H: WeightedGraph, seed=None) -> GibbsWeight:
    """Each node's image drawn independently from the normalized node weights."""
    rng = np.random.default_rng(seed)
    p = np.asarray(H.normalized_weights(), dtype=float)
    phi = tuple(int(x) for x in rng.choice(H.q, size=G.node_count, p=p))
    return GibbsWeight(phi, map_weight(G, H, phi))


def pushforward_weights(G: SimpleGraph, H: WeightedGraph, phi) -> WeightedGraph:
    """G^phi: G's edges weighted by the H-weight of their image; unit node weights."""
    n = G.node_count
    if len(phi) != n:
        raise PreconditionError("map length must equal the node count")
    beta = np.zeros((n, n), dtype=object if H.exact else float)
    if H.exact:
        beta[:] = Fraction(0)
    for u, v in G.edges:
        beta[u, v] = beta[v, u] = H.beta[phi[u], phi[v]]
    one = Fraction(1) if H.exact else 1.0
    return WeightedGraph([one] * n, beta, exact=H.exact)


def gibbs_distribution(G: SimpleGraph, H: WeightedGraph, budget: Budget | None = None) -> GibbsTable:
    """The full table of Pr_G(phi) proportional to W(phi)."""
    budget = budget or get_budget()
    q, n = H.q, G.node_count
    if q ** n > budget.map_cap:
        raise ResourceError(f"{q}^{n} maps exceed map_cap={budget.map_cap}", "map_cap", budget.map_cap)
    maps, weights = [], []
    for phi in product(range(q), repeat=n):
        maps.append(phi)
        weights.append(map_weight(G, H, phi))
    Z = sum(weights)
    if Z == 0:
        raise DegenerateDistributionError("hom(G, H) = 0: the Gibbs measure is undefined")
    return GibbsTable(tuple(maps), tuple(w / Z for w in weights), Z)

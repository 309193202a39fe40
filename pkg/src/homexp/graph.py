"""Simple graphs, weighted target graphs and the weight transforms on them.

Two numeric modes are supported for :class:`WeightedGraph`: float mode
stores ``float64`` arrays, exact mode stores ``object`` arrays of
:class:`fractions.Fraction`.  Every routine downstream inherits the mode of
the weighted graph it is handed.
"""
from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .exceptions import PreconditionError


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class SimpleGraph:
    """Finite loop-free undirected graph on nodes ``0..n-1``.

    Instances are immutable and hashable (by labeled structure, not by
    isomorphism type).
    """

    __slots__ = ("_n", "_edges", "_adj", "_max_degree", "_hash")

    def __init__(self, node_count: int, edges: Iterable[Sequence[int]] = ()):
        n = int(node_count)
        if n < 0:
            raise PreconditionError("node_count must be nonnegative")
        es = set()
        adj = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise PreconditionError(f"loop at node {u} not allowed in a simple graph")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) out of range for {n} nodes")
            es.add(_norm_edge(u, v))
            adj[u].add(v)
            adj[v].add(u)
        self._n = n
        self._edges = frozenset(es)
        self._adj = tuple(frozenset(a) for a in adj)
        self._max_degree = max((len(a) for a in adj), default=0)
        self._hash = None

    # -- basic accessors -------------------------------------------------
    @property
    def node_count(self) -> int:
        return self._n

    @property
    def edges(self) -> frozenset:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def max_degree(self) -> int:
        return self._max_degree

    @property
    def adjacency(self) -> tuple:
        return self._adj

    def __len__(self):
        return self._n

    def nodes(self) -> range:
        return range(self._n)

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def sorted_edges(self) -> list:
        return sorted(self._edges)

    def __eq__(self, other):
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, self._edges))
        return self._hash

    def __repr__(self):
        return f"SimpleGraph({self._n}, {self.sorted_edges()})"

    # -- structure -------------------------------------------------------
    def components(self) -> list:
        """Connected components as sorted node lists, ordered by smallest node."""
        seen = [False] * self._n
        comps = []
        for s in range(self._n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        # The empty graph counts as connected.
        return self._n <= 1 or len(self.components()) == 1

    def distances_from(self, v: int, limit: int | None = None) -> dict:
        dist = {v: 0}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            if limit is not None and dist[u] >= limit:
                continue
            for w in self._adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def is_bipartite(self) -> bool:
        color = {}
        for s in range(self._n):
            if s in color:
                continue
            color[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if w not in color:
                        color[w] = 1 - color[u]
                        queue.append(w)
                    elif color[w] == color[u]:
                        return False
        return True

    # -- derived graphs --------------------------------------------------
    def induced_subgraph(self, nodes: Iterable[int]) -> "SimpleGraph":
        """Induced subgraph, relabeled so the i-th smallest node becomes i."""
        keep = sorted(set(nodes))
        index = {v: i for i, v in enumerate(keep)}
        es = [(index[u], index[v]) for u, v in self._edges if u in index and v in index]
        return SimpleGraph(len(keep), es)

    def edge_subgraph(self, edges: Iterable[Sequence[int]], nodes: Iterable[int] | None = None) -> "SimpleGraph":
        """Subgraph with the given edges on ``nodes`` (default: edge endpoints), relabeled densely."""
        edges = [_norm_edge(*e) for e in edges]
        if nodes is None:
            nodes = {x for e in edges for x in e}
        keep = sorted(set(nodes))
        index = {v: i for i, v in enumerate(keep)}
        return SimpleGraph(len(keep), [(index[u], index[v]) for u, v in edges])

    def remove_nodes(self, nodes: Iterable[int]) -> "SimpleGraph":
        drop = set(nodes)
        return self.induced_subgraph(v for v in range(self._n) if v not in drop)

    def delete_edge(self, u: int, v: int) -> "SimpleGraph":
        e = _norm_edge(u, v)
        if e not in self._edges:
            raise PreconditionError(f"({u}, {v}) is not an edge")
        return SimpleGraph(self._n, self._edges - {e})

    def contract_edge(self, u: int, v: int) -> "SimpleGraph":
        """Contract edge uv; parallel edges collapse and the loop is dropped."""
        e = _norm_edge(u, v)
        if e not in self._edges:
            raise PreconditionError(f"({u}, {v}) is not an edge")
        keep, gone = e
        relabel = {}
        for x in range(self._n):
            if x == gone:
                continue
            relabel[x] = len(relabel)
        relabel[gone] = relabel[keep]
        es = set()
        for a, b in self._edges:
            a2, b2 = relabel[a], relabel[b]
            if a2 != b2:
                es.add(_norm_edge(a2, b2))
        return SimpleGraph(self._n - 1, es)

    def relabel(self, perm: Sequence[int]) -> "SimpleGraph":
        """Graph with node ``v`` renamed ``perm[v]``."""
        return SimpleGraph(self._n, [(perm[u], perm[v]) for u, v in self._edges])

    def disjoint_union(self, other: "SimpleGraph") -> "SimpleGraph":
        off = self._n
        return SimpleGraph(off + other._n, list(self._edges) + [(u + off, v + off) for u, v in other._edges])


# -- named constructors ------------------------------------------------------
def empty_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n)


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise PreconditionError("a cycle needs at least 3 nodes")
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, combinations(range(n), 2))


def star_graph(leaves: int) -> SimpleGraph:
    return SimpleGraph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def degree_bound_check(G: SimpleGraph, D: int) -> bool:
    return G.max_degree <= D


# -- weighted graphs ---------------------------------------------------------
def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        # Decimal reading of the float, so 0.3 becomes 3/10.
        return Fraction(repr(float(x)))
    return Fraction(x)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class WeightedGraph:
    """Target graph with node weights ``alpha`` and symmetric edge weights ``beta``.

    ``beta`` is a full q-by-q matrix; its diagonal holds loop weights and a
    zero entry means the edge is absent.  ``exact=True`` stores Fractions.
    """

    __slots__ = ("_alpha", "_beta", "_exact", "_alpha_total")

    def __init__(self, alpha, beta, exact: bool | None = None):
        alpha = list(alpha) if not isinstance(alpha, np.ndarray) else alpha
        if exact is None:
            flat = list(np.asarray(alpha, dtype=object).ravel()) + list(np.asarray(beta, dtype=object).ravel())
            exact = any(isinstance(x, Fraction) for x in flat)
        if exact:
            a = np.array([_as_fraction(x) for x in np.asarray(alpha, dtype=object).ravel()], dtype=object)
            b_in = np.asarray(beta, dtype=object)
            b = np.empty(b_in.shape, dtype=object)
            for idx in np.ndindex(b_in.shape):
                b[idx] = _as_fraction(b_in[idx])
        else:
            a = np.array(alpha, dtype=float).ravel()
            b = np.array(beta, dtype=float)
        q = a.shape[0]
        if q < 1:
            raise PreconditionError("a weighted graph needs at least one node")
        if b.shape != (q, q):
            raise PreconditionError(f"beta must be {q}x{q}, got {b.shape}")
        if any(x <= 0 for x in a):
            raise PreconditionError("node weights must be positive")
        if not (b == b.T).all():
            raise PreconditionError("edge weights must be symmetric")
        self._alpha = _freeze(a)
        self._beta = _freeze(b)
        self._exact = bool(exact)
        self._alpha_total = sum(a) if exact else float(a.sum())

    @property
    def q(self) -> int:
        return self._alpha.shape[0]

    node_count = q

    @property
    def alpha(self) -> np.ndarray:
        return self._alpha

    @property
    def beta(self) -> np.ndarray:
        return self._beta

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def alpha_total(self):
        return self._alpha_total

    def __len__(self):
        return self.q

    def __repr__(self):
        mode = "exact" if self._exact else "float"
        return f"WeightedGraph(q={self.q}, {mode})"

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self._exact == other._exact and self.q == other.q
                and bool((self._alpha == other._alpha).all()) and bool((self._beta == other._beta).all()))

    def __hash__(self):
        return hash((self.q, tuple(self._alpha.tolist()), tuple(self._beta.ravel().tolist())))

    def normalized_weights(self) -> np.ndarray:
        """The probability vector alpha_i / alpha_H."""
        return _freeze(self._alpha / self._alpha_total)

    def normalized(self) -> "WeightedGraph":
        """Same graph with node weights scaled to total 1 (densities unchanged)."""
        return WeightedGraph(self.normalized_weights(), self._beta, exact=self._exact)

    def to_exact(self) -> "WeightedGraph":
        return self if self._exact else WeightedGraph(self._alpha, self._beta, exact=True)

    def to_float(self) -> "WeightedGraph":
        if not self._exact:
            return self
        return WeightedGraph(self._alpha.astype(float), self._beta.astype(float), exact=False)

    def support_graph(self) -> SimpleGraph:
        """Simple graph of the nonzero off-diagonal weights."""
        q = self.q
        return SimpleGraph(q, [(i, j) for i in range(q) for j in range(i + 1, q) if self._beta[i, j] != 0])

    def has_loops(self) -> bool:
        return any(self._beta[i, i] != 0 for i in range(self.q))

    def weights_in_unit_interval(self) -> bool:
        return bool(all(0 <= x <= 1 for x in self._beta.ravel()))

    def is_connected(self) -> bool:
        return self.support_graph().is_connected()

    def is_bipartite(self) -> bool:
        """Bipartiteness of the support; any positive loop is an odd cycle."""
        return not self.has_loops() and self.support_graph().is_bipartite()


def weighted_from_simple(G: SimpleGraph, looped: bool = False, exact: bool = True) -> WeightedGraph:
    """Simple graph as a weighted graph: unit node weights, 0/1 edge weights."""
    n = G.node_count
    b = np.zeros((n, n), dtype=int)
    for u, v in G.edges:
        b[u, v] = b[v, u] = 1
    if looped:
        np.fill_diagonal(b, 1)
    return WeightedGraph(np.ones(n, dtype=int), b, exact=exact)


def uniform_complete_target(q: int, exact: bool = False) -> WeightedGraph:
    """K_q with node weights 1/q and no loops (the q-coloring model)."""
    one = Fraction(1) if exact else 1.0
    alpha = [one / q] * q
    beta = [[(0 * one if i == j else one) for j in range(q)] for i in range(q)]
    return WeightedGraph(alpha, beta, exact=exact)


def complement_weights(H: WeightedGraph) -> WeightedGraph:
    """Replace every edge weight, loops included, by ``1 - beta``."""
    return WeightedGraph(H.alpha, 1 - H.beta, exact=H.exact)


def interaction_norm(H: WeightedGraph):
    """``max_u sum_v (alpha_v / alpha_H) |beta_uv|``; exact in exact mode."""
    p = H.normalized_weights()
    rows = [sum(p[v] * abs(H.beta[u, v]) for v in range(H.q)) for u in range(H.q)]
    best = max(rows)
    return best if H.exact else float(best)


def temperature_transform(H: WeightedGraph, T: float) -> WeightedGraph:
    """H^{1/T}: every edge weight raised to the power 1/T.

    Float mode only for non-unit T, since roots of rationals are irrational.
    """
    if T <= 0:
        raise PreconditionError("temperature must be positive")
    if any(x <= 0 for x in H.beta.ravel()):
        raise PreconditionError("temperature transform needs all edge weights > 0")
    if T == 1:
        return H
    beta = np.power(H.beta.astype(float), 1.0 / T)
    return WeightedGraph(H.alpha.astype(float), beta, exact=False)


def collapse_twins(H: WeightedGraph) -> tuple[WeightedGraph, list]:
    """Merge nodes with identical beta rows (and equal loop) into one node.

    Node weights of merged nodes add up; every hom(G, H) is unchanged.
    Returns the collapsed graph and, for each new node, the list of old nodes.
    """
    classes: dict = {}
    for i in range(H.q):
        key = tuple(H.beta[i].tolist())
        classes.setdefault(key, []).append(i)
    groups = sorted(classes.values())
    reps = [g[0] for g in groups]
    alpha = [sum(H.alpha[i] for i in g) for g in groups]
    beta = [[H.beta[a, b] for b in reps] for a in reps]
    return WeightedGraph(alpha, beta, exact=H.exact), groups


def log_or_neg_inf(x) -> float:
    """Natural log with ``-inf`` for zero; works for ints and Fractions of any size."""
    if x == 0:
        return -math.inf
    if x < 0:
        raise PreconditionError("logarithm of a negative partition function")
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)

"""Chromatic polynomial, Crapo invariant, and their weighted relatives."""
from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from ._linalg import det_exact
from .canon import canonical_form
from .enumeration import _connected, connected_spanning_edge_sets
from .exceptions import PreconditionError
from .graph import SimpleGraph, WeightedGraph

# Minors with at most this many nodes are memoized by canonical form.
MEMO_MAX_NODES = 8
# Exact spanning-tree sums enumerate trees up to this many support edges.
TREE_ENUM_MAX_EDGES = 12


class ChromaticPolynomial:
    """Integer coefficient vector, index = power of y."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence[int]):
        coeffs = list(coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(int(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def linear_coefficient(self) -> int:
        return self.coefficients[1] if len(self.coefficients) > 1 else 0

    def __call__(self, y):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * y + c
        return acc

    def alternates_in_sign(self) -> bool:
        n = self.degree
        return all(c == 0 or (c > 0) == ((n - i) % 2 == 0) for i, c in enumerate(self.coefficients))

    def __eq__(self, other):
        return isinstance(other, ChromaticPolynomial) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"ChromaticPolynomial({list(self.coefficients)})"

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            mag = abs(c)
            body = f"{mag}{mono}" if (mag != 1 or not mono) else mono
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms) if terms else "0"
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


# -- integer polynomial helpers ----------------------------------------------
def _pmul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a: list, b: list) -> list:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return out


def _falling(n: int) -> list:
    p = [1]
    for i in range(n):
        p = _pmul(p, [-i, 1])
    return p


def _simplicial_vertex(G: SimpleGraph):
    adj = G.adjacency
    for v in sorted(G.nodes(), key=G.degree):
        nb = adj[v]
        if all(b in adj[a] for a, b in combinations(nb, 2)):
            return v
    return None


def _chrom(G: SimpleGraph, memo: dict) -> list:
    n, m = G.node_count, G.edge_count
    if m == 0:
        return [0] * n + [1]
    comps = G.components()
    if len(comps) > 1:
        p = [1]
        for c in comps:
            p = _pmul(p, _chrom(G.induced_subgraph(c), memo))
        return p
    if m == n * (n - 1) // 2:
        return _falling(n)
    key = canonical_form(G) if n <= MEMO_MAX_NODES else None
    if key is not None and key in memo:
        return memo[key]
    v = _simplicial_vertex(G)
    if v is not None:
        # a vertex whose neighbours form a clique of size d contributes (y - d)
        p = _pmul([-G.degree(v), 1], _chrom(G.remove_nodes([v]), memo))
    else:
        u = min(G.nodes(), key=G.degree)
        w = min(G.neighbors(u))
        p = _psub(_chrom(G.delete_edge(u, w), memo), _chrom(G.contract_edge(u, w), memo))
    if key is not None:
        memo[key] = p
    return p


def chromatic_polynomial(G: SimpleGraph, memo: dict | None = None) -> ChromaticPolynomial:
    """Chromatic polynomial by deletion-contraction.

    ``memo`` maps canonical forms to coefficient lists and may be shared
    between calls by the caller; by default each call gets a fresh table.
    """
    return ChromaticPolynomial(_chrom(G, {} if memo is None else memo))


def surjective_colorings(G: SimpleGraph, k: int, memo: dict | None = None) -> int:
    """Number of proper k-colorings using every color (inclusion-exclusion)."""
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    P = chromatic_polynomial(G, memo)
    return sum((-1) ** (k - j) * comb(k, j) * P(j) for j in range(k + 1))


def crapo_invariant(G: SimpleGraph, memo: dict | None = None) -> int:
    """Linear coefficient of the chromatic polynomial."""
    if G.node_count == 0:
        return 0
    if not G.is_connected():
        return 0
    return chromatic_polynomial(G, memo).linear_coefficient


# -- weighted versions -------------------------------------------------------
def _support(H: WeightedGraph) -> dict:
    q = H.q
    return {(i, j): H.beta[i, j] for i in range(q) for j in range(i + 1, q) if H.beta[i, j] != 0}


def _merge(n: int, w: dict, a: int, b: int, combine) -> tuple[int, dict]:
    """Merge node b into a; parallel edges are combined with ``combine``."""
    relabel = {}
    for x in range(n):
        if x != b:
            relabel[x] = len(relabel)
    relabel[b] = relabel[a]
    out: dict = {}
    for (x, y), val in w.items():
        if {x, y} == {a, b}:
            continue
        x2, y2 = relabel[x], relabel[y]
        key = (x2, y2) if x2 < y2 else (y2, x2)
        out[key] = combine(out[key], val) if key in out else val
    return n - 1, {k: v for k, v in out.items() if v != 0}


def _sum_minus_product(x, y):
    return x + y - x * y


def _sum(x, y):
    return x + y


def _wcr(n: int, w: dict):
    if n == 1:
        return 1
    if not w or not _edges_connect(n, w):
        return 0
    e = max(w)
    a, b = e
    be = w[e]
    rest = {k: v for k, v in w.items() if k != e}
    n2, w2 = _merge(n, w, a, b, _sum_minus_product)
    return _wcr(n, rest) - be * _wcr(n2, w2)


def _edges_connect(n: int, w: dict) -> bool:
    return _connected(range(n), list(w))


def weighted_crapo(H: WeightedGraph):
    """Alternating connected-spanning sum of edge-weight products (node weights ignored).

    Computed with the deletion / sum-minus-product contraction recurrence.
    """
    val = _wcr(H.q, _support(H))
    return val if H.exact else float(val)


def weighted_crapo_by_enumeration(H: WeightedGraph):
    """Same quantity by direct summation over connected spanning edge sets."""
    w = _support(H)
    total = 0
    for es in connected_spanning_edge_sets(range(H.q), list(w)):
        term = (-1) ** len(es)
        for e in es:
            term = term * w[e]
        total += term
    return total if H.exact else float(total)


def weighted_tree_sum(H: WeightedGraph):
    """Sum over spanning trees of edge-weight products.

    Float mode: reduced weighted Laplacian determinant (LU with partial
    pivoting).  Exact mode: tree enumeration up to ``TREE_ENUM_MAX_EDGES``
    support edges, rational elimination beyond that.
    """
    w = _support(H)
    q = H.q
    if q == 1:
        return 1 if H.exact else 1.0
    if not _edges_connect(q, w):
        return 0 if H.exact else 0.0
    if H.exact and len(w) <= TREE_ENUM_MAX_EDGES:
        total = 0
        for es in connected_spanning_edge_sets(range(q), list(w), trees_only=True):
            term = 1
            for e in es:
                term = term * w[e]
            total += term
        return total
    lap = [[0] * q for _ in range(q)]
    for (i, j), val in w.items():
        lap[i][j] -= val
        lap[j][i] -= val
        lap[i][i] += val
        lap[j][j] += val
    reduced = [row[1:] for row in lap[1:]]
    if H.exact:
        return det_exact(reduced)
    return float(np.linalg.det(np.array(reduced, dtype=float)))


def _contract(H: WeightedGraph, e, combine) -> WeightedGraph:
    a, b = sorted(int(x) for x in e)
    q = H.q
    if a == b or not (0 <= a < q and 0 <= b < q):
        raise PreconditionError(f"invalid edge {tuple(e)} for a graph on {q} nodes")
    if H.beta[a, b] == 0:
        raise PreconditionError(f"edge {tuple(e)} has zero weight")
    keep = [x for x in range(q) if x != b]
    alpha = [H.alpha[x] + (H.alpha[b] if x == a else 0) for x in keep]
    beta = np.empty((q - 1, q - 1), dtype=object if H.exact else float)
    for i, x in enumerate(keep):
        for j, y in enumerate(keep):
            if x == a and y == a:
                val = combine(H.beta[a, a], H.beta[b, b])
            elif x == a:
                val = combine(H.beta[a, y], H.beta[b, y])
            elif y == a:
                val = combine(H.beta[x, a], H.beta[x, b])
            else:
                val = H.beta[x, y]
            beta[i, j] = val
    return WeightedGraph(alpha, beta, exact=H.exact)


def contract_sum(H: WeightedGraph, e) -> WeightedGraph:
    """H/e: endpoints merged, parallel weights added, node weights added.

    The merged loop combines the two endpoint loops the same way.
    """
    return _contract(H, e, _sum)


def contract_sum_minus_product(H: WeightedGraph, e) -> WeightedGraph:
    """H÷e: like :func:`contract_sum` but parallel weights combine as x + y - xy."""
    return _contract(H, e, _sum_minus_product)


def delete_weighted_edge(H: WeightedGraph, e) -> WeightedGraph:
    a, b = e
    beta = np.array(H.beta, dtype=object if H.exact else float)
    beta[a, b] = beta[b, a] = 0
    return WeightedGraph(H.alpha, beta, exact=H.exact)

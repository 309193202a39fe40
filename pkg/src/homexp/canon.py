"""Canonical forms of small graphs, optionally rooted or vertex-colored.

The search is plain individualization-refinement: colour refinement to an
equitable ordered partition, then branching on every vertex of the first
non-singleton cell, keeping the lexicographically smallest adjacency
certificate over all leaves.  Swapping two twins inside a cell is an
automorphism of the current search node, so only one vertex per twin class
is branched on.  No other automorphism pruning is done; inputs here are
balls and cluster graphs of a dozen nodes or so.
"""
from __future__ import annotations

from typing import Sequence

from .graph import SimpleGraph


def _refine(adj, colors: list) -> list:
    """Iterated colour refinement; cells keep their relative order."""
    n = len(colors)
    ncolors = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(n)]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if len(rank) == ncolors:
            return new
        colors, ncolors = new, len(rank)


def _certificate(adj, colors: list) -> tuple:
    n = len(colors)
    order = [0] * n
    for v, c in enumerate(colors):
        order[c] = v
    bits = []
    for i in range(n):
        ai = adj[order[i]]
        bits.extend(1 if order[j] in ai else 0 for j in range(i + 1, n))
    return tuple(bits), tuple(order)


def _twin_representatives(adj, cell: list) -> list:
    reps = []
    for v in cell:
        for r in reps:
            if adj[v] - {r} == adj[r] - {v}:
                break
        else:
            reps.append(v)
    return reps


def _search(adj, colors: list, best: list) -> None:
    colors = _refine(adj, colors)
    n = len(colors)
    if len(set(colors)) == n:
        cert = _certificate(adj, colors)
        if best[0] is None or cert[0] < best[0][0]:
            best[0] = cert
        return
    counts: dict = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    target = min(c for c, k in counts.items() if k > 1)
    cell = [v for v in range(n) if colors[v] == target]
    for v in _twin_representatives(adj, cell):
        nxt = [2 * c for c in colors]
        for w in cell:
            if w != v:
                nxt[w] += 1
        _search(adj, nxt, best)


def canonical_labeling(G: SimpleGraph, colors: Sequence | None = None) -> tuple:
    """Return ``(certificate_bits, order)``; ``order[i]`` is the node placed at position i.

    ``colors`` is an optional vertex colouring (any sortable values); vertices
    of smaller colour are placed first and colour classes are respected.
    """
    n = G.node_count
    if n == 0:
        return (), ()
    adj = G.adjacency
    if colors is None:
        init = [0] * n
    else:
        palette = {c: i for i, c in enumerate(sorted(set(colors)))}
        init = [palette[c] for c in colors]
    best = [None]
    _search(adj, init, best)
    return best[0]


def _pack(n: int, bits: tuple, extra: bytes = b"") -> bytes:
    value = 0
    for b in bits:
        value = (value << 1) | b
    nbytes = (len(bits) + 7) // 8
    return n.to_bytes(2, "big") + extra + value.to_bytes(nbytes, "big")


def canonical_form(G: SimpleGraph, colors: Sequence | None = None) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic (colour-preserving)."""
    bits, order = canonical_labeling(G, colors)
    extra = b""
    if colors is not None:
        extra = repr(tuple(colors[v] for v in order)).encode()
        extra = len(extra).to_bytes(2, "big") + extra
    return _pack(G.node_count, bits, extra)


def rooted_canonical_form(G: SimpleGraph, root: int) -> bytes:
    """Canonical form with ``root`` fixed; the root lands at position 0."""
    colors = [0 if v == root else 1 for v in range(G.node_count)]
    bits, order = canonical_labeling(G, colors)
    assert order[0] == root
    return _pack(G.node_count, bits)


def canonical_graph(G: SimpleGraph) -> SimpleGraph:
    """Representative of G's isomorphism class (relabeled by the canonical order)."""
    _, order = canonical_labeling(G)
    pos = {v: i for i, v in enumerate(order)}
    return G.relabel([pos[v] for v in range(G.node_count)])


def decode_form(form: bytes) -> SimpleGraph:
    """Inverse of :func:`canonical_form` for uncoloured forms."""
    n = int.from_bytes(form[:2], "big")
    m = n * (n - 1) // 2
    value = int.from_bytes(form[2:], "big") if m else 0
    bits = [(value >> (m - 1 - k)) & 1 for k in range(m)]
    edges = []
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return SimpleGraph(n, edges)


def is_isomorphic(G1: SimpleGraph, G2: SimpleGraph) -> bool:
    if G1.node_count != G2.node_count or G1.edge_count != G2.edge_count:
        return False
    return canonical_form(G1) == canonical_form(G2)

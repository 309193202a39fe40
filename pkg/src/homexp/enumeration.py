"""Subgraph families of a host graph and rooted subtree counts.

Families (all relative to a host graph G):

``Sub``    nonempty subgraphs without isolated nodes
``Con``    connected subgraphs with at least two nodes
``CInd``   connected induced subgraphs with at least two nodes
``CSpan``  connected spanning subgraphs (one or more nodes)
``SpTr``   spanning trees

Members are :class:`Subgraph` records holding host node and edge sets.
"""
from __future__ import annotations

from math import comb
from typing import Iterator, NamedTuple

from ._linalg import det_exact
from .config import get_budget
from .exceptions import PreconditionError, ResourceError
from .graph import SimpleGraph

KINDS = ("Sub", "Con", "CInd", "CSpan", "SpTr")
_KIND_LOOKUP = {k.lower(): k for k in KINDS}

# k * D above this makes the binomial bound unreasonably large to form exactly.
BOUND_ARG_CAP = 10**5


class Subgraph(NamedTuple):
    nodes: frozenset
    edges: frozenset

    def as_graph(self) -> SimpleGraph:
        """Relabeled copy with nodes 0..len(nodes)-1 in increasing host order."""
        keep = sorted(self.nodes)
        index = {v: i for i, v in enumerate(keep)}
        return SimpleGraph(len(keep), [(index[u], index[v]) for u, v in self.edges])

    @property
    def node_count(self) -> int:
        return len(self.nodes)


class SubgraphFamily(NamedTuple):
    kind: str
    members: tuple


def normalize_kind(kind: str) -> str:
    try:
        return _KIND_LOOKUP[kind.lower()]
    except KeyError:
        raise PreconditionError(f"unknown family kind {kind!r}; expected one of {KINDS}") from None


# -- connected node sets -----------------------------------------------------
def connected_node_sets(G: SimpleGraph, max_nodes: int, min_nodes: int = 1) -> Iterator[frozenset]:
    """Every connected node set with min_nodes..max_nodes nodes, exactly once.

    ESU-style growth: a set is only extended from its minimum node, and only
    by nodes larger than it that are exclusive neighbours of the latest
    addition, so no set is produced twice.
    """
    adj = G.adjacency

    def extend(sub: frozenset, ext: list, root: int, nbhd: frozenset):
        if len(sub) >= min_nodes:
            yield sub
        if len(sub) == max_nodes:
            return
        ext = list(ext)
        while ext:
            w = ext.pop(0)
            excl = [u for u in adj[w] if u > root and u not in sub and u not in nbhd and u not in ext]
            yield from extend(sub | {w}, sorted(ext + excl), root, nbhd | adj[w])

    for v in G.nodes():
        start = frozenset([v])
        yield from extend(start, sorted(u for u in adj[v] if u > v), v, adj[v] | start)


def rooted_connected_node_sets(G: SimpleGraph, v: int, max_nodes: int) -> Iterator[frozenset]:
    """Connected node sets containing ``v`` with at most max_nodes nodes, each once."""
    adj = G.adjacency

    def grow(sub: frozenset, frontier: tuple, banned: frozenset):
        yield sub
        if len(sub) == max_nodes:
            return
        banned_here = set(banned)
        for i, u in enumerate(frontier):
            # include u; the earlier frontier nodes are excluded from this branch on
            new_front = set(frontier[i + 1:])
            new_front.update(w for w in adj[u] if w not in sub and w not in banned_here)
            new_front.discard(u)
            yield from grow(sub | {u}, tuple(sorted(new_front)), frozenset(banned_here | {u}))
            banned_here.add(u)

    if not 0 <= v < G.node_count:
        raise PreconditionError(f"node {v} not in graph")
    if max_nodes < 1:
        return
    yield from grow(frozenset([v]), tuple(sorted(adj[v])), frozenset([v]))


# -- edge subsets ------------------------------------------------------------
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _connected(nodes, edges) -> bool:
    nodes = list(nodes)
    if len(nodes) <= 1:
        return True
    parent = {x: x for x in nodes}
    comps = len(nodes)
    for u, v in edges:
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps == 1


def connected_spanning_edge_sets(nodes, edges, trees_only: bool = False) -> Iterator[frozenset]:
    """Edge subsets of ``edges`` connecting all of ``nodes``.

    Depth-first over the edge list; excluding an edge is only allowed while
    the chosen plus undecided edges still connect everything.
    """
    nodes = list(nodes)
    edges = sorted(edges)
    m = len(edges)
    target = len(nodes) - 1

    def rec(i: int, chosen: list):
        if trees_only and len(chosen) > target:
            return
        if i == m:
            if (not trees_only or len(chosen) == target) and _connected(nodes, chosen):
                yield frozenset(chosen)
            return
        if trees_only:
            parent = {x: x for x in nodes}
            for u, v in chosen:
                parent[_find(parent, u)] = _find(parent, v)
            u, v = edges[i]
            makes_cycle = _find(parent, u) == _find(parent, v)
        else:
            makes_cycle = False
        if not makes_cycle:
            chosen.append(edges[i])
            yield from rec(i + 1, chosen)
            chosen.pop()
        if _connected(nodes, chosen + edges[i + 1:]):
            yield from rec(i + 1, chosen)

    if not _connected(nodes, edges):
        return
    yield from rec(0, [])


def _edge_sets_no_isolated(edges, max_nodes: int) -> Iterator[frozenset]:
    edges = sorted(edges)

    def rec(i: int, chosen: list, covered: frozenset):
        if i == len(edges):
            if chosen:
                yield frozenset(chosen)
            return
        u, v = edges[i]
        grown = covered | {u, v}
        if len(grown) <= max_nodes:
            chosen.append(edges[i])
            yield from rec(i + 1, chosen, grown)
            chosen.pop()
        yield from rec(i + 1, chosen, covered)

    yield from rec(0, [], frozenset())


def _induced_edges(G: SimpleGraph, nodes: frozenset) -> frozenset:
    return frozenset((u, v) for u, v in G.edges if u in nodes and v in nodes)


def iter_family(G: SimpleGraph, kind: str, max_nodes: int) -> Iterator[Subgraph]:
    """Lazily generate a family without applying the member cap."""
    kind = normalize_kind(kind)
    if max_nodes < 1:
        raise PreconditionError("max_nodes must be at least 1")
    n = G.node_count
    if kind == "CInd":
        for s in connected_node_sets(G, max_nodes, min_nodes=2):
            yield Subgraph(s, _induced_edges(G, s))
    elif kind == "Con":
        for s in connected_node_sets(G, max_nodes, min_nodes=2):
            for es in connected_spanning_edge_sets(sorted(s), _induced_edges(G, s)):
                yield Subgraph(s, es)
    elif kind in ("CSpan", "SpTr"):
        if n > max_nodes or n == 0:
            return
        allv = frozenset(range(n))
        for es in connected_spanning_edge_sets(range(n), G.edges, trees_only=(kind == "SpTr")):
            yield Subgraph(allv, es)
    else:  # Sub
        for es in _edge_sets_no_isolated(G.edges, max_nodes):
            yield Subgraph(frozenset(x for e in es for x in e), es)


def enumerate_family(G: SimpleGraph, kind: str, max_nodes: int, cap: int | None = None) -> SubgraphFamily:
    """All members of the family with at most ``max_nodes`` nodes.

    Raises :class:`ResourceError` once more than ``cap`` members appear
    (default: the configured enumeration cap).
    """
    cap = get_budget().enum_cap if cap is None else cap
    kind = normalize_kind(kind)
    out = []
    for member in iter_family(G, kind, max_nodes):
        out.append(member)
        if len(out) > cap:
            raise ResourceError(f"{kind} enumeration exceeded the member cap enum_cap={cap}", "enum_cap", cap)
    return SubgraphFamily(kind, tuple(out))


def is_member(G: SimpleGraph, kind: str, member: Subgraph) -> bool:
    """Membership predicate, independent of the generators above."""
    kind = normalize_kind(kind)
    nodes, edges = member
    if not edges <= G.edges or any(not (u in nodes and v in nodes) for u, v in edges):
        return False
    endpoints = {x for e in edges for x in e}
    conn = _connected(nodes, edges)
    if kind == "Sub":
        return bool(edges) and endpoints == set(nodes)
    if kind == "Con":
        return len(nodes) >= 2 and conn
    if kind == "CInd":
        return len(nodes) >= 2 and conn and edges == _induced_edges(G, frozenset(nodes))
    full = set(nodes) == set(range(G.node_count))
    if kind == "CSpan":
        return full and conn
    return full and conn and len(edges) == G.node_count - 1


# -- counts ------------------------------------------------------------------
def spanning_tree_count(G: SimpleGraph) -> int:
    """Number of spanning trees (Kirchhoff, exact integer determinant)."""
    n = G.node_count
    if n <= 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for u, v in G.edges:
        lap[u][v] -= 1
        lap[v][u] -= 1
        lap[u][u] += 1
        lap[v][v] += 1
    return int(det_exact([row[1:] for row in lap[1:]]))


def count_rooted_subtrees(G: SimpleGraph, v: int, k: int) -> int:
    """Number of subtrees of G with k nodes containing v."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    total = 0
    for s in rooted_connected_node_sets(G, v, k):
        if len(s) == k:
            total += spanning_tree_count(G.induced_subgraph(s))
    return total


def count_connected_subgraphs(G: SimpleGraph, v: int, k: int) -> int:
    """Number of connected (not necessarily induced) subgraphs with k nodes containing v."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    total = 0
    for s in rooted_connected_node_sets(G, v, k):
        if len(s) == k:
            total += sum(1 for _ in connected_spanning_edge_sets(sorted(s), _induced_edges(G, s)))
    return total


def count_connected_edge_subgraphs(G: SimpleGraph, v: int, m: int) -> int:
    """Number of connected subgraphs with exactly m edges containing v (m=0: v alone)."""
    if m < 0:
        raise PreconditionError("m must be nonnegative")
    if m == 0:
        return 1
    total = 0
    for s in rooted_connected_node_sets(G, v, m + 1):
        if len(s) < 2:
            continue
        total += sum(1 for es in connected_spanning_edge_sets(sorted(s), _induced_edges(G, s)) if len(es) == m)
    return total


def count_cind_containing(G: SimpleGraph, v: int, k: int) -> int:
    return sum(1 for s in rooted_connected_node_sets(G, v, k) if len(s) == k)


def subtree_bound(D: int, k: int) -> int:
    """(1/k) C(kD, k-1): subtrees with k nodes through a node, max degree D."""
    if D < 1 or k < 1:
        raise PreconditionError("D and k must be at least 1")
    if k * D > BOUND_ARG_CAP:
        raise ResourceError(f"k*D={k * D} exceeds the exact bound cap {BOUND_ARG_CAP}", "bound_cap", BOUND_ARG_CAP)
    num = comb(k * D, k - 1)
    assert num % k == 0
    return num // k


def edge_subgraph_bound(D: int, m: int) -> int:
    """(1/(m+1)) C((m+1)D, m): connected subgraphs with m edges through a node."""
    return subtree_bound(D, m + 1)

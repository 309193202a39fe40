"""r-balls, neighbourhood histograms and the local distance between graphs."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .canon import decode_form, rooted_canonical_form
from .exceptions import PreconditionError
from .graph import SimpleGraph


@dataclass(frozen=True, order=True)
class RootedBall:
    """Canonical encoding of a rooted graph; the root decodes to node 0."""

    encoding: bytes
    radius: int
    node_count: int

    def graph(self) -> SimpleGraph:
        return decode_form(self.encoding)

    def hex(self) -> str:
        return self.encoding.hex()


def ball_nodes(G: SimpleGraph, v: int, r: int) -> list:
    if not 0 <= v < G.node_count:
        raise PreconditionError(f"node {v} not in graph")
    if r < 0:
        raise PreconditionError("radius must be nonnegative")
    return sorted(G.distances_from(v, r))


def ball_graph(G: SimpleGraph, v: int, r: int) -> tuple[SimpleGraph, int]:
    """The induced ball as a graph, with the new index of v."""
    nodes = ball_nodes(G, v, r)
    return G.induced_subgraph(nodes), nodes.index(v)


def ball(G: SimpleGraph, v: int, r: int) -> RootedBall:
    B, root = ball_graph(G, v, r)
    return RootedBall(rooted_canonical_form(B, root), r, B.node_count)


@dataclass(frozen=True)
class NeighborhoodHistogram:
    radius: int
    frequencies: dict  # RootedBall -> Fraction

    def items(self):
        return sorted(self.frequencies.items())

    def total(self) -> Fraction:
        return sum(self.frequencies.values(), Fraction(0))


def histogram(G: SimpleGraph, r: int) -> NeighborhoodHistogram:
    n = G.node_count
    if n == 0:
        raise PreconditionError("histogram of an empty graph is undefined")
    counts: dict = {}
    for v in G.nodes():
        B = ball(G, v, r)
        counts[B] = counts.get(B, 0) + 1
    return NeighborhoodHistogram(r, {B: Fraction(c, n) for B, c in counts.items()})


def local_distance(G1: SimpleGraph, G2: SimpleGraph, r: int) -> Fraction:
    """Total variation distance between radius-r ball histograms (half the L1 sum)."""
    h1, h2 = histogram(G1, r).frequencies, histogram(G2, r).frequencies
    keys = set(h1) | set(h2)
    return sum((abs(h1.get(k, 0) - h2.get(k, 0)) for k in keys), Fraction(0)) / 2

"""Input checks shared by the estimator classes and the command line."""
from __future__ import annotations

from .exceptions import PreconditionError
from .graph import SimpleGraph, WeightedGraph


def check_simple_graph(G, max_degree: int | None = None, name: str = "G") -> SimpleGraph:
    if not isinstance(G, SimpleGraph):
        raise TypeError(f"{name} must be a SimpleGraph, got {type(G).__name__}")
    if G.node_count == 0:
        raise PreconditionError(f"{name} has no nodes")
    if max_degree is not None and G.max_degree > max_degree:
        raise PreconditionError(f"{name} has maximum degree {G.max_degree} > {max_degree}")
    return G


def check_weighted_graph(H, unit_interval: bool = False, name: str = "H") -> WeightedGraph:
    if not isinstance(H, WeightedGraph):
        raise TypeError(f"{name} must be a WeightedGraph, got {type(H).__name__}")
    if unit_interval and not H.weights_in_unit_interval():
        raise PreconditionError(f"edge weights of {name} must lie in [0, 1]")
    return H


def check_graph_sequence(X, max_degree: int | None = None) -> list:
    """A non-empty list of simple graphs (a single graph is rejected, not wrapped)."""
    if isinstance(X, SimpleGraph):
        raise TypeError("expected a sequence of graphs; wrap a single graph in a list")
    graphs = list(X)
    if not graphs:
        raise PreconditionError("empty graph sequence")
    for i, G in enumerate(graphs):
        check_simple_graph(G, max_degree, name=f"X[{i}]")
    return graphs


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise PreconditionError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)

"""Line-oriented text formats for simple and weighted graphs.

Simple graph::

    # comment
    graph 3
    0 1
    1 2

Weighted graph (full symmetric beta matrix, one row per line)::

    wgraph 2
    alpha 0.5 0.5
    1 1
    1 0
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import numpy as np

from .exceptions import PreconditionError
from .graph import SimpleGraph, WeightedGraph


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _number(token: str, exact: bool, lineno: int | None = None):
    """Decimal or ``p/q`` token; a Fraction in exact mode, a float otherwise."""
    try:
        x = Fraction(token)
    except (ValueError, ZeroDivisionError):
        where = f"line {lineno}: " if lineno else ""
        raise PreconditionError(f"{where}not a number: {token!r}") from None
    return x if exact else float(x)


def _integer(token: str, lineno: int | None = None) -> int:
    try:
        return int(token)
    except ValueError:
        where = f"line {lineno}: " if lineno else ""
        raise PreconditionError(f"{where}not an integer: {token!r}") from None


def parse_graph(text: str) -> SimpleGraph:
    lines = list(_content_lines(text))
    if not lines:
        raise PreconditionError("empty graph file")
    _, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "graph":
        raise PreconditionError(f"expected 'graph <n>' header, got {head!r}")
    n = _integer(parts[1], lines[0][0])
    edges = []
    for lineno, line in lines[1:]:
        toks = line.split()
        if len(toks) != 2:
            raise PreconditionError(f"line {lineno}: expected '<u> <v>'")
        edges.append((_integer(toks[0], lineno), _integer(toks[1], lineno)))
    return SimpleGraph(n, edges)


def parse_weighted_graph(text: str, exact: bool = False) -> WeightedGraph:
    lines = list(_content_lines(text))
    if not lines:
        raise PreconditionError("empty weighted graph file")
    parts = lines[0][1].split()
    if len(parts) != 2 or parts[0] != "wgraph":
        raise PreconditionError(f"expected 'wgraph <q>' header, got {lines[0][1]!r}")
    q = _integer(parts[1], lines[0][0])
    if len(lines) != q + 2:
        raise PreconditionError(f"expected alpha line and {q} beta rows")
    toks = lines[1][1].split()
    if toks[0] != "alpha" or len(toks) != q + 1:
        raise PreconditionError(f"expected 'alpha' followed by {q} weights")
    alpha = [_number(t, exact, lines[1][0]) for t in toks[1:]]
    rows = []
    for lineno, line in lines[2:]:
        vals = line.split()
        if len(vals) != q:
            raise PreconditionError(f"line {lineno}: expected {q} edge weights")
        rows.append([_number(t, exact, lineno) for t in vals])
    beta = np.array(rows, dtype=object if exact else float)
    return WeightedGraph(alpha, beta, exact=exact)


def format_graph(G: SimpleGraph) -> str:
    out = [f"graph {G.node_count}"]
    out += [f"{u} {v}" for u, v in G.sorted_edges()]
    return "\n".join(out) + "\n"


def format_weighted_graph(H: WeightedGraph) -> str:
    out = [f"wgraph {H.q}", "alpha " + " ".join(str(a) for a in H.alpha)]
    out += [" ".join(str(b) for b in row) for row in H.beta]
    return "\n".join(out) + "\n"


def read_graph(path) -> SimpleGraph:
    return parse_graph(Path(path).read_text())


def read_weighted_graph(path, exact: bool = False) -> WeightedGraph:
    return parse_weighted_graph(Path(path).read_text(), exact=exact)


def read_any(path, exact: bool = False):
    """Read either format, dispatching on the header keyword."""
    text = Path(path).read_text()
    for _, line in _content_lines(text):
        if line.split()[0] == "wgraph":
            return parse_weighted_graph(text, exact=exact)
        return parse_graph(text)
    raise PreconditionError(f"{path}: empty file")


def write_graph(path, G: SimpleGraph) -> None:
    Path(path).write_text(format_graph(G))


def write_weighted_graph(path, H: WeightedGraph) -> None:
    Path(path).write_text(format_weighted_graph(H))


def read_vector(path, exact: bool = False) -> list:
    text = Path(path).read_text()
    return [_number(t, exact, lineno) for lineno, line in _content_lines(text) for t in line.split()]

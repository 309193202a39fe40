"""Grid graphs and their homomorphism numbers via transfer matrices.

A homomorphism of P_n x P_m (Cartesian product) is a sequence of n column
maps P_m -> H; consecutive columns interact through the product of the H
weights along each row.  The column maps with nonzero weight are the nodes
of the transfer graph, which turns grid counts into path and cycle counts:

    hom(P_n x P_m, H) = 1^T D (B D)^(n-1) 1,   hom(C_n x P_m, H) = tr((D B)^n)

with D the column weights and B the row-interaction matrix.  Cyclic columns
give the torus.  Float mode renormalizes after every step and tracks the
log scale; exact mode uses rational object arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import Budget, get_budget
from .exceptions import PreconditionError, ResourceError
from .graph import SimpleGraph, WeightedGraph

KIND_ALIASES = {
    "path": "path", "path×path": "path", "pathxpath": "path", "grid": "path",
    "cylinder": "cylinder", "cycle×path": "cylinder", "cyclexpath": "cylinder",
    "torus": "torus", "cycle×cycle": "torus", "cyclexcycle": "torus",
}
GRID_KINDS = ("path", "cylinder", "torus")


def normalize_grid_kind(kind: str) -> str:
    try:
        return KIND_ALIASES[kind.lower()]
    except KeyError:
        raise PreconditionError(f"unknown grid kind {kind!r}; expected one of {GRID_KINDS}") from None


def _cyclic_dims(kind: str) -> tuple[bool, bool]:
    kind = normalize_grid_kind(kind)
    return kind in ("cylinder", "torus"), kind == "torus"


def make_grid(kind: str, n: int, m: int) -> SimpleGraph:
    """P_n x P_m, C_n x P_m or C_n x C_m; node (i, j) is i*m + j."""
    cyc_n, cyc_m = _cyclic_dims(kind)
    if n < 1 or m < 1:
        raise PreconditionError("grid sides must be at least 1")
    if (cyc_n and n < 3) or (cyc_m and m < 3):
        raise PreconditionError("cycle factors need length at least 3")
    edges = []
    for i in range(n):
        for j in range(m):
            v = i * m + j
            if j + 1 < m:
                edges.append((v, v + 1))
            elif cyc_m:
                edges.append((i * m, v))
            if i + 1 < n:
                edges.append((v, v + m))
            elif cyc_n:
                edges.append((j, v))
    return SimpleGraph(n * m, edges)


# -- transfer graph ------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class TransferGraph:
    H: WeightedGraph
    m: int
    cyclic: bool
    states: np.ndarray  # S x m array of H-nodes, one row per column map
    node_weights: np.ndarray  # column weights (positive)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def exact(self) -> bool:
        return self.H.exact

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """B @ vec without forming B: apply H's edge weights along every column slot."""
        q, m = self.H.q, self.m
        full = np.zeros(q ** m, dtype=vec.dtype)
        if self.exact:
            full[:] = Fraction(0)
        flat = np.ravel_multi_index(tuple(self.states.T), (q,) * m) if m else np.zeros(1, dtype=int)
        full[flat] = vec
        tensor = full.reshape((q,) * m)
        beta = np.asarray(self.H.beta)
        for axis in range(m):
            tensor = np.moveaxis(np.tensordot(beta, tensor, axes=([1], [axis])), 0, axis)
        return tensor.reshape(-1)[flat]

    def edge_weight_matrix(self, budget: Budget | None = None) -> np.ndarray:
        budget = budget or get_budget()
        S = self.size
        if S * S > budget.tensor_cap:
            raise ResourceError(f"dense transfer matrix with {S}^2 entries exceeds tensor_cap={budget.tensor_cap}",
                                "tensor_cap", budget.tensor_cap)
        beta = np.asarray(self.H.beta)
        B = np.ones((S, S), dtype=object if self.exact else float)
        if self.exact:
            B[:] = Fraction(1)
        for i in range(self.m):
            col = self.states[:, i]
            B = B * beta[np.ix_(col, col)]
        return B

    def as_weighted_graph(self, budget: Budget | None = None) -> WeightedGraph:
        return WeightedGraph(list(self.node_weights), self.edge_weight_matrix(budget), exact=self.exact)


def transfer_graph(H: WeightedGraph, m: int, cyclic: bool = False, budget: Budget | None = None) -> TransferGraph:
    """Column maps P_m -> H (C_m -> H when cyclic) with positive weight."""
    budget = budget or get_budget()
    if m < 1:
        raise PreconditionError("column length must be at least 1")
    if cyclic and m < 3:
        raise PreconditionError("cyclic columns need length at least 3")
    beta = np.asarray(H.beta)
    if any(x < 0 for x in beta.ravel()):
        raise PreconditionError("transfer matrices need nonnegative edge weights")
    q = H.q
    if q ** m > budget.transfer_cap:
        raise ResourceError(f"{q}^{m} column maps exceed transfer_cap={budget.transfer_cap}",
                            "transfer_cap", budget.transfer_cap)
    alpha = np.asarray(H.alpha)
    states = np.arange(q).reshape(q, 1)
    weights = alpha.copy()
    for _ in range(1, m):
        last = np.repeat(states[:, -1], q)
        nxt = np.tile(np.arange(q), len(states))
        w = np.repeat(weights, q) * alpha[nxt] * beta[last, nxt]
        states = np.column_stack([np.repeat(states, q, axis=0), nxt])
        keep = np.array([x != 0 for x in w], dtype=bool)
        states, weights = states[keep], w[keep]
    if cyclic:
        w = weights * beta[states[:, -1], states[:, 0]]
        keep = np.array([x != 0 for x in w], dtype=bool)
        states, weights = states[keep], w[keep]
    return TransferGraph(H, m, cyclic, states, weights)


# -- path and cycle counts on the transfer graph ---------------------------------
def _path_log(T: TransferGraph, n: int):
    """ln hom(P_n, T) in float mode, exact hom in exact mode."""
    d = T.node_weights
    if T.size == 0:
        return Fraction(0) if T.exact else -math.inf
    if T.exact:
        v = d.copy()
        for _ in range(n - 1):
            v = d * T.apply(v)
        return sum(v, Fraction(0))
    v = d.astype(float)
    log_scale = 0.0
    for _ in range(n - 1):
        v = d * T.apply(v)
        top = float(v.max())
        if top == 0.0:
            return -math.inf
        v /= top
        log_scale += math.log(top)
    total = float(v.sum())
    return -math.inf if total == 0.0 else log_scale + math.log(total)


def _scaled_matmul(a, b):
    (A, la), (B, lb) = a, b
    C = A @ B
    top = float(np.max(C)) if C.size else 0.0
    if top == 0.0:
        return C, -math.inf
    return C / top, la + lb + math.log(top)


def _cycle_log(T: TransferGraph, n: int, budget: Budget | None = None):
    """ln tr((D B)^n) in float mode (nonnegative powering keeps zeros exact); exact trace otherwise."""
    if T.size == 0:
        return Fraction(0) if T.exact else -math.inf
    M = T.node_weights[:, None] * T.edge_weight_matrix(budget)
    if T.exact:
        R = None
        P = M
        k = n
        while k:
            if k & 1:
                R = P if R is None else R.dot(P)
            k >>= 1
            if k:
                P = P.dot(P)
        return sum(R.diagonal(), Fraction(0))
    M = M.astype(float)
    top = float(M.max())
    base = (M / top, math.log(top))
    result = None
    k = n
    while k:
        if k & 1:
            result = base if result is None else _scaled_matmul(result, base)
            if result[1] == -math.inf:
                return -math.inf
        k >>= 1
        if k:
            base = _scaled_matmul(base, base)
    tr = float(np.trace(result[0]))
    return -math.inf if tr == 0.0 else result[1] + math.log(tr)


def _grid_value(kind: str, n: int, m: int, H: WeightedGraph, budget: Budget | None):
    cyc_n, cyc_m = _cyclic_dims(kind)
    if n < 1 or m < 1:
        raise PreconditionError("grid sides must be at least 1")
    if (cyc_n and n < 3) or (cyc_m and m < 3):
        raise PreconditionError("cycle factors need length at least 3")
    T = transfer_graph(H, m, cyclic=cyc_m, budget=budget)
    return _cycle_log(T, n, budget) if cyc_n else _path_log(T, n)


def grid_hom(kind: str, n: int, m: int, H: WeightedGraph, budget: Budget | None = None):
    """hom of the grid into H: exact in exact mode, a float (possibly inf) otherwise."""
    val = _grid_value(kind, n, m, H, budget)
    if H.exact:
        return val
    return 0.0 if val == -math.inf else math.exp(val)


def grid_log_hom(kind: str, n: int, m: int, H: WeightedGraph, budget: Budget | None = None) -> float:
    """ln hom of the grid into H; -inf when there is no homomorphism."""
    val = _grid_value(kind, n, m, H, budget)
    if H.exact:
        return -math.inf if val == 0 else math.log(val.numerator) - math.log(val.denominator)
    return val


def grid_ln_hom(kind: str, n: int, m: int, H: WeightedGraph, budget: Budget | None = None) -> float:
    """ln hom per node."""
    return grid_log_hom(kind, n, m, H, budget) / (n * m)


# -- convergence experiments ------------------------------------------------------
@dataclass(frozen=True)
class GridRow:
    n: int
    m: int
    value: float
    delta: float  # difference to the previous row; nan on the first row


@dataclass(frozen=True)
class GridConvergence:
    kind: str
    rows: tuple
    monotone: bool  # finite |delta| values never increase
    warnings: tuple


def convergence_experiment(kind: str, H: WeightedGraph, sizes, budget: Budget | None = None) -> GridConvergence:
    """ln hom per node over a schedule of sizes (ints mean square n = m, or (n, m) pairs)."""
    kind = normalize_grid_kind(kind)
    pairs = [(s, s) if isinstance(s, int) else (int(s[0]), int(s[1])) for s in sizes]
    warnings = []
    odd = any(n % 2 for n, _ in pairs) or (kind == "torus" and any(m % 2 for _, m in pairs))
    if kind != "path" and odd and H.is_connected() and H.is_bipartite():
        warnings.append("H is connected and bipartite: odd cycle lengths admit no homomorphism "
                        "(restrict to even sizes or use a non-bipartite H)")
    rows, prev = [], None
    for n, m in pairs:
        val = grid_ln_hom(kind, n, m, H, budget)
        delta = math.nan if prev is None else val - prev
        if prev is not None and (math.isinf(val) or math.isinf(prev)):
            delta = math.nan
        rows.append(GridRow(n, m, val, delta))
        prev = val
    deltas = [abs(r.delta) for r in rows if not math.isnan(r.delta)]
    monotone = all(b <= a + 1e-15 for a, b in zip(deltas, deltas[1:]))
    return GridConvergence(kind, tuple(rows), monotone, tuple(warnings))

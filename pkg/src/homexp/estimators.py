"""scikit-learn style wrappers: graphs in, per-node log partition values out.

``X`` is always a sequence of :class:`SimpleGraph`.  ``fit`` validates the
target and derives the constants that do not depend on the graphs (beyond
the degree bound); ``predict`` returns one value per graph.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cavity import CavityConfig, local_estimate_ln_t, locality_constant
from .cluster import ClusterContext, DEFAULT_B, error_radius, expansion_constants, require_valid, truncated_ln_t
from .exceptions import PreconditionError
from .homcount import log_density
from .inversion import inversion_system, recover_counts
from .localstats import histogram
from .validation import check_graph_sequence, check_positive_int, check_weighted_graph


def _degree_bound(D, graphs) -> int:
    return D if D is not None else max(max(g.max_degree for g in graphs), 1)


class ClusterExpansionEstimator(BaseEstimator):
    """Truncated cluster expansion with certified per-node radius."""

    def __init__(self, H=None, k=4, b=DEFAULT_B, D=None):
        self.H = H
        self.k = k
        self.b = b
        self.D = D

    def fit(self, X, y=None):
        H = check_weighted_graph(self.H, unit_interval=True)
        check_positive_int(self.k, "k")
        graphs = check_graph_sequence(X)
        self.D_ = _degree_bound(self.D, graphs)
        self.constants_ = expansion_constants(self.D_, H, self.b)
        require_valid(self.constants_)
        self.context_ = ClusterContext(H, 2 * self.k)
        return self

    def predict_certified(self, X) -> list:
        check_is_fitted(self, "constants_")
        graphs = check_graph_sequence(X, max_degree=self.D_)
        return [truncated_ln_t(g, self.H, self.k, self.b, self.D_, context=self.context_) for g in graphs]

    def predict(self, X) -> np.ndarray:
        return np.array([float(r.value) for r in self.predict_certified(X)])

    @property
    def error_radius_(self) -> float:
        check_is_fitted(self, "constants_")
        return error_radius(self.constants_, self.k)


class CavityEstimator(BaseEstimator):
    """Random-ordering r-ball estimator with locality plus Monte-Carlo radius."""

    def __init__(self, H=None, r=3, n_orderings=200, random_state=0, D=None, exact_orderings=False):
        self.H = H
        self.r = r
        self.n_orderings = n_orderings
        self.random_state = random_state
        self.D = D
        self.exact_orderings = exact_orderings

    def fit(self, X, y=None):
        H = check_weighted_graph(self.H, unit_interval=True)
        check_positive_int(self.r, "r", minimum=0)
        graphs = check_graph_sequence(X)
        self.D_ = _degree_bound(self.D, graphs)
        self.kappa_ = locality_constant(H, self.D_)
        if self.kappa_ >= 1:
            raise PreconditionError(f"no locality certificate: kappa = {self.kappa_:.6g} >= 1")
        self.config_ = CavityConfig(self.r, self.n_orderings, int(self.random_state or 0), self.D_,
                                    self.exact_orderings)
        return self

    def predict_certified(self, X) -> list:
        check_is_fitted(self, "config_")
        graphs = check_graph_sequence(X, max_degree=self.D_)
        return [local_estimate_ln_t(g, self.H, self.config_) for g in graphs]

    def predict(self, X) -> np.ndarray:
        return np.array([r.value for r in self.predict_certified(X)])


class ExactLogPartition(BaseEstimator):
    """Exact per-node ln t(G, H) by variable elimination."""

    def __init__(self, H=None):
        self.H = H

    def fit(self, X=None, y=None):
        self.target_ = check_weighted_graph(self.H)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "target_")
        graphs = check_graph_sequence(X)
        return np.array([log_density(g, self.target_) / g.node_count for g in graphs])


class BallHistogramTransformer(TransformerMixin, BaseEstimator):
    """Rows of r-ball frequencies over the ball types seen during fit."""

    def __init__(self, r=1):
        self.r = r

    def fit(self, X, y=None):
        check_positive_int(self.r, "r", minimum=0)
        graphs = check_graph_sequence(X)
        seen = set()
        for g in graphs:
            seen.update(histogram(g, self.r).frequencies)
        self.vocabulary_ = {B: i for i, B in enumerate(sorted(seen))}
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "vocabulary_")
        graphs = check_graph_sequence(X)
        out = np.zeros((len(graphs), len(self.vocabulary_)))
        for row, g in enumerate(graphs):
            for B, freq in histogram(g, self.r).frequencies.items():
                col = self.vocabulary_.get(B)
                if col is not None:
                    out[row, col] = float(freq)
        return out

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        check_is_fitted(self, "vocabulary_")
        return np.array([B.hex() for B in sorted(self.vocabulary_, key=self.vocabulary_.get)], dtype=object)


class CountRecovery(BaseEstimator):
    """Estimate subgraph counts of every connected type with 2..m nodes."""

    def __init__(self, m=2, q=40, method="series"):
        self.m = m
        self.q = q
        self.method = method

    def fit(self, X=None, y=None):
        self.system_ = inversion_system(self.m, self.q, method=self.method)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "system_")
        graphs = check_graph_sequence(X)
        return np.array([recover_counts(g, self.system_).estimates for g in graphs])

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        check_is_fitted(self, "system_")
        return np.array(self.system_.family.names(), dtype=object)

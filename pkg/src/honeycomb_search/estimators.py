"""scikit-learn style wrappers around the search simulation and scaling fit.

``HoneycombSearch.fit()`` runs one search experiment and stores its results
as fitted attributes; ``ScalingRegressor`` fits the power law
``t_star = exp(b) * N**a``.  Both expose ``get_params``/``set_params`` so
they can be cloned and swept with the usual sklearn tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .lattice import LatticeConfig
from .search import loglog_fit, run_search, verify_prediction
from .spectral import predict
from .walk import SearchTarget


class HoneycombSearch(BaseEstimator):
    """One marked-cell search on the ``m x m`` honeycomb torus.

    Parameters
    ----------
    m : int
        Cells per torus direction.
    mode : {"akr", "tulsi"}
    marked : tuple of int
        Marked cell ``(n1, n2)``.
    max_steps : int or None
        Simulation window; None means three times the spectral prediction.
    delta : float or None
        Tulsi coupling angle; None means ``1/sqrt(log N)``.
    log_base : {"natural", "base2", "base10"}
    oracle_control : {0, 1}
        Ancilla value that enables the oracle in Tulsi mode.
    """

    def __init__(
        self,
        m=8,
        mode="akr",
        marked=(0, 0),
        max_steps=None,
        delta=None,
        log_base="natural",
        oracle_control=0,
    ):
        self.m = m
        self.mode = mode
        self.marked = marked
        self.max_steps = max_steps
        self.delta = delta
        self.log_base = log_base
        self.oracle_control = oracle_control

    def fit(self, X=None, y=None):
        """Run the simulation. ``X`` and ``y`` are ignored."""
        cfg = LatticeConfig(self.m)
        target = SearchTarget(self.marked[0], self.marked[1], cfg)
        self.summary_ = predict(cfg)
        self.run_ = run_search(
            cfg,
            target,
            mode=self.mode,
            max_steps=self.max_steps,
            delta=self.delta,
            log_base=self.log_base,
            oracle_control=self.oracle_control,
            summary=self.summary_,
        )
        self.t_star_ = self.run_.t_star
        self.p_star_ = self.run_.p_star
        self.report_ = verify_prediction(self.run_, self.summary_)
        return self

    def predict(self, X):
        """Marked-cell probability at the step indices in ``X``."""
        check_is_fitted(self, "run_")
        t = check_array(np.asarray(X).reshape(-1, 1), dtype=np.int64, ensure_min_samples=1).ravel()
        if t.min() < 0 or t.max() > self.run_.t[-1]:
            raise ValueError(f"step indices must lie in [0, {self.run_.t[-1]}]")
        return self.run_.p_support[t]


class ScalingRegressor(RegressorMixin, BaseEstimator):
    """Power-law fit of peak time against lattice size ``N``.

    After ``fit``, ``coef_`` is the log-log slope, ``intercept_`` the log
    prefactor and ``r_squared_`` the coefficient of determination in log
    space.
    """

    def __init__(self, min_sizes=4):
        self.min_sizes = min_sizes

    def fit(self, X, y):
        X, y = check_X_y(np.asarray(X, float).reshape(-1, 1), y, y_numeric=True)
        if len(np.unique(X[:, 0])) < self.min_sizes:
            raise ValueError(f"need at least {self.min_sizes} distinct sizes")
        if np.any(X <= 0) or np.any(y <= 0):
            raise ValueError("sizes and times must be positive for a log-log fit")
        self.coef_, self.intercept_, self.r_squared_ = loglog_fit(X[:, 0], y)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(np.asarray(X, float).reshape(-1, 1))
        return np.exp(self.intercept_) * X[:, 0] ** self.coef_

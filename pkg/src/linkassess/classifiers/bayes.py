"""Gaussian naive Bayes."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike


class GaussianNB:
    def __init__(self, var_smoothing: float = 1e-9):
        self.var_smoothing = var_smoothing

    def fit(self, X: ArrayLike, y: ArrayLike) -> "GaussianNB":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        floor = self.var_smoothing * max(float(X.var(axis=0).max()), 1.0)
        self.theta_ = np.array([X[y == c].mean(axis=0) for c in (0, 1)])
        self.var_ = np.array([X[y == c].var(axis=0) for c in (0, 1)]) + floor
        self.class_prior_ = np.array([np.mean(y == c) for c in (0, 1)])
        return self

    def joint_log_likelihood(self, X: ArrayLike) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty((X.shape[0], 2))
        for c in (0, 1):
            nll = 0.5 * np.sum(np.log(2.0 * np.pi * self.var_[c]))
            nll += 0.5 * np.sum((X - self.theta_[c]) ** 2 / self.var_[c], axis=1)
            out[:, c] = np.log(self.class_prior_[c]) - nll
        return out

    def predict_proba(self, X: ArrayLike) -> np.ndarray:
        """Posterior probability of class 1."""
        jll = self.joint_log_likelihood(X)
        return np.exp(jll[:, 1] - np.logaddexp(jll[:, 0], jll[:, 1]))

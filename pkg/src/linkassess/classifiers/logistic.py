"""Binary logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

import numpy as np


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def penalized_loss(w, b, X, y, penalty=1e-4, regularization="L2"):
    """Mean log-loss plus the weight penalty (bias is not penalised)."""
    z = X @ w + b
    # log(1 + e^z) - y z, computed without overflow
    loss = np.mean(np.logaddexp(0.0, z) - y * z)
    if regularization == "L2":
        return loss + 0.5 * penalty * np.dot(w, w)
    return loss + penalty * np.abs(w).sum()


def loss_gradient(w, b, X, y, penalty=1e-4, regularization="L2"):
    """Gradient of :func:`penalized_loss` w.r.t. (w, b); sign subgradient for L1."""
    r = sigmoid(X @ w + b) - y
    gw = X.T @ r / len(y)
    gb = r.mean()
    if regularization == "L2":
        gw = gw + penalty * w
    else:
        gw = gw + penalty * np.sign(w)
    return gw, gb


class LogisticRegression:
    def __init__(self, penalty=1e-4, regularization="L2", learning_rate=0.1, epochs=500):
        self.penalty = penalty
        self.regularization = regularization
        self.learning_rate = learning_rate
        self.epochs = epochs

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        w = np.zeros(X.shape[1])
        b = 0.0
        lr = self.learning_rate
        for _ in range(self.epochs):
            if self.regularization == "L2":
                gw, gb = loss_gradient(w, b, X, y, self.penalty, "L2")
                w = w - lr * gw
            else:
                # proximal step: smooth part first, then soft-threshold
                gw, gb = loss_gradient(w, b, X, y, 0.0, "L2")
                w = w - lr * gw
                w = np.sign(w) * np.maximum(np.abs(w) - lr * self.penalty, 0.0)
            b = b - lr * gb
        self.coef_ = w
        self.intercept_ = float(b)
        return self

    def decision_function(self, X):
        return np.asarray(X, dtype=np.float64) @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        return sigmoid(self.decision_function(X))

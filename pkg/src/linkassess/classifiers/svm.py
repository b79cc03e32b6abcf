"""Soft-margin SVM with an RBF kernel, trained by SMO, plus Platt scaling.

The solver works on the dual in minimisation form

    min_a  0.5 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,

with ``Q_ij = y_i y_j K(x_i, x_j)`` and picks the working pair by
maximal violation for ``i`` and second-order gain for ``j``
(Fan, Chen & Lin, JMLR 2005).
"""

from __future__ import annotations

import logging

import numpy as np

log = logging.getLogger(__name__)

TAU = 1e-12


def rbf_kernel(A, B, gamma):
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    sq = (A ** 2).sum(axis=1)[:, None] + (B ** 2).sum(axis=1)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


def smo(K, y, C=1.0, tol=1e-3, max_iter=1_000_000, record_objective=False):
    """Solve the SVM dual for a precomputed kernel matrix.

    Returns ``(alpha, rho, info)``; the decision value of a point is
    ``sum_i alpha_i y_i K(x_i, x) - rho``. ``info`` carries the iteration
    count, final KKT gap and, if requested, the dual objective after every
    update.
    """
    n = len(y)
    y = np.asarray(y, dtype=np.float64)
    alpha = np.zeros(n)
    G = -np.ones(n)                  # gradient of the dual objective, Q a - e
    QD = np.diag(K).copy()
    objective = []
    gap = np.inf
    it = 0
    while it < max_iter:
        minus_yG = -y * G
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            gap = 0.0
            break
        cand = np.where(up, minus_yG, -np.inf)
        i = int(np.argmax(cand))
        m_up = cand[i]
        M_low = np.min(np.where(low, minus_yG, np.inf))
        gap = m_up - M_low
        if gap < tol:
            break
        b = m_up - minus_yG
        a = QD[i] + QD - 2.0 * K[i]
        a = np.where(a > 0, a, TAU)
        viable = low & (b > 0)
        gain = np.where(viable, -(b * b) / a, np.inf)
        j = int(np.argmin(gain))

        Qi = y[i] * y * K[i]
        Qj = y[j] * y * K[j]
        ai, aj = alpha[i], alpha[j]
        if y[i] != y[j]:
            quad = QD[i] + QD[j] + 2.0 * Qi[j]
            quad = quad if quad > 0 else TAU
            delta = (-G[i] - G[j]) / quad
            diff = ai - aj
            ni, nj = ai + delta, aj + delta
            if diff > 0:
                if nj < 0:
                    nj, ni = 0.0, diff
            elif ni < 0:
                ni, nj = 0.0, -diff
            if diff > 0:
                if ni > C:
                    ni, nj = C, C - diff
            elif nj > C:
                nj, ni = C, C + diff
        else:
            quad = QD[i] + QD[j] - 2.0 * Qi[j]
            quad = quad if quad > 0 else TAU
            delta = (G[i] - G[j]) / quad
            total = ai + aj
            ni, nj = ai - delta, aj + delta
            if total > C:
                if ni > C:
                    ni, nj = C, total - C
            elif nj < 0:
                nj, ni = 0.0, total
            if total > C:
                if nj > C:
                    nj, ni = C, total - C
            elif ni < 0:
                ni, nj = 0.0, total
        G += Qi * (ni - ai) + Qj * (nj - aj)
        alpha[i], alpha[j] = ni, nj
        it += 1
        if record_objective:
            objective.append(dual_objective(alpha, G))
    else:
        log.warning("SMO stopped after %d iterations with KKT gap %.3g", it, gap)

    rho = _rho(alpha, y, G, C)
    return alpha, rho, {"iterations": it, "gap": float(gap), "objective": objective}


def dual_objective(alpha, G):
    """e'a - 0.5 a'Qa, evaluated from the maintained gradient G = Qa - e."""
    return float(alpha.sum() - 0.5 * alpha @ (G + 1.0))


def _rho(alpha, y, G, C):
    yG = y * G
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(yG[free].mean())
    at_upper = alpha >= C
    at_lower = alpha <= 0
    # bounds on rho implied by the KKT conditions of bounded variables
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = yG[ub_mask].min() if ub_mask.any() else np.inf
    lb = yG[lb_mask].max() if lb_mask.any() else -np.inf
    if np.isinf(ub) or np.isinf(lb):
        return float(ub if np.isfinite(ub) else lb if np.isfinite(lb) else 0.0)
    return float((ub + lb) / 2.0)


def kkt_violation(K, y, alpha, rho, C):
    """Largest violation of the primal-dual optimality conditions in margin units."""
    y = np.asarray(y, dtype=np.float64)
    margin = y * (K @ (alpha * y) - rho)
    eps = 1e-12 * C
    free = (alpha > eps) & (alpha < C - eps)
    at_zero = alpha <= eps
    at_c = alpha >= C - eps
    viol = np.zeros_like(margin)
    viol[at_zero] = np.maximum(0.0, 1.0 - margin[at_zero])
    viol[at_c] = np.maximum(0.0, margin[at_c] - 1.0)
    viol[free] = np.abs(margin[free] - 1.0)
    return float(viol.max()) if viol.size else 0.0


def platt_scaling(f, labels, max_iter=100, min_step=1e-10, sigma=1e-12, eps=1e-5):
    """Fit P(y=1|f) = 1 / (1 + exp(A f + B)) by regularised maximum likelihood.

    Newton's method with backtracking, following Lin, Lin & Weng (2007).
    """
    f = np.asarray(f, dtype=np.float64)
    labels = np.asarray(labels)
    prior1 = float(np.sum(labels == 1))
    prior0 = float(len(labels) - prior1)
    hi = (prior1 + 1.0) / (prior1 + 2.0)
    lo = 1.0 / (prior0 + 2.0)
    t = np.where(labels == 1, hi, lo)

    def objective(A, B):
        fApB = f * A + B
        return float(np.sum(np.where(fApB >= 0,
                                     t * fApB + np.log1p(np.exp(-np.abs(fApB))),
                                     (t - 1.0) * fApB + np.log1p(np.exp(-np.abs(fApB))))))

    A, B = 0.0, np.log((prior0 + 1.0) / (prior1 + 1.0))
    fval = objective(A, B)
    for _ in range(max_iter):
        fApB = f * A + B
        e = np.exp(-np.abs(fApB))
        p = np.where(fApB >= 0, e / (1.0 + e), 1.0 / (1.0 + e))
        q = 1.0 - p
        d2 = p * q
        h11 = sigma + np.sum(f * f * d2)
        h22 = sigma + np.sum(d2)
        h21 = np.sum(f * d2)
        d1 = t - p
        g1 = np.sum(f * d1)
        g2 = np.sum(d1)
        if abs(g1) < eps and abs(g2) < eps:
            break
        det = h11 * h22 - h21 * h21
        dA = -(h22 * g1 - h21 * g2) / det
        dB = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * dA + g2 * dB
        step = 1.0
        while step >= min_step:
            nA, nB = A + step * dA, B + step * dB
            nf = objective(nA, nB)
            if nf < fval + 1e-4 * step * gd:
                A, B, fval = nA, nB, nf
                break
            step /= 2.0
        else:
            log.debug("Platt line search failed")
            break
    return float(A), float(B)


def platt_probability(f, A, B):
    fApB = np.asarray(f, dtype=np.float64) * A + B
    e = np.exp(-np.abs(fApB))
    return np.where(fApB >= 0, e / (1.0 + e), 1.0 / (1.0 + e))


class RBFSVM:
    def __init__(self, C=1.0, gamma=1.0, tol=1e-3, max_iter=1_000_000):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        ys = np.where(np.asarray(y) == 1, 1.0, -1.0)
        K = rbf_kernel(X, X, self.gamma)
        alpha, rho, info = smo(K, ys, self.C, self.tol, self.max_iter)
        sv = alpha > 0
        self.support_vectors_ = X[sv]
        self.dual_coef_ = (alpha * ys)[sv]
        self.rho_ = rho
        self.n_iter_ = info["iterations"]
        self.kkt_gap_ = info["gap"]
        train_f = K[:, sv] @ self.dual_coef_ - rho
        self.prob_a_, self.prob_b_ = platt_scaling(train_f, (ys > 0).astype(int))
        return self

    def decision_function(self, X, batch=4096):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(len(X))
        for s in range(0, len(X), batch):
            out[s:s + batch] = rbf_kernel(X[s:s + batch], self.support_vectors_, self.gamma) @ self.dual_coef_
        return out - self.rho_

    def predict_proba(self, X):
        return platt_probability(self.decision_function(X), self.prob_a_, self.prob_b_)

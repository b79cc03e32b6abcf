"""CART classification tree (Gini impurity) and the one-rule stump."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Node:
    value: float                     # fraction of label 1 among training rows at this node
    n: int
    feature: int = -1
    threshold: float = 0.0
    left: "Node | None" = None
    right: "Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _gini(pos, total):
    p = pos / total
    return 2.0 * p * (1.0 - p)


def best_split(X, y, min_leaf=1, criterion="gini"):
    """Best (feature, threshold, score) over all midpoints; lower score is better.

    ``score`` is the size-weighted child Gini impurity, or the number of
    misclassified rows for ``criterion="error"``. Ties go to the lowest
    feature index, then the lowest threshold.
    """
    n, d = X.shape
    best = (None, None, np.inf)
    for f in range(d):
        order = np.argsort(X[:, f], kind="stable")
        xs, ys = X[order, f], y[order]
        left_n = np.arange(1, n)
        left_pos = np.cumsum(ys)[:-1]
        right_n = n - left_n
        right_pos = ys.sum() - left_pos
        ok = (xs[1:] > xs[:-1]) & (left_n >= min_leaf) & (right_n >= min_leaf)
        if not ok.any():
            continue
        if criterion == "gini":
            score = (left_n * _gini(left_pos, left_n) + right_n * _gini(right_pos, right_n)) / n
        else:
            score = (np.minimum(left_pos, left_n - left_pos)
                     + np.minimum(right_pos, right_n - right_pos)).astype(np.float64)
        score = np.where(ok, score, np.inf)
        k = int(np.argmin(score))
        if score[k] < best[2] - 1e-12:
            best = (f, 0.5 * (xs[k] + xs[k + 1]), float(score[k]))
    return best


class DecisionTree:
    def __init__(self, max_depth: int = 8, min_leaf: int = 5, criterion: str = "gini"):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.criterion = criterion

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        self.root_ = self._grow(X, y, 0)
        return self

    def _grow(self, X, y, depth):
        node = Node(value=float(y.mean()), n=len(y))
        pos = y.sum()
        if depth >= self.max_depth or pos == 0 or pos == len(y) or len(y) < 2 * self.min_leaf:
            return node
        f, thr, score = best_split(X, y, self.min_leaf, self.criterion)
        if f is None:
            return node
        parent = _gini(pos, len(y)) if self.criterion == "gini" else min(pos, len(y) - pos)
        if score >= parent - 1e-12:
            return node
        mask = X[:, f] <= thr
        node.feature, node.threshold = f, thr
        node.left = self._grow(X[mask], y[mask], depth + 1)
        node.right = self._grow(X[~mask], y[~mask], depth + 1)
        return node

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(len(X))
        # route index sets down the tree rather than row by row
        stack = [(self.root_, np.arange(len(X)))]
        while stack:
            node, idx = stack.pop()
            if node.is_leaf or idx.size == 0:
                out[idx] = node.value
                continue
            go_left = X[idx, node.feature] <= node.threshold
            stack.append((node.left, idx[go_left]))
            stack.append((node.right, idx[~go_left]))
        return out

    @property
    def depth(self) -> int:
        def _d(node):
            return 0 if node.is_leaf else 1 + max(_d(node.left), _d(node.right))
        return _d(self.root_)


class OneRule(DecisionTree):
    """Single-threshold rule on the one feature that misclassifies the fewest training rows."""

    def __init__(self):
        super().__init__(max_depth=1, min_leaf=1, criterion="error")

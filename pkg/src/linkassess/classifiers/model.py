"""Fitting a :class:`ModelSpec` on an FDM and predicting with the result."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..features import FeatureDataModel, Instance
from .baselines import RandomClassifier
from .bayes import GaussianNB
from .knn import KNeighbors
from .logistic import LogisticRegression
from .spec import ModelSpec
from .svm import RBFSVM
from .tree import DecisionTree, OneRule


class SchemaMismatch(ValueError):
    pass


class TrainingError(ValueError):
    pass


def _make_estimator(spec: ModelSpec, n_features: int):
    p = spec.hyperparameters
    kind = spec.kind
    if kind == "logistic_regression":
        return LogisticRegression(p["penalty"], p["regularization"], p["learning_rate"], p["epochs"])
    if kind == "gaussian_nb":
        return GaussianNB(p["var_smoothing"])
    if kind == "knn":
        return KNeighbors(p["k"])
    if kind == "decision_tree":
        return DecisionTree(p["max_depth"], p["min_leaf"])
    if kind == "svm_rbf":
        gamma = p["gamma"] if p["gamma"] is not None else 1.0 / n_features
        return RBFSVM(p["C"], gamma, p["tol"], p["max_iter"])
    if kind == "random_baseline":
        return RandomClassifier(p["seed"])
    if kind == "one_rule_baseline":
        return OneRule()
    raise AssertionError(kind)


@dataclass(frozen=True, eq=False)
class TrainedModel:
    spec: ModelSpec
    columns: tuple[str, ...]
    mean: np.ndarray
    std: np.ndarray
    estimator: object
    threshold: float = 0.5
    train_source: str = ""

    def _matrix(self, data) -> np.ndarray:
        if isinstance(data, FeatureDataModel):
            if data.schema.columns != self.columns:
                raise SchemaMismatch(
                    f"model expects columns {self.columns}, got {data.schema.columns}")
            X = data.matrix()
        elif isinstance(data, Instance):
            row = list(data.features)
            if data.global_density is not None:
                row.append(data.global_density)
            X = np.array([row], dtype=np.float64)
        else:
            X = np.asarray(data, dtype=np.float64)
            if X.ndim == 1:
                X = X[None, :]
        if X.shape[1] != len(self.columns):
            raise SchemaMismatch(f"model expects {len(self.columns)} features, got {X.shape[1]}")
        return X

    def standardize(self, X) -> np.ndarray:
        return (X - self.mean) / self.std

    def predict_probability(self, data) -> np.ndarray:
        X = self._matrix(data)
        if not np.isfinite(X).all():
            raise ValueError("non-finite feature values")
        p = self.estimator.predict_proba(self.standardize(X))
        return np.clip(np.asarray(p, dtype=np.float64), 0.0, 1.0)

    def predict_class(self, data) -> np.ndarray:
        return (self.predict_probability(data) >= self.threshold).astype(np.int64)


def fit_arrays(spec: ModelSpec, X, y, columns=None, threshold: float = 0.5,
               train_source: str = "") -> TrainedModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64).ravel()
    if X.ndim != 2 or len(X) == 0:
        raise TrainingError("training data is empty")
    if len(y) != len(X):
        raise TrainingError("features and labels differ in length")
    if not np.isfinite(X).all():
        raise TrainingError("non-finite feature values in training data")
    if not np.isin(y, (0, 1)).all():
        raise TrainingError("labels must be 0 or 1")
    baseline = spec.kind in ("random_baseline", "one_rule_baseline")
    if not baseline and len(np.unique(y)) < 2:
        raise TrainingError(f"{spec.kind} needs both classes in the training data")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std > 1e-12, std, 1.0)
    Z = (X - mean) / std
    est = _make_estimator(spec, X.shape[1]).fit(Z, y)
    if columns is None:
        columns = tuple(f"x{i}" for i in range(X.shape[1]))
    return TrainedModel(spec, tuple(columns), mean, std, est, threshold, train_source)


def fit(spec: ModelSpec, train: FeatureDataModel, threshold: float = 0.5) -> TrainedModel:
    if len(train) == 0:
        raise TrainingError("training FDM is empty")
    return fit_arrays(spec, train.matrix(), train.labels, train.schema.columns,
                      threshold, train.source)


def predict_class(model: TrainedModel, data) -> np.ndarray:
    return model.predict_class(data)


def predict_probability(model: TrainedModel, data) -> np.ndarray:
    return model.predict_probability(data)

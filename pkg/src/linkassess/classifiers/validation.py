"""k-fold splitting and cross-validated evaluation."""

from __future__ import annotations

import numpy as np

from ..features import FeatureDataModel
from ..metrics import EvaluationReport, evaluate
from .model import fit
from .spec import ModelSpec


def kfold_split(n_instances: int, k: int, seed: int, stratify_labels=None):
    """Split ``range(n_instances)`` into ``k`` (train, test) index pairs.

    Indices are shuffled and dealt round-robin. With labels, each class is
    shuffled separately and the classes are dealt one after another, which
    keeps every class within one instance of an even share per fold.
    """
    if not 2 <= k <= n_instances:
        raise ValueError(f"k must lie in [2, {n_instances}], got {k}")
    rng = np.random.default_rng(seed)
    if stratify_labels is None:
        order = rng.permutation(n_instances)
    else:
        labels = np.asarray(stratify_labels)
        if len(labels) != n_instances:
            raise ValueError("label count differs from instance count")
        order = np.concatenate([rng.permutation(np.flatnonzero(labels == c))
                                for c in np.unique(labels)])
    fold_of = np.empty(n_instances, dtype=np.int64)
    fold_of[order] = np.arange(n_instances) % k
    everything = np.arange(n_instances)
    return [(everything[fold_of != f], everything[fold_of == f]) for f in range(k)]


def cross_validate(spec: ModelSpec, fdm: FeatureDataModel, k: int = 10, seed: int = 0,
                   threshold: float = 0.5) -> EvaluationReport:
    """Stratified k-fold evaluation; fold metrics are averaged with fold sizes as weights."""
    folds = kfold_split(len(fdm), k, seed, fdm.labels)
    reports = []
    for train_idx, test_idx in folds:
        model = fit(spec, fdm.subset(train_idx), threshold)
        test = fdm.subset(test_idx)
        scores = model.predict_probability(test)
        preds = (scores >= threshold).astype(np.int64)
        reports.append(evaluate(preds, test.labels, scores))

    sizes = np.array([r.confusion.total for r in reports], dtype=np.float64)
    weights = sizes / sizes.sum()
    total_cm = reports[0].confusion
    for r in reports[1:]:
        total_cm = total_cm + r.confusion

    def avg(attr):
        return float(np.dot(weights, [getattr(r, attr) for r in reports]))

    aucs = [(w, r.auc) for w, r in zip(sizes, reports) if r.auc is not None]
    auc = None
    if aucs:
        w = np.array([a for a, _ in aucs])
        auc = float(np.dot(w / w.sum(), [b for _, b in aucs]))
    return EvaluationReport(
        confusion=total_cm,
        accuracy=avg("accuracy"),
        precision_weighted=avg("precision_weighted"),
        recall_weighted=avg("recall_weighted"),
        f_weighted=avg("f_weighted"),
        precision_positive=avg("precision_positive"),
        recall_positive=avg("recall_positive"),
        f_positive=avg("f_positive"),
        auc=auc,
        metadata={"model": spec.describe(), "kfold": k, "seed": seed},
        folds=reports,
    )

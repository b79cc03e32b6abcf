"""Confusion counts, support-weighted classification metrics and ROC/AUC."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.tn + other.tn,
                               self.fp + other.fp, self.fn + other.fn)


@dataclass
class EvaluationReport:
    confusion: ConfusionMatrix
    accuracy: float
    precision_weighted: float
    recall_weighted: float
    f_weighted: float
    precision_positive: float
    recall_positive: float
    f_positive: float
    auc: float | None = None
    metadata: dict = field(default_factory=dict)
    folds: list = field(default_factory=list)

    def as_record(self) -> dict:
        """Flat key/value view used for report files and tables."""
        rec = {k: v for k, v in self.metadata.items()}
        rec.update(asdict(self.confusion))
        for key in ("accuracy", "precision_weighted", "recall_weighted", "f_weighted",
                    "precision_positive", "recall_positive", "f_positive", "auc"):
            rec[key] = getattr(self, key)
        return rec


def _as_labels(x) -> np.ndarray:
    arr = np.asarray(x).astype(np.int64).ravel()
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")
    return arr


def _check_pair(preds, truth):
    p, t = _as_labels(preds), _as_labels(truth)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.size} predictions vs {t.size} labels")
    if p.size == 0:
        raise ValueError("nothing to evaluate")
    return p, t


def confusion(preds: Sequence[int], truth: Sequence[int]) -> ConfusionMatrix:
    p, t = _check_pair(preds, truth)
    return ConfusionMatrix(
        tp=int(np.sum((p == 1) & (t == 1))),
        tn=int(np.sum((p == 0) & (t == 0))),
        fp=int(np.sum((p == 1) & (t == 0))),
        fn=int(np.sum((p == 0) & (t == 1))),
    )


def _div(a: float, b: float) -> float:
    return a / b if b else 0.0


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = _div(tp, tp + fp)
    r = _div(tp, tp + fn)
    return p, r, _div(2 * p * r, p + r)


def positive_metrics(cm: ConfusionMatrix) -> tuple[float, float, float]:
    """Precision, recall and F of class 1 alone."""
    return _prf(cm.tp, cm.fp, cm.fn)


def weighted_from_confusion(cm: ConfusionMatrix) -> tuple[float, float, float, float]:
    total = cm.total
    pos = _prf(cm.tp, cm.fp, cm.fn)
    # class 0 as the positive class: its TP are our TN, its FP our FN, its FN our FP
    neg = _prf(cm.tn, cm.fn, cm.fp)
    w1 = (cm.tp + cm.fn) / total
    w0 = (cm.tn + cm.fp) / total
    acc = (cm.tp + cm.tn) / total
    return (acc,) + tuple(w1 * a + w0 * b for a, b in zip(pos, neg))


def weighted_metrics(preds: Sequence[int], truth: Sequence[int]) -> tuple[float, float, float, float]:
    """(accuracy, precision, recall, F) with per-class scores weighted by class support."""
    return weighted_from_confusion(confusion(preds, truth))


def roc_auc(scores: Sequence[float], truth: Sequence[int]) -> tuple[list[tuple[float, float]], float]:
    """ROC curve over every distinct score threshold and its trapezoidal area.

    Tied scores move the curve diagonally in a single step, which gives ties
    half credit.
    """
    s = np.asarray(scores, dtype=np.float64).ravel()
    t = _as_labels(truth)
    if s.shape != t.shape:
        raise ValueError("length mismatch between scores and labels")
    n_pos = int(t.sum())
    n_neg = t.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs both classes in the ground truth")
    order = np.argsort(-s, kind="mergesort")
    s, t = s[order], t[order]
    last = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tps = np.cumsum(t)[last]
    fps = (last + 1) - tps
    tpr = np.r_[0.0, tps / n_pos]
    fpr = np.r_[0.0, fps / n_neg]
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return list(zip(fpr.tolist(), tpr.tolist())), auc


def mann_whitney_auc(scores: Sequence[float], truth: Sequence[int]) -> float:
    """Probability that a random positive outscores a random negative (ties count half)."""
    s = np.asarray(scores, dtype=np.float64)
    t = _as_labels(truth)
    pos, neg = s[t == 1], s[t == 0]
    if pos.size == 0 or neg.size == 0:
        raise ValueError("need both classes")
    greater = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return float((greater + 0.5 * ties) / (pos.size * neg.size))


def evaluate(preds, truth, scores=None, metadata: dict | None = None) -> EvaluationReport:
    cm = confusion(preds, truth)
    acc, pw, rw, fw = weighted_from_confusion(cm)
    pp, rp, fp = positive_metrics(cm)
    auc = None
    if scores is not None:
        t = _as_labels(truth)
        if 0 < t.sum() < t.size:
            auc = roc_auc(scores, t)[1]
    return EvaluationReport(cm, acc, pw, rw, fw, pp, rp, fp, auc, dict(metadata or {}))

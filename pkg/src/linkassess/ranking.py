"""Tie-strength ranking of node pairs and its distance from the step-function ranker."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .features import FeatureDataModel


@dataclass(frozen=True)
class RankEntry:
    pair: tuple[str, str]
    e_obs: float
    e_real: int


@dataclass(frozen=True)
class RankingResult:
    entries: tuple[RankEntry, ...]
    error_total: float
    error_normalized: float
    model: str
    source: str


def ranking_error(entries: Sequence[RankEntry]) -> tuple[float, float]:
    """Sum and mean of |e_obs - e_real| over all ranked pairs."""
    if not entries:
        raise ValueError("no entries to score")
    obs = np.array([e.e_obs for e in entries], dtype=np.float64)
    real = np.array([e.e_real for e in entries], dtype=np.float64)
    if not np.all((obs >= 0.0) & (obs <= 1.0)):
        raise ValueError("e_obs must lie in [0, 1]")
    if not np.isin(real, (0.0, 1.0)).all():
        raise ValueError("e_real must be 0 or 1")
    total = float(np.abs(obs - real).sum())
    return total, total / len(entries)


def _rank(fdm: FeatureDataModel, probs, model_name: str) -> RankingResult:
    probs = np.asarray(probs, dtype=np.float64)
    order = np.argsort(probs, kind="stable")
    entries = tuple(RankEntry(fdm.pairs[i], float(probs[i]), int(fdm.labels[i])) for i in order)
    total, normalized = ranking_error(entries)
    return RankingResult(entries, total, normalized, model_name, fdm.source)


def best_ranker(fdm_sn: FeatureDataModel) -> RankingResult:
    """The step function: every pair ranked at its true label."""
    return _rank(fdm_sn, fdm_sn.labels.astype(np.float64), "best_ranker")


def rank_ties(model, fdm_sn: FeatureDataModel) -> RankingResult:
    return _rank(fdm_sn, model.predict_probability(fdm_sn), model.spec.describe())


def write_ranking(result: RankingResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["node_u", "node_v", "e_obs", "e_real", "rank_index"])
        for rank, e in enumerate(result.entries):
            w.writerow([e.pair[0], e.pair[1], repr(e.e_obs), e.e_real, rank])


def read_ranking(path) -> list[RankEntry]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t"))
    return [RankEntry((r["node_u"], r["node_v"]), float(r["e_obs"]), int(r["e_real"])) for r in rows]

"""Edge-proximity features and feature data models (FDMs).

All measures are computed from a neighbourhood indicator matrix ``N`` whose
row ``v`` marks the neighbourhood of ``v``. For directed networks the same
formulas are evaluated twice, once with in-neighbourhoods and once with
out-neighbourhoods, and every neighbourhood in a formula (denominators
included) uses the chosen direction.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .graph import GraphError, Network, all_pairs, density

log = logging.getLogger(__name__)

MEASURES = ("CN", "RA", "AAC", "JI", "PA", "SD", "HPI", "HDI", "CAR")
GLOBAL_FEATURE = "density"


def feature_names(directed: bool) -> tuple[str, ...]:
    if not directed:
        return MEASURES
    return tuple(f"{m}_{d}" for m in MEASURES for d in ("in", "out"))


@dataclass(frozen=True)
class FeatureSchema:
    feature_names: tuple[str, ...]
    directed: bool
    includes_global: bool

    @classmethod
    def for_network(cls, directed: bool, includes_global: bool = False) -> "FeatureSchema":
        return cls(feature_names(directed), directed, includes_global)

    @property
    def columns(self) -> tuple[str, ...]:
        if self.includes_global:
            return self.feature_names + (GLOBAL_FEATURE,)
        return self.feature_names

    @property
    def width(self) -> int:
        return len(self.columns)


@dataclass(frozen=True)
class Instance:
    pair: tuple[str, str]
    features: tuple[float, ...]
    global_density: float | None
    label: int
    source_network: str


@dataclass(frozen=True, eq=False)
class FeatureDataModel:
    """One row per node pair of one or more networks.

    ``X`` holds the proximity features only; the density column (if any) lives
    in ``global_density`` and is appended by :meth:`matrix`.
    """

    schema: FeatureSchema
    pairs: tuple[tuple[str, str], ...]
    X: np.ndarray
    labels: np.ndarray
    sources: tuple[str, ...]
    source: str
    global_density: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.pairs)
        if self.X.shape != (n, len(self.schema.feature_names)):
            raise ValueError(f"feature matrix shape {self.X.shape} does not match schema")
        if self.labels.shape != (n,) or len(self.sources) != n:
            raise ValueError("labels/sources length mismatch")
        if self.schema.includes_global != (self.global_density is not None):
            raise ValueError("global density presence must match schema")
        self.X.setflags(write=False)
        self.labels.setflags(write=False)

    def __len__(self) -> int:
        return len(self.pairs)

    def matrix(self) -> np.ndarray:
        if self.global_density is None:
            return self.X
        return np.column_stack([self.X, self.global_density])

    @property
    def instances(self) -> Iterator[Instance]:
        for k, pair in enumerate(self.pairs):
            g = None if self.global_density is None else float(self.global_density[k])
            yield Instance(pair, tuple(float(x) for x in self.X[k]), g,
                           int(self.labels[k]), self.sources[k])

    def subset(self, idx) -> "FeatureDataModel":
        idx = np.asarray(idx, dtype=np.int64)
        return FeatureDataModel(
            schema=self.schema,
            pairs=tuple(self.pairs[i] for i in idx),
            X=self.X[idx].copy(),
            labels=self.labels[idx].copy(),
            sources=tuple(self.sources[i] for i in idx),
            source=self.source,
            global_density=None if self.global_density is None else self.global_density[idx].copy(),
        )


# --- neighbourhood matrices ---------------------------------------------------

def _neighborhood_matrix(net: Network, direction: str) -> np.ndarray:
    a = net.adjacency()
    if direction == "in":
        return a.T.copy()
    return a


def _safe_inverse(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=np.float64)
    np.divide(1.0, x, out=out, where=x > 0)
    return out


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros(np.broadcast_shapes(num.shape, den.shape), dtype=np.float64)
    np.divide(num, den, out=out, where=den > 0)
    return out


def _car_matrix(N: np.ndarray, inv_deg: np.ndarray) -> np.ndarray:
    n = N.shape[0]
    car = np.zeros((n, n))
    for v in range(n):
        zs = np.flatnonzero(N[v])
        if zs.size == 0:
            continue
        common = N[:, zs]                       # [w, z] = z in L(w), z already in L(v)
        triple = (N * N[v]) @ N[zs].T           # [w, z] = |L(v) & L(w) & L(z)|
        car[v] = (common * triple) @ inv_deg[zs]
    return car


def proximity_matrices(N: np.ndarray) -> dict[str, np.ndarray]:
    """All nine measures for every node pair, from a neighbourhood indicator matrix."""
    deg = N.sum(axis=1)
    log_deg = np.log(np.where(deg > 1, deg, 1.0))
    inv_log = _safe_inverse(np.where(deg > 1, log_deg, 0.0))
    inv_deg = _safe_inverse(deg)

    cn = N @ N.T
    dv, dw = deg[:, None], deg[None, :]
    return {
        "CN": cn,
        "RA": (N * inv_deg) @ N.T,
        "AAC": (N * inv_log) @ N.T,
        "JI": _ratio(cn, dv + dw - cn),
        "PA": dv * dw,
        "SD": _ratio(2.0 * cn, dv + dw),
        "HPI": _ratio(cn, np.minimum(dv, dw)),
        "HDI": _ratio(cn, np.maximum(dv, dw)),
        "CAR": _car_matrix(N, inv_deg),
    }


def feature_tensor(net: Network) -> np.ndarray:
    """``(n, n, F)`` array of every schema feature for every ordered index pair."""
    if net.directed:
        per_dir = {d: proximity_matrices(_neighborhood_matrix(net, d)) for d in ("in", "out")}
        layers = [per_dir[d][m] for m in MEASURES for d in ("in", "out")]
    else:
        mats = proximity_matrices(_neighborhood_matrix(net, "undirected"))
        layers = [mats[m] for m in MEASURES]
    return np.stack(layers, axis=-1)


# --- single-pair API ----------------------------------------------------------

def _pair_context(net, v, w, direction):
    i, j = net.index(v), net.index(w)
    if i == j:
        raise GraphError("proximity needs two distinct nodes")
    if direction is None:
        direction = "out" if net.directed else "undirected"
    lv = net.neighbor_indices(i, direction)
    lw = net.neighbor_indices(j, direction)
    deg = lambda z: len(net.neighbor_indices(z, direction))  # noqa: E731
    return lv, lw, deg, direction


def common_neighbors(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, _, _ = _pair_context(net, v, w, direction)
    return float(len(lv & lw))


def resource_allocation(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, deg, _ = _pair_context(net, v, w, direction)
    return float(sum(1.0 / deg(z) for z in lv & lw if deg(z) > 0))


def adamic_adar(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, deg, _ = _pair_context(net, v, w, direction)
    return float(sum(1.0 / math.log(deg(z)) for z in lv & lw if deg(z) > 1))


def jaccard(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, _, _ = _pair_context(net, v, w, direction)
    union = len(lv | lw)
    return len(lv & lw) / union if union else 0.0


def preferential_attachment(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, _, _ = _pair_context(net, v, w, direction)
    return float(len(lv) * len(lw))


def sorensen_dice(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, _, _ = _pair_context(net, v, w, direction)
    total = len(lv) + len(lw)
    return 2.0 * len(lv & lw) / total if total else 0.0


def hub_promoted(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, _, _ = _pair_context(net, v, w, direction)
    low = min(len(lv), len(lw))
    return len(lv & lw) / low if low else 0.0


def hub_depressed(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, _, _ = _pair_context(net, v, w, direction)
    high = max(len(lv), len(lw))
    return len(lv & lw) / high if high else 0.0


def car_index(net: Network, v: str, w: str, direction: str | None = None) -> float:
    lv, lw, deg, d = _pair_context(net, v, w, direction)
    common = lv & lw
    return float(sum(len(common & net.neighbor_indices(z, d)) / deg(z)
                     for z in common if deg(z) > 0))


MEASURE_FUNCTIONS = {
    "CN": common_neighbors,
    "RA": resource_allocation,
    "AAC": adamic_adar,
    "JI": jaccard,
    "PA": preferential_attachment,
    "SD": sorensen_dice,
    "HPI": hub_promoted,
    "HDI": hub_depressed,
    "CAR": car_index,
}


def pair_features(net: Network, v: str, w: str) -> np.ndarray:
    """Feature vector of one pair in schema order (in- then out-variant per measure)."""
    if net.directed:
        vals = [MEASURE_FUNCTIONS[m](net, v, w, d) for m in MEASURES for d in ("in", "out")]
    else:
        vals = [MEASURE_FUNCTIONS[m](net, v, w, "undirected") for m in MEASURES]
    return np.array(vals, dtype=np.float64)


# --- FDM construction ---------------------------------------------------------

def _fdm_arrays(net: Network, pairs: np.ndarray):
    if net.n < 2:
        raise GraphError("an FDM needs at least two nodes")
    tensor = feature_tensor(net)
    X = tensor[pairs[:, 0], pairs[:, 1]]
    adj = net.adjacency()
    labels = adj[pairs[:, 0], pairs[:, 1]].astype(np.int64)
    names = tuple((net.nodes[i], net.nodes[j]) for i, j in pairs)
    return X, labels, names


def build_fdm(net: Network, include_global: bool = False) -> FeatureDataModel:
    pairs = all_pairs(net.n, net.directed)
    X, labels, names = _fdm_arrays(net, pairs)
    g = np.full(len(pairs), density(net)) if include_global else None
    return FeatureDataModel(
        schema=FeatureSchema.for_network(net.directed, include_global),
        pairs=names, X=X, labels=labels, sources=(net.id,) * len(pairs),
        source=net.id, global_density=g,
    )


def build_pairs_fdm(net: Network, pairs: Sequence[tuple[int, int]],
                    include_global: bool = False) -> FeatureDataModel:
    """FDM restricted to the given index pairs, features computed on ``net``."""
    pairs = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    X, labels, names = _fdm_arrays(net, pairs)
    g = np.full(len(pairs), density(net)) if include_global else None
    return FeatureDataModel(
        schema=FeatureSchema.for_network(net.directed, include_global),
        pairs=names, X=X, labels=labels, sources=(net.id,) * len(pairs),
        source=net.id, global_density=g,
    )


def build_aggregated_fdm(nets: Sequence[Network]) -> FeatureDataModel:
    if not nets:
        raise ValueError("need at least one network")
    if len({n.directed for n in nets}) != 1:
        raise GraphError("cannot aggregate directed and undirected networks")
    parts = [build_fdm(n, include_global=True) for n in nets]
    return concatenate(parts, source="aggregated" if len(parts) > 1 else parts[0].source)


def concatenate(parts: Sequence[FeatureDataModel], source: str) -> FeatureDataModel:
    schema = parts[0].schema
    if any(p.schema != schema for p in parts):
        raise ValueError("cannot concatenate FDMs with different schemas")
    g = None
    if schema.includes_global:
        g = np.concatenate([p.global_density for p in parts])
    return FeatureDataModel(
        schema=schema,
        pairs=tuple(pair for p in parts for pair in p.pairs),
        X=np.vstack([p.X for p in parts]),
        labels=np.concatenate([p.labels for p in parts]),
        sources=tuple(s for p in parts for s in p.sources),
        source=source, global_density=g,
    )


# --- diagnostics & export -----------------------------------------------------

class Correlation(NamedTuple):
    names: tuple[str, ...]
    values: np.ndarray
    constant: tuple[str, ...]


def feature_correlation_matrix(fdm: FeatureDataModel) -> Correlation:
    """Pearson correlation between all columns; constant columns correlate 0 with everything."""
    if len(fdm) < 2:
        raise ValueError("need at least two instances")
    M = fdm.matrix()
    centered = M - M.mean(axis=0)
    norms = np.sqrt((centered ** 2).sum(axis=0))
    const = norms <= 1e-12 * np.maximum(1.0, np.abs(M).max(axis=0))
    safe = np.where(const, 1.0, norms)
    corr = (centered.T @ centered) / np.outer(safe, safe)
    corr[const, :] = 0.0
    corr[:, const] = 0.0
    np.fill_diagonal(corr, 1.0)
    corr = np.clip(corr, -1.0, 1.0)
    names = fdm.schema.columns
    flagged = tuple(n for n, c in zip(names, const) if c)
    if flagged:
        log.warning("constant feature columns: %s", ", ".join(flagged))
    return Correlation(names, corr, flagged)


def write_fdm(fdm: FeatureDataModel, path) -> None:
    header = ["u", "v", "source", *fdm.schema.columns, "label"]
    M = fdm.matrix()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(header)
        for k, (u, v) in enumerate(fdm.pairs):
            w.writerow([u, v, fdm.sources[k], *(repr(float(x)) for x in M[k]), int(fdm.labels[k])])


def read_fdm(path, directed: bool | None = None) -> FeatureDataModel:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter="\t"))
    header, body = rows[0], rows[1:]
    cols = tuple(header[3:-1])
    includes_global = bool(cols) and cols[-1] == GLOBAL_FEATURE
    names = cols[:-1] if includes_global else cols
    if directed is None:
        directed = names == feature_names(True)
    schema = FeatureSchema(tuple(names), directed, includes_global)
    M = np.array([[float(x) for x in r[3:-1]] for r in body], dtype=np.float64).reshape(len(body), len(cols))
    sources = tuple(r[2] for r in body)
    return FeatureDataModel(
        schema=schema,
        pairs=tuple((r[0], r[1]) for r in body),
        X=M[:, :len(names)].copy(),
        labels=np.array([int(r[-1]) for r in body], dtype=np.int64),
        sources=sources,
        source=sources[0] if len(set(sources)) == 1 else "aggregated",
        global_density=M[:, -1].copy() if includes_global else None,
    )

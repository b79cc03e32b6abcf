"""Assessment, null-model and noise-injection experiment protocols."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classifiers import ModelSpec, TrainedModel, cross_validate, fit
from .features import FeatureDataModel, build_aggregated_fdm, build_fdm, build_pairs_fdm
from .graph import GraphError, Network, all_pairs, max_edges, node_names, random_graph
from .metrics import EvaluationReport, evaluate

AGGREGATED = "aggregated"
SN_SELF = "sn_self"


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    name: str
    sn: Network
    exogenous: tuple[Network, ...]

    def __post_init__(self):
        ids = [self.sn.id] + [g.id for g in self.exogenous]
        if len(set(ids)) != len(ids):
            raise PlanError(f"duplicate network ids in dataset {self.name!r}")
        if len({g.directed for g in (self.sn, *self.exogenous)}) != 1:
            raise PlanError("all networks of a dataset must share directedness")

    @property
    def networks(self) -> tuple[Network, ...]:
        return (self.sn, *self.exogenous)

    def network(self, id: str) -> Network:
        for g in self.networks:
            if g.id == id:
                return g
        raise PlanError(f"no network {id!r} in dataset {self.name!r}")


@dataclass(frozen=True)
class AssessmentPlan:
    dataset: Dataset
    train_source: str
    model: ModelSpec
    kfold_k: int = 10
    seed: int = 0
    threshold: float = 0.5


@dataclass(frozen=True)
class NoisePlan:
    dataset: Dataset
    train_source: str
    model: ModelSpec
    r_values: tuple[float, ...] = tuple(i / 10 for i in range(1, 11))
    runs_per_r: int = 10
    seed: int = 0
    feature_basis: str = "sn"
    threshold: float = 0.5

    def __post_init__(self):
        if not self.r_values or any(not 0 < r <= 1 for r in self.r_values):
            raise PlanError("r values must lie in (0, 1]")
        if self.runs_per_r < 1:
            raise PlanError("runs_per_r must be at least 1")
        if self.train_source == SN_SELF:
            raise PlanError("noise experiments train on exogenous networks only")
        if self.feature_basis not in ("sn", "disguised"):
            raise PlanError("feature_basis must be 'sn' or 'disguised'")


def derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def _seeded(spec: ModelSpec, seed: int) -> ModelSpec:
    if spec.kind == "random_baseline" and "seed" not in spec.hyperparameters:
        return spec.with_params(seed=seed)
    return spec


# --- FDMs for a protocol ------------------------------------------------------

def training_fdm(dataset: Dataset, train_source: str) -> FeatureDataModel:
    if train_source == AGGREGATED:
        return build_aggregated_fdm(dataset.exogenous)
    if train_source == SN_SELF:
        return build_fdm(dataset.sn)
    g = dataset.network(train_source)
    if g is dataset.sn:
        raise PlanError("use train_source='sn_self' to train on the social network itself")
    return build_fdm(g)


def sn_fdm(dataset: Dataset, train_source: str) -> FeatureDataModel:
    """FDM of the social network, with the density column iff training is aggregated."""
    return build_fdm(dataset.sn, include_global=train_source == AGGREGATED)


def train_model(dataset: Dataset, train_source: str, spec: ModelSpec, seed: int = 0,
                threshold: float = 0.5) -> TrainedModel:
    return fit(_seeded(spec, seed), training_fdm(dataset, train_source), threshold)


# --- assessment ---------------------------------------------------------------

def run_assessment(plan: AssessmentPlan) -> EvaluationReport:
    ds = plan.dataset
    spec = _seeded(plan.model, plan.seed)
    meta = {"dataset": ds.name, "train": plan.train_source, "test": ds.sn.id,
            "model": spec.describe(), "seed": plan.seed}
    if plan.train_source == SN_SELF:
        report = cross_validate(spec, build_fdm(ds.sn), plan.kfold_k, plan.seed, plan.threshold)
        report.metadata = {**meta, "kfold": plan.kfold_k}
        return report
    train = training_fdm(ds, plan.train_source)
    test = sn_fdm(ds, plan.train_source)
    if train.schema != test.schema:
        raise PlanError("training and test FDMs have different schemas")
    model = fit(spec, train, plan.threshold)
    scores = model.predict_probability(test)
    preds = (scores >= plan.threshold).astype(np.int64)
    return evaluate(preds, test.labels, scores, meta)


def null_dataset(dataset: Dataset, seed: int) -> Dataset:
    """Every network replaced by a uniform random graph with the same n and m."""
    def fake(k, g):
        return random_graph(g.n, g.m, derive_seed(seed, k), g.directed, id=g.id)
    sn = fake(0, dataset.sn)
    exo = tuple(fake(k + 1, g) for k, g in enumerate(dataset.exogenous))
    return Dataset(f"{dataset.name}-null", sn, exo)


def run_null_model(plan: AssessmentPlan, n_replicates: int) -> list[EvaluationReport]:
    if n_replicates < 1:
        raise PlanError("need at least one replicate")
    reports = []
    for i in range(n_replicates):
        ds = null_dataset(plan.dataset, plan.seed + i)
        rep = run_assessment(AssessmentPlan(ds, plan.train_source, plan.model,
                                            plan.kfold_k, plan.seed + i, plan.threshold))
        rep.metadata["replicate"] = i
        reports.append(rep)
    return reports


def summarize_reports(reports: Sequence[EvaluationReport]) -> dict:
    """Mean and (population) standard deviation per metric."""
    keys = ("accuracy", "precision_weighted", "recall_weighted", "f_weighted", "auc")
    out = {}
    for key in keys:
        vals = np.array([getattr(r, key) for r in reports if getattr(r, key) is not None], dtype=float)
        if vals.size:
            out[f"{key}_mean"] = float(vals.mean())
            out[f"{key}_sd"] = float(vals.std())
    return out


# --- noise injection ----------------------------------------------------------

def non_edges(net: Network) -> np.ndarray:
    pairs = all_pairs(net.n, net.directed)
    if not net.edges:
        return pairs
    mask = net.adjacency()[pairs[:, 0], pairs[:, 1]] == 0
    return pairs[mask]


def inject_noise(sn: Network, r: float, seed: int) -> tuple[Network, list[tuple[int, int]]]:
    """Add ``floor((max_pairs - m) * r)`` uniformly chosen non-edges to ``sn``."""
    if not 0 < r <= 1:
        raise PlanError("r must lie in (0, 1]")
    pool = non_edges(sn)
    k = math.floor((max_edges(sn.n, sn.directed) - sn.m) * r + 1e-9)
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(len(pool), size=k, replace=False)) if k else np.empty(0, np.int64)
    injected = [tuple(map(int, pool[c])) for c in chosen]
    disguised = sn.with_edges(injected, id=f"{sn.id}-disguised")
    return disguised, injected


def noise_success_rate(model: TrainedModel, disguised: Network, injected,
                       feature_network: Network | None = None) -> float:
    """Fraction of injected pairs the model classifies as non-links.

    Features are computed on ``feature_network`` (default: the disguised graph).
    """
    injected = list(injected)
    if not injected:
        raise PlanError("no injected edges: success rate undefined")
    for u, v in injected:
        key = (u, v) if disguised.directed or u < v else (v, u)
        if key not in disguised.edges:
            raise PlanError("injected pair is not an edge of the disguised network")
    basis = feature_network if feature_network is not None else disguised
    include_global = "density" in model.columns
    fdm = build_pairs_fdm(basis, injected, include_global=include_global)
    return float(np.mean(model.predict_class(fdm) == 0))


@dataclass
class NoiseSummary:
    r_values: tuple[float, ...]
    cells: np.ndarray                       # [r index, run]; NaN where k = 0
    row_means: np.ndarray
    grand_mean: float
    metadata: dict = field(default_factory=dict)


def run_noise_experiment(plan: NoisePlan, model: TrainedModel | None = None) -> NoiseSummary:
    ds = plan.dataset
    if model is None:
        model = train_model(ds, plan.train_source, plan.model, plan.seed, plan.threshold)
    cells = np.full((len(plan.r_values), plan.runs_per_r), np.nan)
    for ri, r in enumerate(plan.r_values):
        for run in range(plan.runs_per_r):
            disguised, injected = inject_noise(ds.sn, r, derive_seed(plan.seed, ri, run))
            if not injected:
                continue
            basis = ds.sn if plan.feature_basis == "sn" else disguised
            cells[ri, run] = noise_success_rate(model, disguised, injected, basis)
    row_means = np.array([np.nanmean(row) if np.isfinite(row).any() else np.nan for row in cells])
    valid = row_means[np.isfinite(row_means)]
    grand = float(valid.mean()) if valid.size else float("nan")
    meta = {"dataset": ds.name, "train": plan.train_source, "model": model.spec.describe(),
            "seed": plan.seed, "runs_per_r": plan.runs_per_r, "feature_basis": plan.feature_basis}
    return NoiseSummary(tuple(plan.r_values), cells, row_means, grand, meta)


# --- synthetic planted multiplex ---------------------------------------------

@dataclass(frozen=True)
class LayerSpec:
    id: str
    m: int
    rewire: float = 0.0


DEFAULT_LAYERS = (
    LayerSpec("work", 338, 0.0),
    LayerSpec("lunch", 386, 0.15),
    LayerSpec("leisure", 176, 0.3),
    LayerSpec("coauthor", 42, 0.5),
)


def proximity_graph(points: np.ndarray, m: int, id: str) -> Network:
    """Undirected graph joining the ``m`` closest point pairs."""
    n = len(points)
    if m > max_edges(n, False):
        raise GraphError("too many edges requested")
    pairs = all_pairs(n, False)
    dist = np.linalg.norm(points[pairs[:, 0]] - points[pairs[:, 1]], axis=1)
    keep = pairs[np.argsort(dist, kind="stable")[:m]]
    return Network(id=id, directed=False, nodes=tuple(node_names(n)),
                   edges=frozenset(map(tuple, keep.tolist())))


def rewire(net: Network, fraction: float, seed: int, id: str | None = None) -> Network:
    """Move ``round(fraction * m)`` uniformly chosen edges onto uniformly chosen non-edges."""
    rng = np.random.default_rng(seed)
    edges = sorted(net.edges)
    k = int(round(fraction * len(edges)))
    pool = non_edges(net)
    k = min(k, len(pool))
    drop = set(rng.choice(len(edges), size=k, replace=False).tolist()) if k else set()
    add = [tuple(map(int, pool[i])) for i in rng.choice(len(pool), size=k, replace=False)] if k else []
    kept = [e for i, e in enumerate(edges) if i not in drop]
    return Network(id=id or net.id, directed=net.directed, nodes=net.nodes,
                   edges=frozenset(kept + add))


def planted_multiplex(n: int = 60, sn_noise: float = 0.05, seed: int = 0,
                      layers: Sequence[LayerSpec] = DEFAULT_LAYERS,
                      sn_id: str = "facebook") -> Dataset:
    """Synthetic dataset whose social network is the first layer plus edge noise.

    Every layer joins the closest pairs of one shared set of random points in
    the unit square, then rewires a layer-specific share of its edges; the
    social network rewires ``sn_noise`` of the first layer's edges.
    """
    rng = np.random.default_rng(seed)
    points = rng.random((n, 2))
    nets = []
    for k, spec in enumerate(layers):
        g = proximity_graph(points, spec.m, spec.id)
        if spec.rewire:
            g = rewire(g, spec.rewire, derive_seed(seed, 1, k))
        nets.append(g)
    sn = rewire(nets[0], sn_noise, derive_seed(seed, 0), id=sn_id)
    return Dataset(f"planted-{seed}", sn, tuple(nets))

"""Command-line experiment runner.

Every subcommand reads a dataset manifest and writes plain-text artifacts
into ``--out`` (default: current directory). Outputs depend only on the
arguments, so reruns with the same seed reproduce files byte for byte.
"""

from __future__ import annotations

import argparse
import itertools
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .classifiers import ModelSpec, ModelSpecError
from .classifiers.spec import STOCHASTIC, canonical_kind
from .features import build_aggregated_fdm, build_fdm, feature_correlation_matrix, write_fdm
from .graph import GraphError, write_edge_list
from .manifest import ManifestError, load_manifest, summarize, write_manifest
from .metrics import roc_auc
from .ranking import best_ranker, rank_ties, write_ranking
from .reports import (plan_hash, render_table, upsert_ledger, write_curve, write_record,
                      write_table)

log = logging.getLogger("linkassess")

METRIC_COLUMNS = ("accuracy", "precision_weighted", "recall_weighted", "f_weighted", "auc")
LEDGER = "runs.tsv"


class UsageError(Exception):
    pass


# --- helpers ------------------------------------------------------------------

def _parse_params(items) -> dict[str, list[str]]:
    params = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = [v.strip() for v in value.split(",") if v.strip()]
    return params


def _specs(kind: str, items, seed: int) -> list[ModelSpec]:
    """One spec per combination of comma-separated --param values."""
    kind = canonical_kind(kind)
    params = _parse_params(items)
    if kind in STOCHASTIC and "seed" not in params:
        params["seed"] = [str(seed)]
    keys = sorted(params)
    combos = itertools.product(*(params[k] for k in keys)) if keys else [()]
    return [ModelSpec(kind, dict(zip(keys, combo))) for combo in combos]


def _model_spec(args) -> ModelSpec:
    if getattr(args, "model_config", None):
        return ModelSpec.load(args.model_config)
    specs = _specs(args.model, args.param, args.seed)
    if len(specs) != 1:
        raise UsageError("parameter lists are only accepted by 'assess'")
    return specs[0]


def _load(args):
    manifest = load_manifest(args.manifest)
    return manifest, manifest.dataset


def _train_source(dataset, source: str, allow_self: bool = True) -> str:
    if source in (ex.AGGREGATED, ex.SN_SELF):
        if source == ex.SN_SELF and not allow_self:
            raise UsageError("this command trains on exogenous networks only")
        return source
    if source == dataset.sn.id:
        if not allow_self:
            raise UsageError("this command trains on exogenous networks only")
        return ex.SN_SELF
    if source not in {g.id for g in dataset.exogenous}:
        known = ", ".join([g.id for g in dataset.exogenous] + [ex.AGGREGATED, ex.SN_SELF])
        raise UsageError(f"unknown training source {source!r}; choose from {known}")
    return source


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _tag(*parts) -> str:
    return "_".join(str(p).replace("/", "-") for p in parts)


def _ledger(out: Path, command: str, dataset, train: str, spec: ModelSpec, seed: int,
            plan_parts, metrics: dict | None = None, extra: str = "") -> None:
    row = {"plan_hash": plan_hash(command, dataset.name, train, spec.describe(), *plan_parts),
           "seed": seed, "command": command, "dataset": dataset.name, "train": train,
           "model": spec.describe(), "extra": extra}
    row.update(metrics or {})
    upsert_ledger(out / LEDGER, row)


def _emit(text: str) -> None:
    sys.stdout.write(text)


# --- subcommands --------------------------------------------------------------

def cmd_summarize(args) -> int:
    manifest, _ = _load(args)
    rows = summarize(manifest)
    cols = ["network", "role", "n", "m", "avg_clustering", "density", "overlap_with_sn"]
    out = _outdir(args)
    write_table(rows, out / f"summary_{manifest.name}.tsv", cols)
    _emit(render_table(rows, cols))
    return 0


def cmd_fdm(args) -> int:
    manifest, ds = _load(args)
    out = _outdir(args)
    targets = [g.id for g in ds.networks] if args.network == "all" else [args.network]
    for target in targets:
        if target == ex.AGGREGATED:
            fdm = build_aggregated_fdm(ds.exogenous)
        else:
            try:
                net = ds.network(target)
            except ex.PlanError as exc:
                raise UsageError(str(exc)) from exc
            fdm = build_fdm(net, include_global=args.with_global)
        write_fdm(fdm, out / f"fdm_{_tag(ds.name, target)}.tsv")
        corr = feature_correlation_matrix(fdm)
        rows = [{"feature": name, **{c: float(v) for c, v in zip(corr.names, row)}}
                for name, row in zip(corr.names, corr.values)]
        write_table(rows, out / f"corr_{_tag(ds.name, target)}.tsv", ["feature", *corr.names])
        _emit(f"{target}: {len(fdm)} instances, {int(fdm.labels.sum())} positive\n")
    return 0


def _grid_export(model, test, features: str, path: Path, resolution: int = 50) -> None:
    names = [f.strip() for f in features.split(",")]
    cols = list(test.schema.columns)
    if len(names) != 2 or any(n not in cols for n in names):
        raise UsageError(f"--grid needs two of: {', '.join(cols)}")
    M = test.matrix()
    base = np.median(M, axis=0)
    a, b = (cols.index(n) for n in names)
    xs = np.linspace(M[:, a].min(), M[:, a].max(), resolution)
    ys = np.linspace(M[:, b].min(), M[:, b].max(), resolution)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    grid = np.tile(base, (gx.size, 1))
    grid[:, a] = gx.ravel()
    grid[:, b] = gy.ravel()
    probs = model.predict_probability(grid)
    rows = [{names[0]: float(x), names[1]: float(y), "probability": float(p)}
            for x, y, p in zip(gx.ravel(), gy.ravel(), probs)]
    write_table(rows, path, [names[0], names[1], "probability"])


def cmd_assess(args) -> int:
    _, ds = _load(args)
    train = _train_source(ds, args.train)
    specs = [ModelSpec.load(args.model_config)] if args.model_config else _specs(args.model, args.param, args.seed)
    out = _outdir(args)
    rows = []
    for spec in specs:
        plan = ex.AssessmentPlan(ds, train, spec, args.kfold, args.seed, args.threshold)
        report = ex.run_assessment(plan)
        record = report.as_record()
        rows.append(record)
        metrics = {k: record[k] for k in METRIC_COLUMNS}
        _ledger(out, "assess", ds, train, spec, args.seed, (args.kfold, args.threshold), metrics)
    best = max(range(len(rows)), key=lambda i: rows[i]["f_weighted"])
    spec = specs[best]
    tag = _tag(ds.name, train, spec.short_name)
    write_record(rows[best], out / f"report_{tag}.txt")
    if len(specs) > 1:
        cols = ["model", *METRIC_COLUMNS]
        write_table(rows, out / f"sweep_{tag}.tsv", cols)
        _emit(render_table(rows, cols))

    if train != ex.SN_SELF and (args.roc or args.grid):
        model = ex.train_model(ds, train, spec, args.seed, args.threshold)
        test = ex.sn_fdm(ds, train)
        if args.roc:
            scores = model.predict_probability(test)
            curve, _ = roc_auc(scores, test.labels)
            write_curve(curve, out / f"roc_{tag}.tsv")
        if args.grid:
            _grid_export(model, test, args.grid, out / f"grid_{tag}.tsv")
    r = rows[best]
    _emit(render_table([r], ["train", "test", *METRIC_COLUMNS]))
    return 0


def cmd_compare(args) -> int:
    _, ds = _load(args)
    train = _train_source(ds, args.train)
    out = _outdir(args)
    rows = []
    for name in args.models.split(","):
        spec = _specs(name, (), args.seed)[0]
        report = ex.run_assessment(ex.AssessmentPlan(ds, train, spec, args.kfold, args.seed,
                                                     args.threshold))
        rec = report.as_record()
        rec["classifier"] = spec.short_name
        rows.append(rec)
        _ledger(out, "compare", ds, train, spec, args.seed, (args.kfold, args.threshold),
                {k: rec[k] for k in METRIC_COLUMNS})
    cols = ["classifier", "accuracy", "precision_weighted", "recall_weighted", "f_weighted", "auc"]
    write_table(rows, out / f"compare_{_tag(ds.name, train)}.tsv",
                cols + ["precision_positive", "recall_positive", "f_positive", "model"])
    _emit(render_table(rows, cols))
    return 0


def cmd_rank(args) -> int:
    _, ds = _load(args)
    train = _train_source(ds, args.train, allow_self=False)
    spec = _model_spec(args)
    out = _outdir(args)
    model = ex.train_model(ds, train, spec, args.seed, args.threshold)
    test = ex.sn_fdm(ds, train)
    result = rank_ties(model, test)
    best = best_ranker(test)
    tag = _tag(ds.name, train, spec.short_name)
    write_ranking(result, out / f"ranking_{tag}.tsv")
    write_ranking(best, out / f"ranking_{_tag(ds.name, 'best_ranker')}.tsv")
    record = {"dataset": ds.name, "train": train, "test": ds.sn.id, "model": spec.describe(),
              "seed": args.seed, "pairs": len(result.entries),
              "error_total": result.error_total, "error_normalized": result.error_normalized,
              "error_percent": 100.0 * result.error_normalized}
    write_record(record, out / f"rankerr_{tag}.txt")
    _ledger(out, "rank", ds, train, spec, args.seed, (args.threshold,),
            extra=f"error_normalized={result.error_normalized!r}")
    _emit(f"{spec.short_name} trained on {train}: ranking error {result.error_total:.3f} "
          f"({100.0 * result.error_normalized:.1f}%) over {len(result.entries)} pairs\n")
    return 0


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_noise(args) -> int:
    _, ds = _load(args)
    train = _train_source(ds, args.train, allow_self=False)
    spec = _model_spec(args)
    out = _outdir(args)
    plan = ex.NoisePlan(ds, train, spec, _floats(args.r), args.runs, args.seed, args.basis,
                        args.threshold)
    summary = ex.run_noise_experiment(plan)
    rows = []
    for ri, r in enumerate(summary.r_values):
        for run in range(plan.runs_per_r):
            rows.append({"r": r, "run": run, "success_rate": _nan_none(summary.cells[ri, run])})
    tag = _tag(ds.name, train, spec.short_name)
    write_table(rows, out / f"noise_cells_{tag}.tsv", ["r", "run", "success_rate"])
    means = [{"r": r, "mean_success_rate": _nan_none(m)}
             for r, m in zip(summary.r_values, summary.row_means)]
    means.append({"r": "grand_mean", "mean_success_rate": _nan_none(summary.grand_mean)})
    write_table(means, out / f"noise_{tag}.tsv", ["r", "mean_success_rate"])
    _ledger(out, "noise", ds, train, spec, args.seed,
            (plan.r_values, plan.runs_per_r, plan.feature_basis, args.threshold),
            extra=f"grand_mean={summary.grand_mean!r}")
    _emit(render_table(means, ["r", "mean_success_rate"]))
    return 0


def _nan_none(x):
    x = float(x)
    return None if np.isnan(x) else x


def cmd_nullmodel(args) -> int:
    _, ds = _load(args)
    train = _train_source(ds, args.train)
    spec = _model_spec(args)
    out = _outdir(args)
    plan = ex.AssessmentPlan(ds, train, spec, args.kfold, args.seed, args.threshold)
    reports = ex.run_null_model(plan, args.replicates)
    rows = [r.as_record() for r in reports]
    tag = _tag(ds.name, train, spec.short_name)
    cols = ["replicate", "seed", *METRIC_COLUMNS]
    write_table(rows, out / f"nullmodel_{tag}.tsv", cols)
    summary = ex.summarize_reports(reports)
    write_record({"dataset": ds.name, "train": train, "model": spec.describe(),
                  "replicates": args.replicates, **summary}, out / f"nullmodel_summary_{tag}.txt")
    _ledger(out, "nullmodel", ds, train, spec, args.seed, (args.replicates, args.kfold, args.threshold),
            {k: summary.get(f"{k}_mean") for k in METRIC_COLUMNS})
    _emit(render_table(rows, cols))
    return 0


def cmd_synth(args) -> int:
    out = _outdir(args)
    ds = ex.planted_multiplex(n=args.n, sn_noise=args.noise, seed=args.seed)
    files = {}
    for g in ds.networks:
        write_edge_list(g, out / f"{g.id}.edges")
        files[g.id] = f"{g.id}.edges"
    write_manifest(out / "manifest.ini", ds.name, ds.sn.id, files,
                   defaults={"model": "svm_rbf", "kfold": 10, "seed": args.seed})
    _emit(f"wrote {len(files)} networks and manifest.ini to {out}\n")
    return 0


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linkassess",
                                description="Assess and rank social-network links from exogenous networks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True, model=True, train=True):
        sp.add_argument("--manifest", required=True)
        sp.add_argument("--out", default=".")
        if train:
            sp.add_argument("--train", required=True,
                            help="exogenous network id, 'aggregated', or 'sn_self'")
        if model:
            sp.add_argument("--model", default="svm_rbf")
            sp.add_argument("--model-config", help="key=value model file (overrides --model)")
            sp.add_argument("--param", action="append", metavar="KEY=VALUE")
        if seed:
            sp.add_argument("--seed", type=int, required=True)
            sp.add_argument("--kfold", type=int, default=10)
            sp.add_argument("--threshold", type=float, default=0.5)

    sp = sub.add_parser("summarize", help="network statistics and edge overlap with the SN")
    common(sp, seed=False, model=False, train=False)
    sp.set_defaults(func=cmd_summarize)

    sp = sub.add_parser("fdm", help="export feature data models and feature correlations")
    common(sp, seed=False, model=False, train=False)
    sp.add_argument("--network", default="all", help="network id, 'aggregated' or 'all'")
    sp.add_argument("--with-global", action="store_true", help="append the density column")
    sp.set_defaults(func=cmd_fdm)

    sp = sub.add_parser("assess", help="train on one source, classify the SN links")
    common(sp)
    sp.add_argument("--roc", action="store_true", help="also write the ROC curve")
    sp.add_argument("--grid", metavar="F1,F2", help="probability grid over two features")
    sp.set_defaults(func=cmd_assess)

    sp = sub.add_parser("compare", help="several classifiers on one training source")
    common(sp, model=False)
    sp.add_argument("--models", default="kn,svm,dt,nb,lr")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("rank", help="tie-strength ranking of the SN pairs")
    common(sp)
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("noise", help="noise-edge injection and success rate")
    common(sp)
    sp.add_argument("--r", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")
    sp.add_argument("--runs", type=int, default=10)
    sp.add_argument("--basis", choices=("sn", "disguised"), default="sn",
                    help="network the injected pairs' features are computed on")
    sp.set_defaults(func=cmd_noise)

    sp = sub.add_parser("nullmodel", help="repeat an assessment on matched random graphs")
    common(sp)
    sp.add_argument("--replicates", type=int, default=10)
    sp.set_defaults(func=cmd_nullmodel)

    sp = sub.add_parser("synth", help="write a synthetic planted-multiplex dataset")
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--n", type=int, default=60)
    sp.add_argument("--noise", type=float, default=0.05)
    sp.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ModelSpecError, ex.PlanError) as exc:
        parser.error(str(exc))   # exits with status 2
    except (ManifestError, GraphError, OSError, ValueError) as exc:
        sys.stderr.write(f"linkassess: error: {exc}\n")
        return 1


def cli(argv=None) -> int:
    try:
        return main(argv)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())

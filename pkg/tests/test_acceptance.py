"""Acceptance suite: one verdict line per criterion, printed and summarized."""

import filecmp
import os
import time
from pathlib import Path

import numpy as np
import pytest

import oracle
from acceptance_log import skipped, verdict
from linkassess.classifiers import ModelSpec, fit, fit_arrays
from linkassess.classifiers.logistic import loss_gradient, penalized_loss
from linkassess.classifiers.svm import kkt_violation, rbf_kernel, smo
from linkassess.cli import cli
from linkassess.experiments import (AssessmentPlan, NoisePlan, inject_noise, planted_multiplex,
                                    run_assessment, run_noise_experiment, run_null_model, sn_fdm,
                                    train_model)
from linkassess.features import build_aggregated_fdm, build_fdm
from linkassess.graph import max_edges, random_graph
from linkassess.manifest import load_manifest, summarize
from linkassess.metrics import evaluate, mann_whitney_auc, roc_auc
from linkassess.ranking import best_ranker, rank_ties

pytestmark = pytest.mark.slow

SEEDS = range(10)
INTEGER_COLUMNS = ("CN", "PA")


@pytest.fixture(scope="module")
def planted_f():
    """svm_rbf weighted F on the planted datasets, shared by criteria 5 and 6."""
    return [run_assessment(AssessmentPlan(planted_multiplex(seed=s), "work", ModelSpec("svm_rbf"), seed=s))
            .f_weighted for s in SEEDS]


def test_criterion_01_feature_oracle():
    rng = np.random.default_rng(101)
    graphs = []
    for i in range(250):
        directed = i >= 200
        n = int(rng.integers(2, 31))
        m = int(rng.integers(0, max_edges(n, directed) + 1))
        graphs.append(random_graph(n, m, int(rng.integers(2**31)), directed, id=f"g{i}"))
    t0 = time.perf_counter()
    fdms = [build_fdm(g) for g in graphs]
    elapsed = time.perf_counter() - t0
    worst, exact, checked = 0.0, True, 0
    for g, fdm in zip(graphs, fdms):
        pairs, ref = oracle.all_vectors(g.nodes, g.edge_names(), g.directed)
        assert list(fdm.pairs) == pairs
        if not ref:
            continue
        ref = np.array(ref, dtype=float)
        cols = fdm.schema.feature_names
        ints = [j for j, c in enumerate(cols) if c.split("_")[0] in INTEGER_COLUMNS]
        reals = [j for j in range(len(cols)) if j not in ints]
        exact &= bool(np.array_equal(fdm.X[:, ints], ref[:, ints]))
        worst = max(worst, float(np.abs(fdm.X[:, reals] - ref[:, reals]).max()))
        checked += len(pairs)
    ok = exact and worst <= 1e-12 and elapsed < 10
    verdict(1, "feature oracle equivalence", ok,
            f"250 graphs, {checked} pairs, integer exact={exact}, max real error {worst:.1e}, {elapsed:.2f}s")


def test_criterion_02_fdm_shape():
    rng = np.random.default_rng(202)
    bad = 0
    for i in range(100):
        directed = bool(i % 2)
        k = int(rng.integers(1, 5))
        nets = []
        for j in range(k):
            n = int(rng.integers(2, 25))
            m = int(rng.integers(0, max_edges(n, directed) + 1))
            nets.append(random_graph(n, m, int(rng.integers(2**31)), directed, id=f"c{i}g{j}"))
        per = [n.n * (n.n - 1) // (1 if directed else 2) for n in nets]
        bad += any(len(build_fdm(g)) != c for g, c in zip(nets, per))
        agg = build_aggregated_fdm(nets)
        bad += len(agg) != sum(per) or agg.matrix().shape[1] != len(agg.schema.columns)
    verdict(2, "FDM instance counts", bad == 0, f"100 configurations, {bad} mismatches")


def test_criterion_03_metric_identities():
    rng = np.random.default_rng(303)
    recall_gap = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 200))
        truth = rng.integers(0, 2, n)
        preds = rng.integers(0, 2, n)
        rep = evaluate(preds, truth)
        recall_gap = max(recall_gap, abs(rep.recall_weighted - rep.accuracy))
    auc_gap, transform_gap = 0.0, 0.0
    for _ in range(100):
        n = int(rng.integers(2, 300))
        truth = rng.integers(0, 2, n)
        truth[:2] = (0, 1)
        scores = np.round(rng.random(n), int(rng.integers(1, 4)))      # ties included
        _, auc = roc_auc(scores, truth)
        auc_gap = max(auc_gap, abs(auc - mann_whitney_auc(scores, truth)))
        for f in (np.exp, lambda s: s ** 3, lambda s: 5 * s - 2, lambda s: 1 / (1 + np.exp(-8 * s))):
            transform_gap = max(transform_gap, abs(roc_auc(f(scores), truth)[1] - auc))
    ok = recall_gap <= 1e-12 and auc_gap <= 1e-9 and transform_gap <= 1e-12
    verdict(3, "metric identities", ok,
            f"recall-accuracy gap {recall_gap:.1e}, AUC-MW gap {auc_gap:.1e}, transform gap {transform_gap:.1e}")


def _xor(rng, n=200):
    centers = np.array([(-1, -1), (1, 1), (-1, 1), (1, -1)])
    lab = np.repeat([0, 0, 1, 1], n // 4)
    return np.repeat(centers, n // 4, axis=0) + rng.normal(0, 0.25, (n, 2)), lab


def _annulus(rng, n=300):
    radius = np.r_[rng.uniform(0, 1, n // 2), rng.uniform(1.6, 2.6, n // 2)]
    angle = rng.uniform(0, 2 * np.pi, n)
    return np.c_[radius * np.cos(angle), radius * np.sin(angle)], np.repeat([0, 1], n // 2)


def test_criterion_04_classifier_sanity():
    rng = np.random.default_rng(404)
    X = rng.normal(size=(400, 3))
    w = np.array([1.0, -2.0, 0.5])
    keep = np.abs(X @ w) > 0.2
    X, y = X[keep], (X[keep] @ w > 0).astype(int)
    lr_sep = float((fit_arrays(ModelSpec("lr"), X, y).predict_class(X) == y).mean())

    nonlinear = {}
    for name, (Xn, yn) in (("xor", _xor(rng)), ("annulus", _annulus(rng))):
        svm = fit_arrays(ModelSpec("svm", {"C": 1, "gamma": 1}), Xn, yn)
        lr = fit_arrays(ModelSpec("lr"), Xn, yn)
        nonlinear[name] = (float((svm.predict_class(Xn) == yn).mean()), float((lr.predict_class(Xn) == yn).mean()))

    grad_err = 0.0
    Xg = rng.normal(size=(60, 4))
    yg = (rng.random(60) < 0.5).astype(float)
    for _ in range(20):
        wv, b = rng.normal(size=4), float(rng.normal())
        gw, gb = loss_gradient(wv, b, Xg, yg, 1e-2, "L2")
        num = []
        for i in range(5):
            e = np.zeros(5)
            e[i] = 1e-6
            plus = penalized_loss(wv + e[:4], b + e[4], Xg, yg, 1e-2, "L2")
            minus = penalized_loss(wv - e[:4], b - e[4], Xg, yg, 1e-2, "L2")
            num.append((plus - minus) / 2e-6)
        num = np.array(num)
        grad_err = max(grad_err, float(np.linalg.norm(np.r_[gw, gb] - num) / np.linalg.norm(num)))

    Xk, yk = _xor(rng)
    K = rbf_kernel(Xk, Xk, 1.0)
    ys = np.where(yk == 1, 1.0, -1.0)
    alpha, rho, _ = smo(K, ys, C=1.0, tol=1e-3)
    kkt = kkt_violation(K, ys, alpha, rho, 1.0)

    ok = (lr_sep >= 0.99 and all(s >= 0.95 and lr <= 0.6 for s, lr in nonlinear.values())
          and grad_err <= 1e-4 and kkt <= 1e-3)
    detail = (f"LR separable {lr_sep:.3f}; " +
              "; ".join(f"{k}: SVM {s:.3f} LR {lr:.3f}" for k, (s, lr) in nonlinear.items()) +
              f"; gradient rel. error {grad_err:.1e}; KKT residual {kkt:.1e}")
    verdict(4, "classifier sanity", ok, detail)


def test_criterion_05_planted_transfer():
    t0 = time.perf_counter()
    fs = [run_assessment(AssessmentPlan(planted_multiplex(seed=s), "work", ModelSpec("svm_rbf"), seed=s))
          .f_weighted for s in SEEDS]
    elapsed = time.perf_counter() - t0
    mean = float(np.mean(fs))
    verdict(5, "planted-multiplex transfer", mean >= 0.80 and elapsed < 60,
            f"svm_rbf weighted F mean {mean:.3f} over 10 seeds (min {min(fs):.3f}), {elapsed:.1f}s")


def test_criterion_06_null_model(planted_f):
    plan = AssessmentPlan(planted_multiplex(seed=0), "work", ModelSpec("svm_rbf"), seed=0)
    reports = run_null_model(plan, 50)
    auc = float(np.mean([r.auc for r in reports]))
    f_null = float(np.mean([r.f_weighted for r in reports]))
    f_real = float(np.mean(planted_f))
    ok = abs(auc - 0.5) <= 0.05 and f_real - f_null >= 0.15
    verdict(6, "null model", ok,
            f"AUC mean {auc:.3f} over 50 replicates; weighted F null {f_null:.3f} vs planted {f_real:.3f}")


class _Constant:
    spec = ModelSpec("random", {"seed": 0})

    def predict_probability(self, fdm):
        return np.full(len(fdm), 0.5)


def test_criterion_07_ranking():
    rng = np.random.default_rng(707)
    best_ok, const_ok = True, True
    for i in range(60):
        directed = bool(i % 3 == 0)
        n = int(rng.integers(2, 25))
        g = random_graph(n, int(rng.integers(0, max_edges(n, directed) + 1)), int(rng.integers(2**31)), directed)
        fdm = build_fdm(g)
        best_ok &= best_ranker(fdm).error_total == 0
        const_ok &= rank_ties(_Constant(), fdm).error_normalized == 0.5
    errors = {}
    for kind in ("gaussian_nb", "knn"):
        vals = []
        for s in SEEDS:
            ds = planted_multiplex(seed=s)
            model = train_model(ds, "work", ModelSpec(kind), s)
            vals.append(rank_ties(model, sn_fdm(ds, "work")).error_normalized)
        errors[kind] = float(np.mean(vals))
    ok = best_ok and const_ok and all(e <= 0.25 for e in errors.values())
    verdict(7, "tie-strength ranking", ok,
            f"best ranker zero={best_ok}, constant 0.5 exact={const_ok}, " +
            ", ".join(f"{k} error {v:.3f}" for k, v in errors.items()))


def test_criterion_08_noise_injection():
    ds = planted_multiplex(seed=0)
    disguised, injected = inject_noise(ds.sn, 1.0, seed=8)
    complete = disguised.m == max_edges(ds.sn.n, False) and len(injected) == max_edges(ds.sn.n, False) - ds.sn.m
    summary = run_noise_experiment(NoisePlan(ds, "work", ModelSpec("svm_rbf"), seed=8))
    cells_ok = summary.cells.shape == (10, 10) and np.isfinite(summary.cells).all()
    ok = complete and cells_ok and summary.grand_mean >= 0.85
    verdict(8, "noise injection", ok,
            f"grand-mean success {summary.grand_mean:.3f} (per r {np.round(summary.row_means, 2).tolist()}), "
            f"r=1 complete={complete}")


LF_ROWS = {"friend": (69, 339), "cowork": (71, 726), "advice": (71, 717)}


def test_criterion_09_law_firm_reproduction(tmp_path):
    path = os.environ.get("LINKASSESS_LF_MANIFEST")
    if not path or not Path(path).is_file():
        skipped(9, "law-firm reproduction", "set LINKASSESS_LF_MANIFEST to a manifest of the law-firm edge lists")
        pytest.skip("law-firm edge lists not supplied")
    manifest = load_manifest(path)
    rows = {r["network"].lower(): (r["n"], r["m"]) for r in summarize(manifest)}
    sizes_ok = all(rows.get(k) == v for k, v in LF_ROWS.items())
    ds = manifest.dataset
    cowork = next(g.id for g in ds.exogenous if g.id.lower() == "cowork")
    best = 0.0
    for C in (0.5, 1.0, 2.0, 4.0):
        for gamma in (None, 0.05, 0.2):
            rep = run_assessment(AssessmentPlan(ds, cowork, ModelSpec("svm_rbf", {"C": C, "gamma": gamma}), seed=0))
            best = max(best, rep.f_weighted)
    verdict(9, "law-firm reproduction", sizes_ok and abs(best - 0.886) <= 0.05,
            f"sizes {rows}, best cowork weighted F {best:.3f}")


def test_criterion_10_cli_determinism(tmp_path):
    data = tmp_path / "data"
    assert cli(["synth", "--out", str(data), "--seed", "5"]) == 0
    man = str(data / "manifest.ini")
    commands = [
        ["summarize"],
        ["fdm"],
        ["assess", "--train", "work", "--seed", "7", "--roc", "--grid", "CN,JI"],
        ["assess", "--train", "sn_self", "--model", "nb", "--seed", "7"],
        ["compare", "--train", "aggregated", "--models", "kn,svm,dt,nb,lr,random", "--seed", "7"],
        ["rank", "--train", "lunch", "--model", "nb", "--seed", "7"],
        ["noise", "--train", "work", "--model", "nb", "--seed", "7", "--runs", "3"],
        ["nullmodel", "--train", "work", "--model", "nb", "--seed", "7", "--replicates", "3"],
    ]
    outs = []
    for run in ("first", "second"):
        out = tmp_path / run
        for argv in commands:
            assert cli([argv[0], "--manifest", man, "--out", str(out), *argv[1:]]) == 0
        outs.append(out)
    synth2 = tmp_path / "data2"
    cli(["synth", "--out", str(synth2), "--seed", "5"])
    files = sorted(p.name for p in outs[0].iterdir())
    _, mismatch, errors = filecmp.cmpfiles(outs[0], outs[1], files, shallow=False)
    data_files = sorted(p.name for p in data.iterdir())
    _, mismatch2, errors2 = filecmp.cmpfiles(data, synth2, data_files, shallow=False)
    same_listing = files == sorted(p.name for p in outs[1].iterdir())
    ok = same_listing and not (mismatch or errors or mismatch2 or errors2)
    verdict(10, "CLI determinism", ok,
            f"{len(commands) + 1} subcommand runs, {len(files) + len(data_files)} files compared, "
            f"{len(mismatch) + len(mismatch2)} differ")

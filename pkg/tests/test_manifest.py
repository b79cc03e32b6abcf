import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linkassess.features import build_aggregated_fdm, build_fdm, read_fdm, write_fdm
from linkassess.graph import random_graph, write_edge_list
from linkassess.manifest import ManifestError, load_manifest, summarize, write_manifest
from linkassess.reports import read_record, read_table, render_table, upsert_ledger, write_record, write_table

from conftest import net


def make_dataset(tmp_path, graphs, sn_id, directed=False):
    files = {}
    for g in graphs:
        write_edge_list(g, tmp_path / f"{g.id}.edges")
        files[g.id] = f"{g.id}.edges"
    write_manifest(tmp_path / "m.ini", "test", sn_id, files, directed=directed)
    return tmp_path / "m.ini"


def test_rg_shaped_manifest(tmp_path):
    ids = ["facebook", "work", "coauthor", "lunch", "leisure"]
    graphs = [random_graph(20, 30 + 5 * i, i, id=gid) for i, gid in enumerate(ids)]
    m = load_manifest(make_dataset(tmp_path, graphs, "facebook"))
    assert len(m.networks) == 5 and m.sn.id == "facebook"
    assert [d.id for d in m.exogenous] == ids[1:]
    assert m.dataset.sn.m == 30


def test_lf_shaped_manifest(tmp_path):
    graphs = [random_graph(15, 40, i, directed=True, id=gid) for i, gid in enumerate(["friend", "cowork", "advice"])]
    m = load_manifest(make_dataset(tmp_path, graphs, "friend", directed=True))
    assert len(m.networks) == 3 and all(g.directed for g in m.networks.values())


def test_mixed_directedness_rejected(tmp_path):
    graphs = [random_graph(10, 12, 0, id="sn"), random_graph(10, 12, 1, id="g")]
    path = make_dataset(tmp_path, graphs, "sn")
    text = path.read_text().replace("[network:g]\n", "[network:g]\ndirected = true\n")
    path.write_text(text)
    with pytest.raises(ManifestError, match="mix"):
        load_manifest(path)


def test_manifest_errors(tmp_path):
    graphs = [random_graph(10, 12, 0, id="sn"), random_graph(10, 12, 1, id="g")]
    path = make_dataset(tmp_path, graphs, "sn")
    good = path.read_text()
    path.write_text(good + "\n[network:g]\npath = g.edges\n")
    with pytest.raises(ManifestError, match="g"):
        load_manifest(path)
    path.write_text(good.replace("sn = sn", "sn = missing"))
    with pytest.raises(ManifestError, match="missing"):
        load_manifest(path)
    path.write_text(good.replace("path = g.edges", "path = nowhere.edges"))
    with pytest.raises(ManifestError, match="nowhere"):
        load_manifest(path)
    with pytest.raises(ManifestError):
        load_manifest(tmp_path / "absent.ini")
    path.write_text(good + "\n[extra]\nx = 1\n")
    with pytest.raises(ManifestError, match="extra"):
        load_manifest(path)


def test_summarize_k4(tmp_path, k4):
    rows = summarize(load_manifest(make_dataset(tmp_path, [k4.with_edges([], id="k4")], "k4")))
    row = rows[0]
    assert (row["n"], row["m"], row["avg_clustering"], row["density"]) == (4, 6, 1.0, 1.0)
    assert row["overlap_with_sn"] == 6


def test_summarize_identical_and_er(tmp_path):
    er = random_graph(60, 338, 11, id="sn")
    rows = summarize(load_manifest(make_dataset(tmp_path, [er, er.with_edges([], id="copy")], "sn")))
    assert rows[1]["overlap_with_sn"] == 338
    assert round(rows[0]["density"], 3) == 0.191
    assert "0.191" in render_table(rows, ["network", "density"])


# --- lossless round-trips -----------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.from_regex(r"[a-z_]{1,10}", fullmatch=True),
                       st.one_of(st.floats(allow_nan=False), st.integers(-10**9, 10**9), st.booleans(),
                                 st.none(), st.from_regex(r"[a-z][a-z0-9_]{0,8}", fullmatch=True)
                                 .filter(lambda s: s not in ("true", "false", "inf", "nan", "infinity")))))
def test_record_roundtrip(tmp_path_factory, record):
    path = tmp_path_factory.mktemp("rec") / "r.txt"
    write_record(record, path)
    back = read_record(path)
    assert back == record


def test_table_roundtrip(tmp_path, rng):
    rows = [{"a": float(x), "b": int(i), "c": f"n{i}"} for i, x in enumerate(rng.normal(size=20))]
    write_table(rows, tmp_path / "t.tsv")
    assert read_table(tmp_path / "t.tsv") == rows


@pytest.mark.parametrize("directed", [False, True])
def test_fdm_roundtrip(tmp_path, directed):
    g = random_graph(12, 25, 3, directed)
    for fdm in (build_fdm(g), build_fdm(g, include_global=True),
                build_aggregated_fdm([g, random_graph(12, 20, 4, directed, id="h")])):
        write_fdm(fdm, tmp_path / "f.tsv")
        back = read_fdm(tmp_path / "f.tsv")
        assert back.schema == fdm.schema and back.pairs == fdm.pairs
        assert np.array_equal(back.matrix(), fdm.matrix())
        assert np.array_equal(back.labels, fdm.labels) and back.sources == fdm.sources


def test_ledger_upsert(tmp_path):
    path = tmp_path / "runs.tsv"
    upsert_ledger(path, {"plan_hash": "0e12", "seed": 1, "accuracy": 0.5})
    upsert_ledger(path, {"plan_hash": "0a00", "seed": 2, "accuracy": 0.7})
    first = path.read_text()
    upsert_ledger(path, {"plan_hash": "0e12", "seed": 1, "accuracy": 0.5})
    assert path.read_text() == first
    upsert_ledger(path, {"plan_hash": "0e12", "seed": 1, "accuracy": 0.6})
    rows = read_table(path)
    assert len(rows) == 2 and rows[1]["accuracy"] == 0.6
    assert path.read_text().splitlines()[2].startswith("0e12\t")

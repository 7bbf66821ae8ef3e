import csv
import json

import numpy as np
import pytest

from mirrorclust import DistanceMatrix, Labeling, adjusted_rand_index, agglomerate
from mirrorclust.cli import main
from mirrorclust.fileio import read_edge_list, read_labels_csv, write_dendrogram_json, write_labels_csv


def run(*argv):
    return main([str(a) for a in argv])


def read_csv_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def numeric_artifacts(out):
    names = sorted(
        p.relative_to(out).as_posix()
        for p in out.rglob("*")
        if p.is_file() and p.name != "run-metadata.json"
    )
    return {name: (out / name).read_bytes() for name in names}


class TestGenerate:
    def test_rw_scenario_writes_valid_snapshots(self, tmp_path, capsys):
        out = tmp_path / "data"
        assert run("generate", "rw", "--n", 40, "--T", 10, "--seed", 3, "--out", out) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["m"] == 1 and manifest["T"] == 10 and manifest["n"] == 40
        paths = manifest["networks"][0]["snapshots"]
        assert len(paths) == 10
        for rel in paths:
            snap = read_edge_list(out / rel)
            assert snap.n == 40

    def test_changepoint_scenario_manifest_and_truth(self, tmp_path):
        out = tmp_path / "cp"
        assert run(
            "generate", "changepoint", "--n", 30, "--T", 8, "--change-t", 4,
            "--nets-per-cluster", 2, "--seed", 5, "--out", out,
        ) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["m"] == 4
        ids, labels = read_labels_csv(out / "labels_true.csv")
        assert labels == ["1", "1", "2", "2"]

    def test_zero_vertices_is_domain_error(self, tmp_path, capsys):
        assert run("generate", "rw", "--n", 0, "--T", 5, "--out", tmp_path / "x") == 1
        assert "error:" in capsys.readouterr().err

    def test_existing_output_dir_rejected(self, tmp_path):
        out = tmp_path / "data"
        out.mkdir()
        assert run("generate", "rw", "--n", 10, "--T", 3, "--out", out) == 1


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("ds") / "planted"
    code = run(
        "generate", "changepoint", "--n", 150, "--T", 30, "--change-t", 15,
        "--nets-per-cluster", 2, "--seed", 7, "--out", out,
    )
    assert code == 0
    return out


class TestCluster:
    def test_recovers_planted_partition(self, tmp_path, dataset):
        out = tmp_path / "run"
        code = run(
            "cluster", "--manifest", dataset / "manifest.json", "--d", 1, "--r", 1,
            "--k", 2, "--seed", 0, "--threads", 2, "--out", out,
        )
        assert code == 0
        ids, labels = read_labels_csv(out / "labels.csv")
        _, truth = read_labels_csv(dataset / "labels_true.csv")
        ari = adjusted_rand_index(
            Labeling(labels=np.array([int(x) for x in labels])),
            Labeling(labels=np.array([int(x) for x in truth])),
        )
        assert ari == pytest.approx(1.0)

        dendro = json.loads((out / "dendrogram.json").read_text())
        assert dendro["leaves"] == 4 and len(dendro["merges"]) == 3
        dstar = read_csv_rows(out / "dstar.csv")
        assert dstar[0] == ids and len(dstar) == 5
        margin = json.loads((out / "margin.json").read_text())
        assert margin["certified"] is True
        assert margin["max_within"] < margin["min_between"]
        for net_id in ids:
            assert (out / "mirrors" / f"{net_id}.csv").exists()
            assert (out / "distances" / f"{net_id}.csv").exists()
        meta = json.loads((out / "run-metadata.json").read_text())
        assert meta["config"]["k"] == 2 and "numpy" in meta["versions"]

    def test_round_trip_preserves_matrices(self, tmp_path, dataset):
        # what cluster re-reads must be exactly what generate sampled
        from mirrorclust import ChangepointConfig, RandomWalkConfig
        from mirrorclust import changepoint_latents, sample_dynamic_network
        from mirrorclust.cli import _load_networks
        from mirrorclust.util import derive_seed

        manifest = json.loads((dataset / "manifest.json").read_text())
        nets = _load_networks(dataset / "manifest.json", dense=False)
        assert len(nets) == manifest["m"]
        seed, n, T, change_t = 7, 150, 30, 15
        base = RandomWalkConfig(c_tilde=0.1, delta=0.9 / T, p=0.45, n=n, T=T)
        cfgs = (
            ChangepointConfig(base=base, change_t=change_t, p_before=0.45, p_after=0.55),
            ChangepointConfig(base=base, change_t=change_t, p_before=0.55, p_after=0.45),
        )
        expected_ids = ["cp1-000", "cp1-001", "cp2-000", "cp2-001"]
        assert [net.id for net in nets] == expected_ids
        for net in nets:
            cfg = cfgs[0] if net.id.startswith("cp1") else cfgs[1]
            latents = changepoint_latents(cfg, derive_seed(seed, net.id))
            resampled = sample_dynamic_network(
                latents, derive_seed(seed, net.id, "network"), network_id=net.id
            )
            for got, expect in zip(net.snapshots, resampled.snapshots):
                np.testing.assert_array_equal(got.matrix, expect.matrix)

    def test_rerun_same_seed_is_byte_identical(self, tmp_path, dataset):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run(
                "cluster", "--manifest", dataset / "manifest.json", "--d", 1, "--r", 1,
                "--k", 2, "--seed", 9, "--out", out,
            ) == 0
            outs.append(numeric_artifacts(out))
        assert outs[0] == outs[1]

    def test_single_network_rejected(self, tmp_path, capsys):
        data = tmp_path / "single"
        assert run("generate", "rw", "--n", 20, "--T", 4, "--out", data, "--seed", 1) == 0
        code = run(
            "cluster", "--manifest", data / "manifest.json", "--d", 1, "--r", 1,
            "--k", 1, "--out", tmp_path / "run",
        )
        assert code == 1
        assert "need >=2 networks" in capsys.readouterr().err

    def test_elbow_rule_chooses_dimension(self, tmp_path, dataset):
        out = tmp_path / "auto"
        code = run(
            "cluster", "--manifest", dataset / "manifest.json", "--d", "auto",
            "--max-rank", 5, "--r", 1, "--k", 2, "--out", out,
        )
        assert code == 0
        meta = json.loads((out / "run-metadata.json").read_text())
        assert meta["config"]["dim_rule"] == "elbow"
        assert meta["config"]["d"] >= 1

    def test_dense_flag_round_trip(self, tmp_path):
        data = tmp_path / "dense"
        assert run(
            "generate", "changepoint", "--n", 40, "--T", 6, "--change-t", 3,
            "--nets-per-cluster", 2, "--seed", 2, "--out", data, "--dense",
        ) == 0
        out = tmp_path / "run"
        code = run(
            "cluster", "--manifest", data / "manifest.json", "--dense", "--d", 1,
            "--r", 1, "--k", 2, "--out", out,
        )
        assert code == 0

    def test_conflicting_dim_flags_are_usage_errors(self, tmp_path, dataset):
        code = run(
            "cluster", "--manifest", dataset / "manifest.json", "--d", "auto",
            "--dim-rule", "fixed", "--r", 1, "--k", 2, "--out", tmp_path / "x",
        )
        assert code == 2
        code = run(
            "cluster", "--manifest", dataset / "manifest.json", "--d", "five",
            "--r", 1, "--k", 2, "--out", tmp_path / "y",
        )
        assert code == 2


class TestExperiment:
    def test_unknown_name_is_usage_error(self, tmp_path):
        assert run("experiment", "frobnicate", "--out", tmp_path / "x") == 2

    def test_mirror_error_outputs(self, tmp_path):
        out = tmp_path / "exp"
        code = run(
            "experiment", "mirror-error", "--vary", "n", "--grid", "30,60",
            "--T", 6, "--replicates", 2, "--seed", 4, "--out", out,
        )
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["name"] == "mirror-error"
        assert report["grid"] == [30.0, 60.0]
        assert len(report["cells"]) == 2
        rows = read_csv_rows(out / "curve.csv")
        assert rows[0] == ["x", "mean", "sd", "q05", "q95"]
        assert len(rows) == 3

    def test_clustering_outputs(self, tmp_path):
        out = tmp_path / "exp"
        code = run(
            "experiment", "clustering", "--grid", "40", "--T", 8, "--replicates", 1,
            "--seed", 4, "--out", out,
        )
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["params"]["nets_per_cluster"] == 20
        assert len(read_csv_rows(out / "curve.csv")) == 2


class TestStability:
    @pytest.fixture()
    def saved_dendrogram(self, tmp_path):
        rng = np.random.default_rng(51)
        L, size = 5, 4
        labels = np.repeat(np.arange(1, L + 1), size)
        m = L * size
        D = np.zeros((m, m))
        for i in range(m):
            for j in range(i + 1, m):
                spread = 0.02 if labels[i] == labels[j] else rng.uniform(0.8, 1.0)
                D[i, j] = D[j, i] = spread
        dendro = agglomerate(DistanceMatrix(D), "average")
        dpath = tmp_path / "dendrogram.json"
        write_dendrogram_json(dpath, dendro)
        lpath = tmp_path / "labels.csv"
        write_labels_csv(lpath, [f"net{i}" for i in range(m)], labels.tolist())
        return dpath, lpath

    def test_outputs(self, tmp_path, saved_dendrogram):
        dpath, lpath = saved_dendrogram
        out = tmp_path / "stab"
        code = run(
            "stability", "--dendrogram", dpath, "--labels", lpath, "--k-max", 4, "--out", out,
        )
        assert code == 0
        for K in range(1, 5):
            assert (out / f"contingency_K{K}.csv").exists()
        auc_rows = read_csv_rows(out / "normalized_auc.csv")
        assert auc_rows[0] == ["label", "normalized_auc"]
        # K_max <= label count: separated labels never split, AUC exactly 1
        for row in auc_rows[1:]:
            assert float(row[1]) == pytest.approx(1.0)
        jac = read_csv_rows(out / "jaccard_auc.csv")
        body = np.array([[float(x) for x in row[1:]] for row in jac[1:]])
        np.testing.assert_allclose(body, body.T)
        np.testing.assert_array_equal(np.diagonal(body), np.zeros(5))
        assert np.all((body >= 0) & (body <= 1))
        curve_rows = read_csv_rows(out / "max_rate_curve.csv")
        assert curve_rows[0] == ["label", "K1", "K2", "K3", "K4"]

    def test_k_max_one_is_error(self, tmp_path, saved_dendrogram):
        dpath, lpath = saved_dendrogram
        code = run(
            "stability", "--dendrogram", dpath, "--labels", lpath, "--k-max", 1,
            "--out", tmp_path / "x",
        )
        assert code == 1

    def test_label_count_mismatch(self, tmp_path, saved_dendrogram):
        dpath, _ = saved_dendrogram
        short = tmp_path / "short.csv"
        write_labels_csv(short, ["a", "b"], [1, 2])
        code = run(
            "stability", "--dendrogram", dpath, "--labels", short, "--k-max", 3,
            "--out", tmp_path / "x",
        )
        assert code == 1


def test_missing_subcommand_is_usage_error():
    assert run() == 2


def test_threads_env_fallback(monkeypatch):
    from mirrorclust.cli import resolve_threads

    monkeypatch.setenv("MIRRORCLUST_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads("5") == 5
    monkeypatch.delenv("MIRRORCLUST_THREADS")
    assert resolve_threads(None) >= 1

import json

import pytest

from cotrain.cli import ExperimentConfig, compare_experiments, main, run_experiment
from cotrain.errors import ConfigError, TestSetMismatch
from cotrain.io_ingest import read_report_json
from cotrain.synthetic import SyntheticSpec, generate, write_dataset


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    spec = SyntheticSpec(seed=5, class_separation=3.0, features_per_view=9,
                         n_labeled=10, n_unlabeled=200, n_test=200)
    return write_dataset(generate(spec), out)


def _run_args(dataset, mode, out, seed=5, extra=()):
    args = [
        "run",
        "--mode", mode,
        "--labeled-mirna", str(dataset["mirna_labeled"]),
        "--labels", str(dataset["labels"]),
        "--test", str(dataset["mirna_test"]),
        "--alpha", "0.7",
        "--seed", str(seed),
        "--out", str(out),
    ]
    if mode != "baseline":
        args += ["--unlabeled-mirna", str(dataset["mirna_unlabeled"])]
    if mode == "co-train":
        args += [
            "--labeled-gene", str(dataset["gene_labeled"]),
            "--unlabeled-gene", str(dataset["gene_unlabeled"]),
            "--targets", str(dataset["targets"]),
            "--test-view", "mirna",
        ]
    return args + list(extra)


class TestRunCommand:
    def test_baseline_report(self, dataset, tmp_path, capsys):
        out = tmp_path / "baseline.json"
        assert main(_run_args(dataset, "baseline", out)) == 0
        data = json.loads(out.read_text())
        assert sorted(data) == ["classes", "iterations", "per_class", "weighted"]
        assert data["iterations"] == []
        assert set(data["classes"]) == {"c0", "c1"}
        assert 0.0 <= data["weighted"]["f1"] <= 1.0
        assert "weighted" in capsys.readouterr().out

    def test_self_train_report_has_history(self, dataset, tmp_path):
        out = tmp_path / "st.json"
        assert main(_run_args(dataset, "self-train", out)) == 0
        data = json.loads(out.read_text())
        assert data["iterations"]
        rec = data["iterations"][0]
        assert set(rec) == {
            "iteration", "promoted_count", "promoted_per_class",
            "training_size", "weighted_f1", "dropped_features",
        }
        assert rec["training_size"] >= 10

    def test_co_train_runs(self, dataset, tmp_path):
        out = tmp_path / "ct.json"
        assert main(_run_args(dataset, "co-train", out)) == 0
        data = json.loads(out.read_text())
        assert len(data["iterations"]) >= 1

    def test_rerun_is_byte_identical(self, dataset, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(_run_args(dataset, "self-train", a)) == 0
        assert main(_run_args(dataset, "self-train", b)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_self_train_without_pools_equals_baseline(self, dataset, tmp_path):
        base = tmp_path / "base.json"
        st = tmp_path / "st.json"
        assert main(_run_args(dataset, "baseline", base)) == 0
        args = _run_args(dataset, "self-train", st)
        i = args.index("--unlabeled-mirna")
        del args[i : i + 2]
        assert main(args) == 0
        assert base.read_bytes() == st.read_bytes()

    def test_co_train_requires_targets(self, dataset, tmp_path, capsys):
        args = _run_args(dataset, "co-train", tmp_path / "x.json")
        i = args.index("--targets")
        del args[i : i + 2]
        assert main(args) == 1
        assert "targets" in capsys.readouterr().err

    def test_missing_input_file_fails(self, dataset, tmp_path, capsys):
        args = _run_args(dataset, "baseline", tmp_path / "x.json")
        args[args.index("--test") + 1] = str(tmp_path / "nope.csv")
        assert main(args) == 1

    def test_normalize_zscore(self, dataset, tmp_path):
        out = tmp_path / "z.json"
        assert main(_run_args(dataset, "baseline", out, extra=["--normalize", "zscore"])) == 0

    def test_linear_classifier(self, dataset, tmp_path):
        out = tmp_path / "lin.json"
        assert main(_run_args(dataset, "baseline", out, extra=["--classifier", "linear"])) == 0

    def test_eval_set_records_f1(self, dataset, tmp_path):
        out = tmp_path / "ev.json"
        extra = ["--eval", str(dataset["mirna_test"]), "--max-iters", "4"]
        assert main(_run_args(dataset, "self-train", out, extra=extra)) == 0
        data = json.loads(out.read_text())
        assert data["iterations"]
        assert all(rec["weighted_f1"] is not None for rec in data["iterations"])


class TestCompare:
    def _write_cfg(self, path, dataset, mode, seed=5):
        cfg = {
            "mode": mode,
            "labeled_mirna": str(dataset["mirna_labeled"]),
            "labels": str(dataset["labels"]),
            "test": str(dataset["mirna_test"]),
            "alpha": 0.7,
            "seed": seed,
        }
        if mode == "self-train":
            cfg["unlabeled_mirna"] = [str(dataset["mirna_unlabeled"])]
        path.write_text(json.dumps(cfg))
        return path

    def test_improvement_scenario(self, dataset, tmp_path, capsys):
        base = self._write_cfg(tmp_path / "baseline.json", dataset, "baseline")
        st = self._write_cfg(tmp_path / "selftrain.json", dataset, "self-train")
        out_csv = tmp_path / "table.csv"
        assert main(["compare", str(base), str(st), "--out", str(out_csv)]) == 0
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "name,precision,recall,f1"
        rows = {line.split(",")[0]: line.split(",") for line in lines[1:]}
        f1_base = float(rows["baseline"][3])
        f1_st = float(rows["selftrain"][3])
        assert f1_st > f1_base
        assert "selftrain" in capsys.readouterr().out

    def test_same_config_identical_rows(self, dataset, tmp_path):
        a = self._write_cfg(tmp_path / "a.json", dataset, "baseline")
        b = self._write_cfg(tmp_path / "b.json", dataset, "baseline")
        rows = compare_experiments(
            [ExperimentConfig.from_json_file(a), ExperimentConfig.from_json_file(b)]
        )
        assert rows[0][1:] == rows[1][1:]

    def test_empty_config_list_rejected(self):
        with pytest.raises(ConfigError):
            compare_experiments([])

    def test_test_set_mismatch(self, dataset, tmp_path):
        a = self._write_cfg(tmp_path / "a.json", dataset, "baseline")
        cfg_b = json.loads(a.read_text())
        cfg_b["test"] = str(dataset["gene_test"])
        cfg_b["labeled_mirna"] = None
        cfg_b["labeled_gene"] = str(dataset["gene_labeled"])
        b = tmp_path / "b.json"
        b.write_text(json.dumps(cfg_b))
        with pytest.raises(TestSetMismatch):
            compare_experiments(
                [ExperimentConfig.from_json_file(a), ExperimentConfig.from_json_file(b)]
            )

    def test_unknown_key_rejected(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"mode": "baseline", "bogus": 1}')
        with pytest.raises(ConfigError):
            ExperimentConfig.from_json_file(p)


class TestSynthCommand:
    def test_writes_dataset(self, tmp_path, capsys):
        out_dir = tmp_path / "synth"
        assert main([
            "synth", "--out-dir", str(out_dir), "--classes", "2", "--features", "9",
            "--labeled", "6", "--unlabeled", "8", "--test", "5", "--seed", "3",
        ]) == 0
        assert (out_dir / "mirna_labeled.csv").exists()
        assert (out_dir / "targets.tsv").exists()
        assert "labels" in capsys.readouterr().out

    def test_invalid_spec_fails(self, tmp_path, capsys):
        assert main(["synth", "--out-dir", str(tmp_path), "--classes", "1"]) == 1
        assert "error" in capsys.readouterr().err


class TestConfigValidation:
    def test_mode_requires_exactly_one_view(self, dataset):
        cfg = ExperimentConfig(
            mode="baseline",
            labeled_mirna=str(dataset["mirna_labeled"]),
            labeled_gene=str(dataset["gene_labeled"]),
            labels=str(dataset["labels"]),
            test=str(dataset["mirna_test"]),
        )
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_report_round_trip_through_run(self, dataset, tmp_path):
        cfg = ExperimentConfig(
            mode="baseline",
            labeled_mirna=str(dataset["mirna_labeled"]),
            labels=str(dataset["labels"]),
            test=str(dataset["mirna_test"]),
            seed=5,
        )
        report = run_experiment(cfg)
        out = tmp_path / "r.json"
        from cotrain.io_ingest import write_report_json

        write_report_json(report, out)
        assert read_report_json(out) == report

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from housegan.cli import main
from housegan.core import BubbleDiagram, dump_json_canonical
from housegan.models import load_checkpoint


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["synth-corpus", "--out", str(root / "corpus"), "--seed", "5",
         "--counts", "1-3=6,4-6=6,7-9=4,10-12=3,13+=3"],
    )
    assert result.exit_code == 0, result.output
    result = runner.invoke(
        main,
        ["train", "--corpus", str(root / "corpus"), "--group", "1-3", "--ablation", "full",
         "--iters", "2", "--seed", "1", "--out", str(root / "model.npz"),
         "--preset", "tiny", "--batch-size", "2", "--progress-every", "0"],
    )
    assert result.exit_code == 0, result.output
    return root


class TestSynthCorpus:
    def test_layout_on_disk(self, workdir):
        manifest = json.loads((workdir / "corpus" / "manifest.json").read_text())
        assert manifest["seed"] == 5
        assert manifest["counts"]["1-3"] == 6
        assert len(list((workdir / "corpus" / "13+").glob("*.json"))) == 3


class TestTrain:
    def test_checkpoint_and_log(self, workdir):
        ckpt = load_checkpoint(workdir / "model.npz")
        assert ckpt.train_group == "1-3"
        assert ckpt.preset.name == "tiny"
        assert ckpt.extra["iteration"] == 2
        log = (workdir / "model.csv").read_text().strip().splitlines()
        assert log[0] == "iteration,d_loss,g_loss,gp,wall_time"
        assert len(log) == 3

    def test_baseline_variants_train(self, workdir, tmp_path):
        runner = CliRunner()
        for ablation in ("cnn-only", "gcn", "no-conn"):
            result = runner.invoke(
                main,
                ["train", "--corpus", str(workdir / "corpus"), "--group", "4-6",
                 "--ablation", ablation, "--iters", "1", "--seed", "2",
                 "--out", str(tmp_path / f"{ablation}.npz"), "--preset", "tiny",
                 "--batch-size", "1", "--progress-every", "0"],
            )
            assert result.exit_code == 0, result.output
            ckpt = load_checkpoint(tmp_path / f"{ablation}.npz")
            expected_variant = {"cnn-only": "cnn-only", "gcn": "gcn", "no-conn": "housegan"}[ablation]
            assert ckpt.variant == expected_variant
            assert ckpt.ablation.name == ("no-conn" if ablation == "no-conn" else "full")


class TestEvaluate:
    def test_compat_report_defaults(self, workdir):
        runner = CliRunner()
        report_path = workdir / "compat.json"
        result = runner.invoke(
            main,
            ["evaluate", "--ckpt", str(workdir / "model.npz"), "--corpus", str(workdir / "corpus"),
             "--group", "1-3", "--metric", "compat", "--report", str(report_path)],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(report_path.read_text())
        assert report["protocol"]["num_diagrams"] == 5000
        assert report["protocol"]["variations_per_diagram"] == 1
        assert report["protocol"]["ged_upper_bound"] == 40.0
        assert report["num_diagrams_evaluated"] == 6
        assert report["checkpoint"]["train_group"] == "1-3"

    def test_fid_report_defaults(self, workdir):
        runner = CliRunner()
        report_path = workdir / "fid.json"
        result = runner.invoke(
            main,
            ["evaluate", "--ckpt", str(workdir / "model.npz"), "--corpus", str(workdir / "corpus"),
             "--group", "1-3", "--metric", "fid", "--report", str(report_path)],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(report_path.read_text())
        assert report["protocol"]["num_diagrams"] == 5000
        assert report["protocol"]["variations_per_diagram"] == 10
        assert report["feature_extractor"] == "pixels-rp64"
        assert report["score"] >= 0

    def test_samples_override(self, workdir):
        runner = CliRunner()
        report_path = workdir / "compat_small.json"
        result = runner.invoke(
            main,
            ["evaluate", "--ckpt", str(workdir / "model.npz"), "--corpus", str(workdir / "corpus"),
             "--group", "1-3", "--metric", "compat", "--samples", "2", "--report", str(report_path)],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(report_path.read_text())
        assert report["protocol"]["num_diagrams"] == 2
        assert report["num_diagrams_evaluated"] == 2


class TestGenerate:
    def test_writes_layouts(self, workdir, tmp_path):
        diagram = BubbleDiagram([2, 1], [(0, 1)])
        diagram_path = tmp_path / "diagram.json"
        diagram_path.write_text(dump_json_canonical(diagram.to_json_dict()))
        runner = CliRunner()
        out_dir = tmp_path / "generated"
        result = runner.invoke(
            main,
            ["generate", "--ckpt", str(workdir / "model.npz"), "--diagram", str(diagram_path),
             "-n", "3", "--seed", "1", "--out", str(out_dir), "--no-png"],
        )
        assert result.exit_code == 0, result.output
        files = sorted(out_dir.glob("sample_*.json"))
        assert len(files) == 3
        payload = json.loads(files[0].read_text())
        assert len(payload["layout"]["rooms"]) == 2
        assert "distance" in payload["compatibility"]

    def test_env_var_checkpoint_resolution(self, workdir, tmp_path, monkeypatch):
        monkeypatch.setenv("HOUSEGAN_CHECKPOINT_DIR", str(workdir))
        diagram_path = tmp_path / "d.json"
        diagram_path.write_text(dump_json_canonical(BubbleDiagram([2]).to_json_dict()))
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["generate", "--ckpt", "model", "--diagram", str(diagram_path),
             "-n", "1", "--seed", "0", "--out", str(tmp_path / "o"), "--no-png"],
        )
        assert result.exit_code == 0, result.output

"""End-to-end command-line behaviour."""

import subprocess
import sys

import numpy as np
import pytest

from glyphlab.cli import main
from glyphlab.dataset import read_cds
from glyphlab.harness import ResultTable


def run(args):
    return main(args)


class TestGen:
    def test_gen_twice_identical_files(self, tmp_path):
        a, b = tmp_path / "a.cds", tmp_path / "b.cds"
        for out in (a, b):
            assert run(["gen", "--preset", "raw", "--n", "10", "--seed", "1",
                        "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.cds.meta").read_text() == (tmp_path / "b.cds.meta").read_text()

    def test_gen_p07_deterministic_with_workers(self, tmp_path):
        a, b = tmp_path / "a.cds", tmp_path / "b.cds"
        run(["gen", "--preset", "p07", "--n", "24", "--seed", "7", "--out", str(a)])
        run(["gen", "--preset", "p07", "--n", "24", "--seed", "7", "--workers", "2",
             "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_custom_mix(self, tmp_path):
        out = tmp_path / "m.cds"
        assert run(["gen", "--preset", "nistp", "--n", "8", "--seed", "2",
                    "--mix", "nist:1.0", "--out", str(out)]) == 0
        ds = read_cds(out)
        assert len(ds) == 8
        assert ds.meta["mix"] == "nist:1"

    def test_bad_preset_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["gen", "--preset", "extreme", "--n", "5", "--out", str(tmp_path / "x.cds")])
        assert exc.value.code != 0


class TestShow:
    def test_contact_sheet(self, tmp_path):
        data = tmp_path / "d.cds"
        run(["gen", "--preset", "raw", "--n", "6", "--seed", "3", "--out", str(data)])
        sheet = tmp_path / "sheet.pgm"
        assert run(["show", "--data", str(data), "--rows", "2", "--cols", "3",
                    "--out", str(sheet)]) == 0
        assert sheet.read_bytes().startswith(b"P5\n100 66\n255\n")


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_train")
    train, valid = root / "train.cds", root / "valid.cds"
    run(["gen", "--preset", "raw", "--n", "300", "--seed", "4", "--out", str(train)])
    run(["gen", "--preset", "raw", "--n", "100", "--seed", "5", "--out", str(valid)])
    model = root / "model.cnm"
    code = run(["train", "--model", "mlp", "--train", str(train), "--valid", str(valid),
                "--hidden", "24", "--epochs", "6", "--seed", "6", "--out", str(model)])
    assert code == 0
    return root, train, valid, model


class TestTrainEval:
    def test_checkpoint_written(self, trained):
        _, _, _, model = trained
        assert model.read_bytes()[:4] == b"CNM1"

    def test_eval_all_and_digits(self, trained, capsys):
        root, train, valid, model = trained
        assert run(["eval", "--model-file", str(model), "--data", str(valid)]) == 0
        all_out = capsys.readouterr().out
        assert "error" in all_out
        assert run(["eval", "--model-file", str(model), "--data", str(valid),
                    "--classes", "digits"]) == 0
        digit_out = capsys.readouterr().out
        assert "error" in digit_out

    def test_train_sda_smoke(self, trained):
        root, train, valid, _ = trained
        model = root / "sda.cnm"
        code = run(["train", "--model", "sda", "--train", str(train), "--valid", str(valid),
                    "--hidden", "16", "--epochs", "2", "--pretrain-epochs", "1",
                    "--seed", "8", "--out", str(model)])
        assert code == 0
        assert model.read_bytes()[6] == 2  # sda kind


class TestReport:
    def test_reference_report(self, capsys):
        assert run(["report", "--reference"]) == 0
        out = capsys.readouterr().out
        assert "SDA0/SDA1-1" in out
        assert "+38.6%" in out  # clean-test relative change
        assert "+27.0%" in out  # SDA-digits multi-task improvement

    def test_report_from_tsv(self, tmp_path, capsys):
        from glyphlab.harness import reference_results

        path = tmp_path / "r.tsv"
        path.write_text(reference_results().to_tsv())
        assert run(["report", "--table", str(path)]) == 0
        assert "Test error rates" in capsys.readouterr().out

    def test_report_without_input_fails(self, capsys):
        assert run(["report"]) == 2


class TestExperiment:
    def test_mini_experiment_artifacts(self, tmp_path, capsys):
        cfg = tmp_path / "grid.cfg"
        cfg.write_text(
            "train_n = 150\nvalid_n = 50\ntest_n = 50\nhidden = 12\n"
            "mlp_epochs = 2\nsda_pretrain_epochs = 1\nsda_finetune_epochs = 2\n"
            "single_task_epochs = 2\ninclude_multitask = false\n"
        )
        out_dir = tmp_path / "run"
        assert run(["experiment", "--grid-config", str(cfg), "--seed", "3",
                    "--out-dir", str(out_dir)]) == 0
        table = ResultTable.from_tsv((out_dir / "results.tsv").read_text())
        assert {r.model for r in table.rows} >= {"MLP0", "SDA2"}
        report = (out_dir / "report.txt").read_text()
        assert "Test error rates" in report
        assert (out_dir / "MLP0.cnm").exists()
        assert (out_dir / "SDA1.cnm").exists()


def test_module_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "glyphlab", "report", "--reference"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "Multi-task comparison" in proc.stdout

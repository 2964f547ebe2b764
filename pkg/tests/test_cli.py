"""
End-to-end tests for the qridge command line.
"""
import logging

import pytest

from qridge.harness.cli import build_parser, main
from qridge.harness.report import parse_report


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def predict_cli(capsys, data, x_new, alpha, *extra):
    return run_cli(
        capsys, "predict", "--data", data, f"--x-new={x_new}", "--alpha", alpha, *extra
    )


class TestPredict:
    def test_identity(self, capsys, identity_csv):
        code, out = predict_cli(capsys, identity_csv, "1,0", "0")
        report = parse_report(out)
        assert code == 0
        assert report["mode"] == "predict"
        assert report["outcome"]["y_prime"] == pytest.approx(3.0, abs=1e-9)
        assert report["classical"]["y_prime"] == pytest.approx(3.0)
        assert report["within_bound"] is True
        assert report["config"]["x_new"] == [1.0, 0.0]

    def test_repeat_runs_are_identical(self, capsys, identity_csv):
        argv = (identity_csv, "1,1", "0.5", "--shots", 4000, "--seed", 11)
        first = predict_cli(capsys, *argv)
        second = predict_cli(capsys, *argv)
        assert first == second

    def test_negative_input_values(self, capsys, identity_csv):
        code, out = predict_cli(capsys, identity_csv, "-1,0", "0")
        assert code == 0
        assert parse_report(out)["outcome"]["y_prime"] == pytest.approx(-3.0, abs=1e-9)

    def test_wrong_input_length(self, capsys, identity_csv):
        code, out = predict_cli(capsys, identity_csv, "1,0,0", "0")
        assert code == 2
        assert parse_report(out)["error"]["type"] == "DimensionError"

    def test_unparseable_input(self, capsys, identity_csv):
        code, _ = predict_cli(capsys, identity_csv, "a,b", "0")
        assert code == 2

    def test_non_finite_csv(self, capsys, nan_csv):
        code, out = predict_cli(capsys, nan_csv, "1,0", "0")
        error = parse_report(out)["error"]
        assert code == 2
        assert error["type"] == "DatasetError"
        assert "row 2" in error["message"]

    def test_standardized(self, capsys, identity_csv):
        # centred X is [[1, -1], [-1, 1]] (singular value 2), centred y is (-0.5, 0.5)
        code, out = predict_cli(capsys, identity_csv, "1,0", "0.5", "--standardize")
        report = parse_report(out)
        assert code == 0
        assert report["dataset"]["standardized"] is True
        expected = 3.5 - 4.0 / 9.0
        assert report["outcome"]["y_prime_data"] == pytest.approx(expected, abs=1e-6)

    def test_out_file(self, capsys, tmp_path, identity_csv):
        path = tmp_path / "report.json"
        code, out = predict_cli(capsys, identity_csv, "1,0", "0", "--out", path)
        assert code == 0
        assert out == ""
        assert parse_report(path.read_text(encoding="utf-8"))["within_bound"] is True

    def test_unwritable_out(self, capsys, tmp_path, identity_csv):
        code, out = predict_cli(
            capsys, identity_csv, "1,0", "0", "--out", tmp_path / "missing" / "r.json"
        )
        assert code == 2
        assert parse_report(out)["error"]["type"] == "ReportWriteError"

    def test_record_timing(self, capsys, identity_csv):
        _, out = predict_cli(capsys, identity_csv, "1,0", "0", "--record-timing")
        assert parse_report(out)["wall_clock_ms"] >= 0.0


class TestTune:
    def test_half_design(self, capsys, half_csv):
        code, out = run_cli(capsys, "tune", "--data", half_csv, "--alpha-count", 4)
        report = parse_report(out)
        assert code == 0
        assert len(report["outcome"]["results"]) == 4
        assert report["outcome"]["grid"]["alpha_min"] == pytest.approx(0.25)
        assert all(p["within"] for p in report["checks"]["pointwise"])

    def test_negative_alpha_min(self, capsys, half_csv):
        code, out = run_cli(capsys, "tune", "--data", half_csv, "--alpha-min", "-0.5")
        assert code == 2
        assert parse_report(out)["error"]["type"] == "ConfigurationError"

    def test_every_candidate_fails(self, capsys, orthogonal_target_csv):
        code, out = run_cli(
            capsys, "tune", "--data", orthogonal_target_csv, "--alpha-count", 3
        )
        error = parse_report(out)["error"]
        assert code == 1
        assert error["type"] == "TuneFailure"

    def test_parallel_jobs_match(self, capsys, half_csv):
        _, serial = run_cli(capsys, "tune", "--data", half_csv, "--alpha-count", 3)
        _, parallel = run_cli(
            capsys, "tune", "--data", half_csv, "--alpha-count", 3, "--jobs", 3
        )
        assert parse_report(serial)["outcome"] == parse_report(parallel)["outcome"]

    def test_truncating_cutoff(self, capsys, truncation_csv):
        code, out = run_cli(
            capsys,
            "tune",
            "--data",
            truncation_csv,
            "--lambda-cutoff",
            0.5,
            "--alpha-min",
            0.1,
            "--alpha-max",
            0.5,
            "--alpha-count",
            3,
        )
        report = parse_report(out)
        assert code == 0
        assert all(p["within"] for p in report["checks"]["pointwise"])
        first = report["classical"]["losses"][0]
        assert first["loss"] == pytest.approx(0.5 + 0.5 / 121.0)
        assert report["outcome"]["selected_alpha"] == pytest.approx(0.1)


class TestCompare:
    def test_half_design(self, capsys, half_csv):
        code, out = run_cli(capsys, "compare", "--data", half_csv, "--alpha", "0.25")
        report = parse_report(out)
        assert code == 0
        assert [row["row"] for row in report["outcome"]["rows"]] == [1, 2]
        assert all(row["within"] for row in report["outcome"]["rows"])


class TestSpectrum:
    def test_identity(self, capsys, identity_csv):
        code, out = run_cli(capsys, "spectrum", "--data", identity_csv)
        outcome = parse_report(out)["outcome"]
        assert code == 0
        assert outcome["rank"] == 2
        assert outcome["condition_number"] == pytest.approx(1.0)
        assert outcome["normalized_eigenvalues"] == pytest.approx([0.5, 0.5])
        assert outcome["dyadic"]["10"] == [True, True]

    def test_truncating_cutoff(self, capsys, truncation_csv):
        code, out = run_cli(
            capsys, "spectrum", "--data", truncation_csv, "--lambda-cutoff", 0.5
        )
        outcome = parse_report(out)["outcome"]
        assert code == 0
        assert outcome["rank"] == 1
        assert outcome["normalized_eigenvalues"] == pytest.approx([1.0])
        assert outcome["frobenius_norm"] == pytest.approx(1.0)
        assert outcome["discarded_mass"] == pytest.approx(0.09)


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("predict", "--x-new", "1,1", "--alpha", "0.25"),
            ("tune", "--alpha-count", 3),
            ("compare", "--alpha", "0.25"),
            ("spectrum",),
        ],
        ids=lambda argv: argv[0],
    )
    def test_report_files_are_identical(self, capsys, tmp_path, half_csv, argv):
        paths = [tmp_path / "first.json", tmp_path / "second.json"]
        for path in paths:
            seeded = ("--shots", 2000, "--seed", 5, "--out", path)
            _, out = run_cli(capsys, *argv, "--data", half_csv, *seeded)
            assert out == ""
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestUsage:
    def test_missing_data(self, capsys):
        assert main(["spectrum"]) == 2

    def test_unknown_command(self, capsys):
        assert main(["fit", "--data", "x.csv"]) == 2

    def test_exclusive_evolution_flags(self, capsys, identity_csv):
        argv = ["spectrum", "--data", str(identity_csv), "--exact", "--lmr-steps", "64"]
        assert main(argv) == 2

    def test_bad_bits(self, capsys, identity_csv):
        code, out = run_cli(capsys, "spectrum", "--data", identity_csv, "--bits", 0)
        assert code == 2
        assert parse_report(out)["error"]["type"] == "ConfigurationError"

    def test_bad_log_level_in_environment(self, capsys, monkeypatch, identity_csv):
        monkeypatch.setenv("QRIDGE_LOG_LEVEL", "LOUD")
        code, out = run_cli(capsys, "spectrum", "--data", identity_csv)
        error = parse_report(out)["error"]
        assert code == 2
        assert error["type"] == "ConfigurationError"
        assert "LOUD" in error["message"]

    def test_version(self, capsys):
        assert main(["--version"]) == 0
        assert "qridge" in capsys.readouterr().out

    def test_parser_subcommands(self):
        args = build_parser().parse_args(["tune", "--data", "d.csv", "--jobs", "2"])
        assert args.command == "tune"
        assert args.jobs == 2

import json
import os

import numpy as np
import pytest

from heckebaxter.cli import main, parse_matrix


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


class TestParsing:
    def test_row_major_matrix(self):
        m = parse_matrix("1,2,3,4")
        assert np.array_equal(m, [[1.0, 2.0], [3.0, 4.0]])

    def test_non_square_rejected(self):
        from heckebaxter.cli import ConfigError

        with pytest.raises(ConfigError):
            parse_matrix("1,2,3")


class TestExitCodes:
    def test_pass_is_zero(self, capsys):
        code, report = run_json(
            capsys, "lfactor", "--ell", "0", "--epsilon", "0", "--gamma", "0", "--s-re", "1"
        )
        assert code == 0
        assert report["passed"] is True
        assert report["results"][0]["estimate"]["re"] == pytest.approx(1.7724538509, abs=1e-9)

    def test_failure_is_one(self, capsys):
        code, _ = run_cli(
            capsys,
            "eigencheck", "--ell", "0", "--epsilon", "0", "--gamma", "0.3",
            "--s-re", "2.5", "--samples", "2000", "--tol-sigma", "1e-12",
        )
        assert code == 1

    def test_config_error_is_two(self, capsys):
        code, _ = run_cli(
            capsys, "eigencheck", "--ell", "1", "--epsilon", "0", "--gamma", "0.3",
            "--s-re", "2.5",
        )
        assert code == 2

    def test_unknown_flag_is_two(self, capsys):
        code, _ = run_cli(capsys, "lfactor", "--no-such-flag")
        assert code == 2

    def test_low_sample_count_is_config_error(self, capsys):
        code, _ = run_cli(
            capsys, "eigencheck", "--ell", "0", "--epsilon", "0", "--gamma", "0",
            "--s-re", "2.5", "--samples", "10",
        )
        assert code == 2


class TestReproducibility:
    ARGS = (
        "eigencheck", "--ell", "0", "--epsilon", "1", "--gamma", "0.3",
        "--s-re", "2.5", "--samples", "20000", "--seed", "42",
    )

    def test_byte_identical_reports(self, capsys):
        code1, out1 = run_cli(capsys, *self.ARGS)
        code2, out2 = run_cli(capsys, *self.ARGS)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_worker_count_does_not_change_results(self, capsys):
        # the config echo legitimately differs; every estimate must not
        _, r1 = run_json(capsys, *self.ARGS, "--workers", "1")
        _, r4 = run_json(capsys, *self.ARGS, "--workers", "4")
        assert r1["results"] == r4["results"]
        assert r1["passed"] == r4["passed"]

    def test_seed_changes_estimates(self, capsys):
        _, r1 = run_json(capsys, *self.ARGS)
        _, r2 = run_json(capsys, *self.ARGS[:-1], "43")
        assert r1["results"][0]["estimate"] != r2["results"][0]["estimate"]

    def test_env_seed_default(self, capsys, monkeypatch):
        monkeypatch.setenv("HECKEBAXTER_SEED", "42")
        _, env_run = run_json(capsys, *self.ARGS[:-2])
        assert env_run["config"]["seed"] == 42

    def test_timing_opt_in(self, capsys):
        _, plain = run_json(capsys, *self.ARGS)
        assert "elapsed_seconds" not in plain
        _, timed = run_json(capsys, *self.ARGS, "--timing")
        assert timed["elapsed_seconds"] > 0


class TestCommands:
    def test_iwasawa_roundtrip(self, capsys):
        code, report = run_json(capsys, "iwasawa", "--matrix", "1,1,0,1")
        assert code == 0
        assert report["factors"]["a"] == pytest.approx([2**-0.5, 2**0.5])

    def test_iwasawa_requires_matrix(self, capsys):
        code, _ = run_cli(capsys, "iwasawa")
        assert code == 2

    def test_iwasawa_singular_matrix_rejected(self, capsys):
        code, _ = run_cli(capsys, "iwasawa", "--matrix", "1,1,1,1")
        assert code == 2

    def test_cartan(self, capsys):
        code, report = run_json(capsys, "cartan", "--matrix", "3,0,0,2")
        assert code == 0
        assert report["factors"]["a"] == pytest.approx([3.0, 2.0])

    def test_matrix_file(self, capsys, tmp_path):
        path = tmp_path / "m.txt"
        path.write_text("2 0\n0 1\n")
        code, report = run_json(capsys, "iwasawa", "--matrix-file", str(path))
        assert code == 0
        assert report["factors"]["a"] == pytest.approx([2.0, 1.0])

    def test_cartancheck(self, capsys):
        code, report = run_json(
            capsys, "cartancheck", "--ell", "0", "--epsilon", "1", "--gamma", "0.3",
            "--s-re", "2.5", "--samples", "50000", "--seed", "7",
        )
        assert code == 0
        assert report["results"][0]["z_score"] < 4.0

    def test_sphfun_identity_reference(self, capsys):
        code, report = run_json(
            capsys, "sphfun", "--ell", "1", "--epsilon", "10", "--gamma", "0.2,-0.5",
            "--samples", "50000", "--seed", "3",
        )
        assert code == 0
        assert report["results"][0]["reference"]["re"] == pytest.approx(0.5)

    def test_schur_single_case(self, capsys):
        code, report = run_json(
            capsys, "schur", "--n", "2", "--e1", "10", "--e1p", "10", "--e2", "10",
            "--e2p", "10", "--samples", "50000", "--seed", "5",
        )
        assert code == 0
        assert report["results"][0]["reference"]["re"] == pytest.approx(0.5)

    def test_schur_sweep(self, capsys):
        code, report = run_json(
            capsys, "schur", "--n", "2", "--sweep", "--samples", "20000", "--seed", "5"
        )
        assert code == 0
        assert len(report["results"]) == 10  # 9 grade pairs + 1 mixed-signature case

    def test_projector(self, capsys):
        code, report = run_json(
            capsys, "projector", "--n", "2", "--samples", "50000", "--seed", "6"
        )
        assert code == 0
        assert len(report["results"]) == 3

    def test_ramified(self, capsys):
        code, report = run_json(
            capsys, "ramified", "--n", "2", "--e1", "10", "--e1p", "01", "--e2", "01",
            "--e2p", "10", "--samples", "50000", "--seed", "8",
        )
        assert code == 0
        assert report["coefficient"] == pytest.approx(0.5)

    def test_fourier(self, capsys):
        code, report = run_json(capsys, "fourier", "--max-dim", "3")
        assert code == 0
        coeff_rows = [r for r in report["results"] if r["point"].startswith("coefficients")]
        assert len(coeff_rows) == 3

    def test_feynman(self, capsys):
        code, report = run_json(capsys, "feynman", "--n", "1")
        assert code == 0
        assert report["phase"]["re"] == pytest.approx(2**-0.5)

    def test_identities(self, capsys):
        code, report = run_json(capsys, "identities", "--trials", "5")
        assert code == 0
        assert all(r["pass"] for r in report["results"])


class TestSideOutputs:
    ARGS = (
        "eigencheck", "--ell", "0", "--epsilon", "0", "--gamma", "0.1",
        "--s-re", "2.5", "--samples", "20000", "--seed", "1",
    )

    def test_output_file_and_summary(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out = run_cli(capsys, *self.ARGS, "--output", str(path))
        assert code == 0
        assert "PASS" in out
        report = json.loads(path.read_text())
        assert report["passed"] is True

    def test_csv(self, capsys, tmp_path):
        path = tmp_path / "rows.csv"
        code, _ = run_cli(capsys, *self.ARGS, "--csv", str(path))
        assert code == 0
        lines = path.read_text().strip().splitlines()
        assert lines[0].startswith("point,estimate_re")
        assert len(lines) == 4  # header + three default points

    def test_figure(self, capsys, tmp_path):
        path = tmp_path / "fig.png"
        code, _ = run_cli(capsys, *self.ARGS, "--figure", str(path))
        assert code == 0
        assert path.stat().st_size > 0

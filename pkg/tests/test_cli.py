"""End-to-end tests for the command-line interface."""

import numpy as np
import pytest

from fgps import load_fdm
from fgps.cli import RunConfig, main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRunConfig:
    def test_defaults_validate(self):
        RunConfig().validate()

    def test_named_diagnostics(self):
        with pytest.raises(ValueError, match="problem"):
            RunConfig(problem=7).validate()
        with pytest.raises(ValueError, match="n1"):
            RunConfig(n1=5).validate()
        with pytest.raises(ValueError, match="lambda"):
            RunConfig(lam=-0.6).validate()
        with pytest.raises(ValueError, match="eval_grid"):
            RunConfig(eval_grid=1).validate()
        with pytest.raises(ValueError, match="alpha"):
            RunConfig(problem=1, alpha=1.0).validate()

    def test_resolved_orders_fixed(self):
        assert RunConfig(problem=3).resolved_orders() == (0.7, 0.8)
        with pytest.raises(ValueError, match="beta"):
            RunConfig(problem=1, beta=0.4).resolved_orders()
        with pytest.raises(ValueError, match="alpha"):
            RunConfig(problem=4).resolved_orders()


class TestSolveCommand:
    def test_deterministic_output(self, tmp_path, capsys):
        args = ["solve", "--problem", "1", "--ng", "60", "--eval-grid", "20"]
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        code1, stdout1, _ = _run(capsys, *args, "--out", str(out1))
        code2, stdout2, _ = _run(capsys, *args, "--out", str(out2))
        assert code1 == code2 == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert "max_err=" in stdout1 and "kappa=" in stdout1

    def test_csv_contents(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        code, stdout, _ = _run(
            capsys, "solve", "--problem", "1", "--ng", "200",
            "--eval-grid", "10", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "x,t,u_exact,u_approx,abs_err"
        assert len(lines) == 1 + 10 * 10
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert np.max(data[:, 4]) <= 1e-6
        np.testing.assert_allclose(data[:, 4],
                                   np.abs(data[:, 2] - data[:, 3]), atol=1e-20)

    def test_missing_output_dir(self, tmp_path, capsys):
        out = tmp_path / "nodir" / "run.csv"
        code, _, err = _run(
            capsys, "solve", "--problem", "1", "--ng", "40", "--out", str(out)
        )
        assert code == 1
        assert "error:" in err and "directory" in err
        assert not out.exists()

    def test_requires_out(self, capsys):
        code, _, err = _run(capsys, "solve", "--problem", "1", "--ng", "40")
        assert code == 1 and "out" in err

    def test_short_memory_warning(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        code, _, err = _run(
            capsys, "solve", "--problem", "1", "--ng", "40",
            "--L", "0.4", "--eval-grid", "5", "--out", str(out),
        )
        assert code == 0
        assert "warning" in err and "L=0.4" in err

    def test_order_one_rejected(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        code, _, err = _run(
            capsys, "solve", "--problem", "4", "--alpha", "1", "--beta", "1",
            "--ng", "40", "--out", str(out),
        )
        assert code == 1 and "strictly below 1" in err

    def test_problem4_uses_integer_limit_reference(self, tmp_path, capsys):
        out = tmp_path / "p4.csv"
        code, _, _ = _run(
            capsys, "solve", "--problem", "4", "--alpha", "0.9",
            "--beta", "0.9", "--ng", "40", "--eval-grid", "5",
            "--out", str(out),
        )
        assert code == 0
        # fractional problem 4 still reports against the integer-limit solution
        first = out.read_text().splitlines()[1]
        assert first.count(",") == 4
        assert first.split(",")[2] != ""

    def test_plot_writes_png(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        code, _, _ = _run(
            capsys, "solve", "--problem", "1", "--ng", "40",
            "--eval-grid", "8", "--out", str(out), "--plot",
        )
        assert code == 0
        png = tmp_path / "run.png"
        assert png.exists() and png.stat().st_size > 0

    def test_cache_dir_reuse_is_bit_identical(self, tmp_path, capsys):
        cache = tmp_path / "cache"
        cache.mkdir()
        args = [
            "solve", "--problem", "1", "--ng", "60", "--eval-grid", "6",
            "--cache-dir", str(cache),
        ]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert _run(capsys, *args, "--out", str(out1))[0] == 0
        cached = sorted(cache.iterdir())
        assert len(cached) == 1  # both axes share gamma = 1/2, T = 2 pi
        assert _run(capsys, *args, "--out", str(out2))[0] == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestConfigFile:
    def test_file_then_cli_precedence(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# benchmark run\n"
            "problem = 1\n"
            "ng = 40\n"
            "eval_grid = 5\n"
        )
        out = tmp_path / "run.csv"
        code, _, _ = _run(
            capsys, "solve", "--config", str(cfg), "--eval-grid", "7",
            "--out", str(out),
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 1 + 7 * 7

    def test_unknown_key_diagnostic(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("frobnicate = 3\n")
        code, _, err = _run(capsys, "solve", "--config", str(cfg), "--out", "x")
        assert code == 1 and "unknown key" in err and "frobnicate" in err

    def test_unparsable_value_diagnostic(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("ng = lots\n")
        code, _, err = _run(capsys, "solve", "--config", str(cfg), "--out", "x")
        assert code == 1 and "ng" in err and "lots" in err

    def test_missing_file(self, capsys):
        code, _, err = _run(capsys, "solve", "--config", "/no/such/file",
                            "--out", "x")
        assert code == 1 and "config" in err


class TestFdmCommand:
    def test_round_trip(self, tmp_path, capsys):
        out = tmp_path / "fdm.csv"
        code, stdout, _ = _run(
            capsys, "fdm", "--n", "8", "--period", "6.283185307179586",
            "--gamma", "0.5", "--L", "30", "--ng", "200", "--out", str(out),
        )
        assert code == 0
        assert "15 diagonal values" in stdout
        matrix, lam, n_g = load_fdm(out)
        assert (lam, n_g) == (0.0, 200)
        assert matrix.grid.n == 8 and matrix.gamma == 0.5
        assert matrix.first_row.size == 8

    def test_rejects_bad_gamma(self, tmp_path, capsys):
        code, _, err = _run(
            capsys, "fdm", "--n", "4", "--period", "6.28", "--gamma", "1.5",
            "--L", "30", "--out", str(tmp_path / "f.csv"),
        )
        assert code == 1 and "gamma" in err


class TestConvergenceCommand:
    def test_ng_sweep(self, tmp_path, capsys):
        out = tmp_path / "conv.csv"
        code, stdout, _ = _run(
            capsys, "convergence", "--problem", "1", "--sweep", "ng",
            "--values", "10,20,40", "--eval-grid", "10", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "param,value,max_err,rms_err,kappa,elapsed_ms"
        assert len(lines) == 4
        errs = [float(line.split(",")[2]) for line in lines[1:]]
        assert errs[0] > errs[2]
        assert stdout.count("max_err=") == 3

    def test_empty_values_rejected(self, tmp_path, capsys):
        code, _, err = _run(
            capsys, "convergence", "--problem", "1", "--sweep", "ng",
            "--values", ",", "--out", str(tmp_path / "c.csv"),
        )
        assert code == 1 and "empty" in err

    def test_alpha_beta_sweep_needs_problem4(self, tmp_path, capsys):
        code, _, err = _run(
            capsys, "convergence", "--problem", "1", "--sweep", "alpha-beta",
            "--values", "0.8,0.9", "--out", str(tmp_path / "c.csv"),
        )
        assert code == 1 and "problem 4" in err


class TestOracleCheckCommand:
    def test_battery_passes(self, capsys):
        code, stdout, _ = _run(
            capsys, "oracle-check", "--problem", "1", "--ng", "400"
        )
        assert code == 0
        assert stdout.count("pass") >= 3
        assert "informational" in stdout
        assert "FAIL" not in stdout

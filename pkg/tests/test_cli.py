"""CLI: routing, exit codes, output formats, and reproducibility."""

import json
from pathlib import Path

import pytest

from finphase.cli import dispatch, parse_config_file
from finphase.errors import InvalidConfig
from finphase.firms import EconomyConfig


def run_cli(*argv):
    return dispatch(list(argv))


class TestDispatch:
    def test_no_arguments_is_usage_error(self, capsys):
        assert run_cli() == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_subcommand_is_usage_error(self):
        assert run_cli("frobnicate") == 2

    def test_version_flag(self, capsys):
        assert run_cli("--version") == 0
        assert "finphase" in capsys.readouterr().out

    def test_domain_error_exits_one_with_message(self, capsys):
        code = run_cli("exchange", "--agents", "1", "--events", "10")
        assert code == 1
        err = capsys.readouterr().err
        assert err.startswith("error:")
        assert "Traceback" not in err

    def test_missing_file_exits_one(self, capsys):
        assert run_cli("sectors", "check", "/no/such/file.csv") == 1
        assert "error:" in capsys.readouterr().err


class TestMacroCommand:
    def test_headline_equilibrium_printed(self, capsys):
        code = run_cli(
            "macro", "--gL", "0.02", "--gP", "0.03", "--d", "0.10",
            "--lambda", "0.60",
        )
        assert code == 0
        assert "R* = 0.25" in capsys.readouterr().out

    def test_percent_display(self, capsys):
        run_cli(
            "macro", "--gL", "0.02", "--gP", "0.03", "--d", "0.10",
            "--lambda", "0.60", "--percent",
        )
        assert "R* = 25%" in capsys.readouterr().out

    def test_cagr_of_bundled_gold_stock(self, capsys):
        from importlib import resources

        ref = resources.files("finphase.data").joinpath("gold_stock.csv")
        with resources.as_file(ref) as path:
            code = run_cli("macro", "--cagr", str(path))
        assert code == 0
        out = capsys.readouterr().out
        rate = float(out.split("=")[1])
        assert 0.012 < rate < 0.015  # 617.9 -> 4569.9 Moz over 150 years

    def test_table_decomposition(self, tmp_path, capsys):
        table = tmp_path / "params.csv"
        table.write_text(
            "year,g_L,g_P,d,lambda\n"
            "1964,0.02,0.03,0.10,0.60\n"
            "2000,0.00,0.01,0.10,0.40\n"
        )
        out = tmp_path / "decomp.csv"
        assert run_cli("macro", "--table", str(table), "--out", str(out)) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "year,R_star,g_P_required_vs_reference"
        year, r_star, g_req = lines[1].split(",")
        assert float(r_star) == pytest.approx(0.25)
        assert float(g_req) == pytest.approx(0.03)
        # second row: required g_P to hold the 1964 R* with year-2000 inputs
        _, r2, g2 = lines[2].split(",")
        assert float(r2) == pytest.approx(0.275)
        assert float(g2) == pytest.approx(0.40 * 0.25 - 0.10)

    def test_trajectory_output(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = run_cli(
            "macro", "--gL", "0.02", "--gP", "0.03", "--d", "0.10",
            "--lambda", "0.60", "--r0", "0.05", "--dt", "0.01",
            "--steps", "2000", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "t,R"
        assert len(lines) == 2002


class TestExchangeCommand:
    def test_outputs_and_fit(self, tmp_path):
        code = run_cli(
            "exchange", "--agents", "200", "--initial-money", "50",
            "--events", "20000", "--outdir", str(tmp_path),
        )
        assert code == 0
        wealth = (tmp_path / "wealth.csv").read_text().splitlines()
        assert wealth[0] == "agent_id,money"
        assert len(wealth) == 201
        total = sum(int(line.split(",")[1]) for line in wealth[1:])
        assert total == 200 * 50
        fit = json.loads((tmp_path / "fit.json").read_text())
        assert fit["total_money"] == 10000
        assert set(fit) == {"temperature", "ks_statistic", "total_money"}


class TestFirmsCommand:
    def test_outputs(self, tmp_path):
        code = run_cli(
            "firms", "--firms", "20", "--workers", "100", "--steps", "3",
            "--outdir", str(tmp_path), "--manifest",
        )
        assert code == 0
        series = (tmp_path / "series.csv").read_text().splitlines()
        assert series[0] == (
            "t,entropy,rentier_fraction,std_x,bankruptcies,class_A,class_B,class_C"
        )
        assert len(series) == 5  # header + t=0..3
        for t in range(4):
            assert (tmp_path / f"phase_t{t}.csv").exists()
        run_info = json.loads((tmp_path / "run.json").read_text())
        assert run_info["final_conservation_residual"] == 0
        assert run_info["config"]["n_firms"] == 20
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["conservation_residuals"] == [0, 0, 0, 0]
        assert "series.csv" in manifest["outputs"]

    def test_config_file_with_override(self, tmp_path):
        cfg = tmp_path / "economy.cfg"
        cfg.write_text(
            "# demo config\n"
            "n_firms = 10\n"
            "n_workers = 50\n"
            "n_steps = 2\n"
            "seed = 7\n"
        )
        out = tmp_path / "out"
        code = run_cli(
            "firms", "--config", str(cfg), "--steps", "4", "--outdir", str(out)
        )
        assert code == 0
        run_info = json.loads((out / "run.json").read_text())
        assert run_info["config"]["n_firms"] == 10
        assert run_info["config"]["n_steps"] == 4  # CLI wins
        assert run_info["seed"] == 7

    def test_unknown_config_key_is_hard_error(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("n_firms = 10\nturbo = yes\n")
        with pytest.raises(InvalidConfig):
            parse_config_file(cfg, EconomyConfig)
        assert run_cli("firms", "--config", str(cfg), "--outdir", str(tmp_path)) == 1


class TestAnalyzeCommand:
    def test_metrics_from_phase_csv(self, tmp_path):
        rundir = tmp_path / "run"
        run_cli(
            "firms", "--firms", "30", "--workers", "150", "--steps", "4",
            "--outdir", str(rundir),
        )
        out = tmp_path / "metrics.json"
        hist = tmp_path / "hist.csv"
        code = run_cli(
            "analyze", str(rundir / "phase_t4.csv"),
            "--out", str(out), "--hist-out", str(hist),
        )
        assert code == 0
        metrics = json.loads(out.read_text())["phase_t4.csv"]
        assert metrics["points"] == 30
        assert 0.0 <= metrics["rentier_fraction"] <= 1.0
        assert hist.exists()


class TestInterestAndReserves:
    def test_interest_json(self, tmp_path, capsys):
        out = tmp_path / "rate.json"
        code = run_cli(
            "interest", "--capital", "5000000", "--reserves", "3000000",
            "--loan", "1000000", "--sigma", "1000000", "--out", str(out),
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["p_e"] == pytest.approx(0.0214002339, abs=1e-9)
        assert payload["expected_cost"] == pytest.approx(107001.17, abs=0.01)
        assert payload["min_rate"] == pytest.approx(0.107001, abs=1e-5)

    def test_reserves_csv(self, tmp_path):
        out = tmp_path / "path.csv"
        code = run_cli(
            "reserves", "--b0", "100", "--g", "15", "--tax", "3",
            "--sales", "2", "--dt", "1", "--steps", "5", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "t,B"
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert values == [100.0, 110.0, 120.0, 130.0, 140.0, 150.0]


class TestSectorsCommand:
    def test_check_bundled(self, capsys):
        assert run_cli("sectors", "check") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["residual"] == 0
        assert payload["is_balanced"] is True

    def test_what_if_bundled(self, capsys):
        code = run_cli("sectors", "what-if", "--sector", "Govt", "--value", "0")
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["required_offset"] == -122


class TestReproducibility:
    def _tree_bytes(self, root: Path):
        return {
            p.name: p.read_bytes() for p in sorted(root.iterdir()) if p.is_file()
        }

    @pytest.mark.parametrize(
        "argv",
        [
            ["exchange", "--agents", "300", "--events", "30000", "--seed", "5"],
            ["firms", "--firms", "25", "--workers", "100", "--steps", "4",
             "--seed", "5"],
            ["reserves", "--b0", "10", "--g", "3", "--tax", "1", "--sales", "1"],
        ],
    )
    def test_identical_runs_are_byte_identical(self, tmp_path, argv):
        dir_a = tmp_path / "a"
        dir_b = tmp_path / "b"
        assert run_cli(*argv, "--outdir", str(dir_a)) == 0
        assert run_cli(*argv, "--outdir", str(dir_b)) == 0
        assert self._tree_bytes(dir_a) == self._tree_bytes(dir_b)

    def test_firms_config_file_runs_byte_identical(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("n_firms = 40\nn_workers = 200\nn_steps = 4\n")
        dirs = []
        for label in ("a", "b"):
            outdir = tmp_path / label
            code = run_cli(
                "firms", "--config", str(cfg), "--seed", "7",
                "--outdir", str(outdir),
            )
            assert code == 0
            dirs.append(outdir)
        assert self._tree_bytes(dirs[0]) == self._tree_bytes(dirs[1])

    def test_different_seed_changes_outputs(self, tmp_path):
        dir_a = tmp_path / "a"
        dir_b = tmp_path / "b"
        run_cli("exchange", "--agents", "300", "--events", "30000",
                "--seed", "1", "--outdir", str(dir_a))
        run_cli("exchange", "--agents", "300", "--events", "30000",
                "--seed", "2", "--outdir", str(dir_b))
        assert (dir_a / "wealth.csv").read_bytes() != (dir_b / "wealth.csv").read_bytes()

    def test_outdir_env_var(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("FINPHASE_OUTDIR", str(tmp_path / "env_out"))
        assert run_cli("exchange", "--agents", "100", "--events", "1000") == 0
        assert (tmp_path / "env_out" / "wealth.csv").exists()

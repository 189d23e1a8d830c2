"""End-to-end tests of the command-line surface."""

from __future__ import annotations

import csv
import json

import pytest

from app.exceptions.config_validation_error import ConfigValidationError
from app.exceptions.handlers import ExitCode
from app.exceptions.usage_error import UsageError
from app.main import main, parse_args_and_config


def _rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


class TestParseArgsAndConfig:
    def test_reference_defaults(self):
        manifest = parse_args_and_config(["analytic"])

        assert manifest.command == "analytic"
        assert manifest.config.num_users == 3
        assert manifest.snr_db == [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]
        assert manifest.trials == 0

    def test_flags_override_config_file(self, tmp_path):
        config_path = tmp_path / "cfg.json"
        config_path.write_text(json.dumps({"num_subcarriers": 3, "rate_m": 0.2}))

        manifest = parse_args_and_config(
            ["simulate", "--config", str(config_path), "--k", "1", "--trials", "500"]
        )

        assert manifest.config.num_subcarriers == 1
        assert manifest.config.rate_m == 0.2
        assert manifest.trials == 500
        assert manifest.config_path == str(config_path)

    def test_decibel_keys_in_config_file(self, tmp_path):
        config_path = tmp_path / "cfg.json"
        config_path.write_text(json.dumps({"omega_i_total_db": -20}))

        manifest = parse_args_and_config(["analytic", "--config", str(config_path)])

        assert manifest.config.omega_i_total == pytest.approx(1e-2)

    def test_ri_flag_is_in_decibels(self):
        manifest = parse_args_and_config(["analytic", "--ri-db", "-25"])

        assert manifest.config.omega_i_total == pytest.approx(10**-2.5)

    def test_figure_shorthand(self):
        manifest = parse_args_and_config(["--figure", "4", "--trials", "100"])

        assert manifest.command == "figure"
        assert manifest.options["figure"] == 4
        assert manifest.options["snr_grid_explicit"] is False

    def test_sweep_options(self):
        manifest = parse_args_and_config(
            ["sweep", "--axis", "theta", "--grid", "0.1:0.4:0.1", "--fixed-snr-db", "20"]
        )

        assert manifest.options["axis"] == "theta"
        assert manifest.options["grid"] == [0.1, 0.2, 0.3, 0.4]
        assert manifest.options["fixed_snr_db"] == 20.0
        assert manifest.trials == 0

    def test_default_trials_for_simulation(self):
        manifest = parse_args_and_config(["validate"])

        assert manifest.trials == 1_000_000

    def test_invalid_config_raises(self):
        with pytest.raises(ConfigValidationError):
            parse_args_and_config(["analytic", "--a-m", "0.3", "--a-n", "0.7"])

    def test_bad_mode_raises(self):
        with pytest.raises(UsageError):
            parse_args_and_config(["analytic", "--mode", "q-psic"])

    def test_malformed_json_raises(self, tmp_path):
        config_path = tmp_path / "cfg.json"
        config_path.write_text("{not json")

        with pytest.raises(UsageError):
            parse_args_and_config(["analytic", "--config", str(config_path)])

    def test_negative_seed_raises(self):
        with pytest.raises(UsageError):
            parse_args_and_config(["simulate", "--seed", "-1"])

    def test_diversity_grid_follows_window(self):
        manifest = parse_args_and_config(["diversity", "--window", "30:40"])

        assert manifest.options["window_db"] == [30.0, 40.0]
        assert manifest.snr_db == [30.0, 32.5, 35.0, 37.5, 40.0]
        assert manifest.trials == 0

    @pytest.mark.parametrize("window", ["45:30", "30", "a:b"])
    def test_bad_diversity_window_raises(self, window):
        with pytest.raises(UsageError):
            parse_args_and_config(["diversity", "--window", window])

    def test_unknown_flag_exits_with_usage(self):
        with pytest.raises(SystemExit) as exc:
            parse_args_and_config(["analytic", "--bogus"])

        assert exc.value.code == ExitCode.USAGE


class TestMain:
    def test_analytic_run(self, out_dir):
        code = main(
            ["analytic", "--snr-db", "10:50:10", "--mode", "m", "--out", str(out_dir)]
        )

        assert code == ExitCode.OK
        rows = _rows(out_dir / "analytic.csv")
        assert [row["axis"] for row in rows] == ["10", "20", "30", "40", "50"]
        assert all(row["trials"] == "" for row in rows)
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["command"] == "analytic"
        assert len(manifest["files"]) == 3

    def test_simulation_is_reproducible(self, tmp_path):
        args = [
            "simulate", "--snr-db", "0,10", "--mode", "m", "--mode", "n-ipsic-exf",
            "--trials", "20000", "--chunk-size", "5000", "--seed", "9",
        ]

        assert main([*args, "--out", str(tmp_path / "a")]) == ExitCode.OK
        assert main([*args, "--out", str(tmp_path / "b"), "--workers", "2"]) == ExitCode.OK

        first = (tmp_path / "a" / "simulate.csv").read_bytes()
        second = (tmp_path / "b" / "simulate.csv").read_bytes()
        assert first == second
        assert _rows(tmp_path / "a" / "simulate.csv")[0]["trials"] == "20000"

    def test_validate_passes_for_every_mode(self, out_dir):
        code = main(
            [
                "validate", "--k", "1", "--r-m", "1", "--r-n", "1", "--ri-db", "-30",
                "--nodes", "100", "--snr-db", "5,10", "--trials", "100000",
                "--out", str(out_dir),
            ]
        )

        assert code == ExitCode.OK
        assert len(_rows(out_dir / "validate.csv")) == 2 * 9

    def test_validate_below_minimum_trials(self, out_dir):
        code = main(["validate", "--trials", "100", "--out", str(out_dir)])

        assert code == ExitCode.USAGE

    def test_sweep_run(self, out_dir):
        code = main(
            [
                "sweep", "--axis", "rate", "--grid", "0.1,0.5,1", "--mode", "m",
                "--metric", "throughput", "--out", str(out_dir),
            ]
        )

        assert code == ExitCode.OK
        assert len(_rows(out_dir / "sweep_rate_throughput.csv")) == 3

    def test_sweep_without_grid(self, out_dir):
        assert main(["sweep", "--axis", "theta", "--out", str(out_dir)]) == ExitCode.USAGE

    def test_figure_run(self, out_dir):
        code = main(
            ["figure", "7", "--snr-db", "0,20", "--trials", "0", "--out", str(out_dir)]
        )

        assert code == ExitCode.OK
        rows = _rows(out_dir / "figure_7.csv")
        assert len(rows) == 2 * 5

    def test_unknown_figure(self, out_dir):
        assert main(["figure", "12", "--out", str(out_dir)]) == ExitCode.USAGE

    def test_figure_list(self, capsys):
        assert main(["figure", "--list"]) == ExitCode.OK

        lines = [
            line for line in capsys.readouterr().out.splitlines() if line[:1].isdigit()
        ]
        assert [int(line.split()[0]) for line in lines] == list(range(2, 10))

    def test_figure_needs_number_or_list(self, out_dir):
        assert main(["figure", "--out", str(out_dir)]) == ExitCode.USAGE

    def test_negative_seed_exit_code(self, out_dir):
        code = main(["simulate", "--seed", "-1", "--out", str(out_dir)])

        assert code == ExitCode.USAGE

    def test_diversity_run(self, out_dir):
        code = main(
            [
                "diversity", "--k", "1", "--mode", "m", "--mode", "n-psic-exf",
                "--out", str(out_dir),
            ]
        )

        assert code == ExitCode.OK
        rows = _rows(out_dir / "diversity.csv")
        assert [row["mode"] for row in rows] == ["m", "n-psic-exf"]
        assert [row["expected_order"] for row in rows] == ["1", "2"]
        assert float(rows[0]["slope"]) == pytest.approx(1.0, abs=0.1)
        assert float(rows[1]["slope"]) == pytest.approx(2.0, abs=0.2)
        summary = json.loads((out_dir / "diversity.json").read_text())
        assert summary["window_db"] == [30.0, 45.0]

    def test_diversity_with_bad_window(self, out_dir):
        code = main(["diversity", "--window", "45:30", "--out", str(out_dir)])

        assert code == ExitCode.USAGE

    def test_invalid_config_exit_code(self, out_dir):
        code = main(["analytic", "--m", "2", "--n", "2", "--out", str(out_dir)])

        assert code == ExitCode.USAGE

    def test_missing_config_file(self, tmp_path):
        code = main(["analytic", "--config", str(tmp_path / "missing.json")])

        assert code == ExitCode.IO

"""Tests for uniqset CLI."""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest
from typer.testing import CliRunner

from uniqset.cli import EXIT_ERROR, EXIT_OK, EXIT_UNDECIDED, EXIT_WITNESS, app

runner = CliRunner()

WriteConfig = Callable[[str, Any], Path]

BINARY_CLASS = {"kind": "plainX", "nu": 2, "mu": 0, "n": 2, "bound": "1", "real_only": True}
RAW_SIGNAL = {"n": 4, "components": [{"re": "0"}, {"re": "3/5"}, {"re": "0"}, {"re": "3/10"}]}
SPARSE_SIGNAL = {
    "n": 4,
    "components": [{"re": "0"}, {"re": "9/16"}, {"re": "0"}, {"re": "17/64"}],
}


def _report(path: Path) -> dict[str, Any]:
    return json.loads(path.read_text())["report"]


def _signal_json(signal: dict[str, Any]) -> dict[str, Any]:
    """Fill in the imaginary parts the codec always writes."""
    return {
        "n": signal["n"],
        "components": [{"re": c["re"], "im": c.get("im", "0")} for c in signal["components"]],
    }


class TestCLIHelp:
    """Tests for CLI help output."""

    def test_main_help(self) -> None:
        """Test main help output."""
        result = runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        assert "uniqueness-set checks" in result.output

    @pytest.mark.parametrize(
        ("command", "text"),
        [
            ("encode", "marker encoding"),
            ("observe", "Compute a trace"),
            ("recover", "Recover a signal"),
            ("verify", "uniqueness check"),
            ("muscan", "rounding depths"),
            ("enumerate", "members of a finite class"),
        ],
    )
    def test_command_help(self, command: str, text: str) -> None:
        """Test each command's help text."""
        result = runner.invoke(app, [command, "--help"])
        assert result.exit_code == 0
        assert text in result.output


class TestCLICommands:
    """Tests for running commands on small configs."""

    def test_encode(self, write_config: WriteConfig, tmp_path: Path) -> None:
        """Test encoding writes the marked signal."""
        config = write_config("encode.json", {"signal": RAW_SIGNAL, "encoding": {"nu": 2, "M": 2}})
        out = tmp_path / "out.json"
        result = runner.invoke(app, ["encode", "-c", str(config), "-o", str(out)])
        assert result.exit_code == EXIT_OK
        report = _report(out)
        assert report["command"] == "encode"
        assert report["payload"]["signal"] == _signal_json(SPARSE_SIGNAL)
        assert report["payload"]["encoding"] == {"nu": 2, "M": 2, "n": 4}
        assert report["payload"]["distance"] == "3/80"
        assert "modulation" not in report["payload"]

    def test_encode_projects_into_bound(self, write_config: WriteConfig) -> None:
        """Test parts above the class bound are pulled below it before encoding."""
        config = write_config(
            "encode.json", {"signal": RAW_SIGNAL, "encoding": {"nu": 2, "M": 2}, "bound": "1/2"}
        )
        result = runner.invoke(app, ["encode", "-c", str(config), "--json"])
        assert result.exit_code == EXIT_OK
        payload = json.loads(result.output)["report"]["payload"]
        expected = {"n": 4, "components": [{"re": r} for r in ("0", "5/16", "0", "17/64")]}
        assert payload["signal"] == _signal_json(expected)

    def test_encode_with_modulation(self, write_config: WriteConfig) -> None:
        """Test a modulation adds the exact components of the modulated class member."""
        config = write_config(
            "encode.json",
            {
                "signal": {"n": 2, "components": [{"re": "3/5"}, {"re": "1/3"}]},
                "encoding": {"nu": 2, "M": 2},
                "modulation": {"d": 1, "nu1": 2, "mu1": 2},
            },
        )
        result = runner.invoke(app, ["encode", "-c", str(config), "--json"])
        assert result.exit_code == EXIT_OK
        payload = json.loads(result.output)["report"]["payload"]
        assert payload["signal"] == _signal_json(
            {"n": 2, "components": [{"re": "5/8"}, {"re": "5/16"}]}
        )
        assert payload["distance"] == "1/40"
        assert payload["modulation"]["side"] == "frequency-observed"
        assert payload["components"] == [
            {"terms": [{"exponent": "0", "coeff": {"order": 1, "coeffs": ["5/8"]}}]},
            {"terms": [{"exponent": "-3", "coeff": {"order": 1, "coeffs": ["-5/16"]}}]},
        ]

    def test_encode_rejects_bad_bound(self, write_config: WriteConfig) -> None:
        """Test a nonpositive class bound is a config error."""
        config = write_config(
            "encode.json", {"signal": RAW_SIGNAL, "encoding": {"nu": 2, "M": 2}, "bound": "0"}
        )
        result = runner.invoke(app, ["encode", "-c", str(config)])
        assert result.exit_code == EXIT_ERROR
        assert "bound must be positive" in result.output

    def test_observe_json(self, write_config: WriteConfig) -> None:
        """Test JSON output carries the envelope and the observation."""
        config = write_config(
            "observe.json", {"signal": SPARSE_SIGNAL, "domain": "fourier", "points": [0]}
        )
        result = runner.invoke(app, ["observe", "-c", str(config), "--json"])
        assert result.exit_code == EXIT_OK
        data = json.loads(result.output)
        assert "duration_seconds" in data["envelope"]
        observation = data["report"]["payload"]["observation"]
        assert observation["scale"] == "sqrt_n"
        assert observation["values"] == [{"re": "53/64", "im": "0"}]

    def test_recover_sparse(self, write_config: WriteConfig, tmp_path: Path) -> None:
        """Test sparse recovery from the first two sums."""
        observation = {
            "domain": "fourier",
            "n": 4,
            "scale": "sqrt_n",
            "points": [0, 1],
            "values": [{"re": "53/64"}, {"re": "0", "im": "-19/64"}],
        }
        write_config("observation.json", observation)
        config = write_config(
            "recover.json",
            {
                "mode": "sparse",
                "observation": "observation.json",
                "encoding": {"nu": 2, "M": 2},
                "sparsity": 2,
            },
        )
        out = tmp_path / "out.json"
        result = runner.invoke(app, ["recover", "-c", str(config), "-o", str(out)])
        assert result.exit_code == EXIT_OK
        payload = _report(out)["payload"]
        assert payload["result"]["certificate"] == "exact-match"
        assert payload["result"]["support"] == [1, 3]
        assert payload["result"]["signal"] == _signal_json(SPARSE_SIGNAL)

    def test_recover_undecided(self, write_config: WriteConfig, tmp_path: Path) -> None:
        """Test an ambiguous brute force search exits with the undecided code."""
        observation = {
            "domain": "fourier",
            "scale": "sqrt_n",
            "points": [0],
            "values": [{"re": "1"}],
        }
        config = write_config(
            "recover.json",
            {"mode": "bruteforce", "observation": observation, "class": BINARY_CLASS},
        )
        out = tmp_path / "out.json"
        result = runner.invoke(app, ["recover", "-c", str(config), "-o", str(out)])
        assert result.exit_code == EXIT_UNDECIDED
        assert len(_report(out)["payload"]["result"]["survivors"]) == 2

    def test_verify_collision(self, write_config: WriteConfig, tmp_path: Path) -> None:
        """Test a colliding trace exits with the witness code."""
        config = write_config(
            "verify.json",
            {
                "check": "uniqueness",
                "class": BINARY_CLASS,
                "trace": {"domain": "fourier", "points": [1]},
            },
        )
        out = tmp_path / "out.json"
        result = runner.invoke(app, ["verify", "-c", str(config), "-o", str(out)])
        assert result.exit_code == EXIT_WITNESS
        verdict = _report(out)["payload"]["verdict"]
        assert verdict["status"] == "collision"
        assert len(verdict["witness"]) == 2

    def test_verify_unique(self, write_config: WriteConfig) -> None:
        """Test a separating trace exits cleanly."""
        config = write_config(
            "verify.json",
            {
                "check": "uniqueness",
                "class": BINARY_CLASS,
                "trace": {"domain": "fourier", "points": [0, 1]},
            },
        )
        result = runner.invoke(app, ["verify", "-c", str(config)])
        assert result.exit_code == EXIT_OK
        assert "unique" in result.output

    def test_verify_window_sweep(self, write_config: WriteConfig) -> None:
        """Test a window sweep with all minors nonzero."""
        config = write_config("verify.json", {"check": "window", "n": 5, "m": 2})
        result = runner.invoke(app, ["verify", "-c", str(config), "--workers", "1"])
        assert result.exit_code == EXIT_OK

    def test_verify_composite_minors(self, write_config: WriteConfig, tmp_path: Path) -> None:
        """Test composite minor scans need the opt-in flag and find a zero minor."""
        config = write_config("verify.json", {"check": "minors", "n": 4, "m": 2})
        refused = runner.invoke(app, ["verify", "-c", str(config)])
        assert refused.exit_code == EXIT_ERROR
        assert "Error" in refused.output

        out = tmp_path / "out.json"
        result = runner.invoke(
            app, ["verify", "-c", str(config), "--allow-composite", "-o", str(out)]
        )
        assert result.exit_code == EXIT_WITNESS
        assert _report(out)["payload"]["report"]["zero_witness"] == {"U": [0, 2], "T": [0, 2]}

    def test_muscan_csv(self, write_config: WriteConfig, tmp_path: Path) -> None:
        """Test the robustness scan writes CSV rows."""
        config = write_config(
            "muscan.json",
            {
                "signal": SPARSE_SIGNAL,
                "encoding": {"nu": 2, "M": 2},
                "sparsity": 2,
                "delta": "1/8",
                "mus": [0, 4, 6],
            },
        )
        csv_path = tmp_path / "scan.csv"
        result = runner.invoke(app, ["muscan", "-c", str(config), "--csv", str(csv_path)])
        assert result.exit_code == EXIT_OK
        lines = csv_path.read_text().splitlines()
        assert lines[0].startswith("mu,max_error_num")
        assert lines[-1] == "6,0,1,true,true"

    def test_enumerate_count(self, write_config: WriteConfig) -> None:
        """Test counting class members."""
        config = write_config("enumerate.json", {"class": BINARY_CLASS})
        result = runner.invoke(app, ["enumerate", "-c", str(config), "--count"])
        assert result.exit_code == EXIT_OK
        assert "Cardinality: 4" in result.output

    def test_enumerate_limit(self, write_config: WriteConfig) -> None:
        """Test the limit override refuses large classes."""
        config = write_config("enumerate.json", {"class": BINARY_CLASS})
        result = runner.invoke(app, ["enumerate", "-c", str(config), "--limit", "2"])
        assert result.exit_code == EXIT_ERROR
        assert "limit is 2" in result.output


class TestCLIErrors:
    """Tests for CLI error handling."""

    def test_missing_config_file(self, tmp_path: Path) -> None:
        """Test a missing config file is a usage error."""
        result = runner.invoke(app, ["encode", "-c", str(tmp_path / "absent.json")])
        assert result.exit_code == 2

    def test_invalid_config(self, write_config: WriteConfig) -> None:
        """Test schema violations are reported as errors."""
        config = write_config("encode.json", {"signal": RAW_SIGNAL})
        result = runner.invoke(app, ["encode", "-c", str(config)])
        assert result.exit_code == EXIT_ERROR
        assert "missing key 'encoding'" in result.output

    def test_workers_from_environment(self, write_config: WriteConfig) -> None:
        """Test the worker count is read from UNIQSET_WORKERS."""
        config = write_config("verify.json", {"check": "window", "n": 3, "m": 1})
        result = runner.invoke(app, ["verify", "-c", str(config)], env={"UNIQSET_WORKERS": "0"})
        assert result.exit_code == 2

"""Tests for experiment config loading."""

from collections.abc import Callable
from fractions import Fraction
from pathlib import Path
from typing import Any

import pytest

from uniqset.config import (
    EncodeConfig,
    EnumerateConfig,
    MuScanConfig,
    ObserveConfig,
    RecoverConfig,
    VerifyConfig,
    config_digest,
    load_config,
)
from uniqset.errors import ConfigError
from uniqset.spectral import Domain, Side

WriteConfig = Callable[[str, Any], Path]

SIGNAL = {"n": 4, "components": [{"re": "0"}, {"re": "9/16"}, {"re": "0"}, {"re": "17/64"}]}
BINARY_CLASS = {"kind": "plainX", "nu": 2, "mu": 0, "n": 2, "bound": "1", "real_only": True}


class TestDigest:
    """Tests for config digests."""

    def test_key_order_does_not_matter(self) -> None:
        """Test the digest ignores key order."""
        assert config_digest({"a": 1, "b": [1, 2]}) == config_digest({"b": [1, 2], "a": 1})

    def test_values_matter(self) -> None:
        """Test the digest changes with values."""
        assert config_digest({"a": 1}) != config_digest({"a": 2})


class TestLoadConfig:
    """Tests for per-command config parsing."""

    def test_encode_with_embedded_signal(self, write_config: WriteConfig) -> None:
        """Test a signal file is read relative to the config."""
        write_config("signal.json", SIGNAL)
        path = write_config("encode.json", {"signal": "signal.json", "encoding": {"nu": 2, "M": 2}})
        cfg = load_config(path, EncodeConfig)
        assert cfg.signal.n == 4
        assert cfg.encoding.big_m == 2
        assert cfg.encoding.n == 4
        assert len(cfg.digest) == 64

    def test_missing_embedded_file(self, write_config: WriteConfig) -> None:
        """Test a missing signal file is a config error."""
        path = write_config("encode.json", {"signal": "absent.json", "encoding": {"nu": 2, "M": 2}})
        with pytest.raises(ConfigError, match="file not found"):
            load_config(path, EncodeConfig)

    def test_invalid_json(self, tmp_path: Path) -> None:
        """Test malformed JSON is a config error."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="invalid JSON"):
            load_config(path, EncodeConfig)

    def test_unknown_key(self, write_config: WriteConfig) -> None:
        """Test unknown config keys are reported."""
        path = write_config(
            "encode.json", {"signal": SIGNAL, "encoding": {"nu": 2, "M": 2}, "seed": 1}
        )
        with pytest.raises(ConfigError, match="unknown key 'seed'"):
            load_config(path, EncodeConfig)

    def test_observe_with_modulation(self, write_config: WriteConfig) -> None:
        """Test observe configs read a modulation."""
        path = write_config(
            "observe.json",
            {
                "signal": {"n": 2, "components": [{"re": "1/2"}, {"re": "0", "im": "1/2"}]},
                "domain": "fourier",
                "points": [0, 1],
                "modulation": {"d": 1, "nu1": 2, "mu1": 2},
            },
        )
        cfg = load_config(path, ObserveConfig)
        assert cfg.domain is Domain.FOURIER
        assert cfg.points == (0, 1)
        assert cfg.modulation is not None
        assert cfg.modulation.side is Side.FREQUENCY_OBSERVED
        assert cfg.precision is None

    def test_ztransform_points_are_rational(self, write_config: WriteConfig) -> None:
        """Test ztransform points are read as rationals."""
        path = write_config(
            "observe.json", {"signal": SIGNAL, "domain": "ztransform", "points": ["1/2", 3]}
        )
        cfg = load_config(path, ObserveConfig)
        assert cfg.points == (Fraction(1, 2), Fraction(3))

    def test_unknown_domain(self, write_config: WriteConfig) -> None:
        """Test an unknown domain is reported."""
        path = write_config("observe.json", {"signal": SIGNAL, "domain": "wavelet", "points": [0]})
        with pytest.raises(ConfigError, match="unknown domain"):
            load_config(path, ObserveConfig)

    def test_recover_sparse(self, write_config: WriteConfig) -> None:
        """Test sparse recover configs."""
        observation = {
            "domain": "fourier",
            "n": 4,
            "scale": "sqrt_n",
            "points": [0, 1],
            "values": [{"re": "53/64"}, {"re": "0", "im": "-19/64"}],
        }
        path = write_config(
            "recover.json",
            {
                "mode": "sparse",
                "observation": observation,
                "encoding": {"nu": 2, "M": 2},
                "sparsity": 2,
            },
        )
        cfg = load_config(path, RecoverConfig)
        assert cfg.mode == "sparse"
        assert cfg.encoding is not None
        assert cfg.encoding.n == 4
        assert cfg.sparsity == 2

    def test_recover_sparse_needs_encoding(self, write_config: WriteConfig) -> None:
        """Test sparse mode requires an encoding."""
        observation = {"domain": "fourier", "n": 4, "points": [0], "values": [{"re": "1"}]}
        path = write_config(
            "recover.json", {"mode": "sparse", "observation": observation, "sparsity": 1}
        )
        with pytest.raises(ConfigError, match="'encoding'"):
            load_config(path, RecoverConfig)

    def test_recover_unknown_mode(self, write_config: WriteConfig) -> None:
        """Test an unknown recover mode is reported."""
        observation = {"domain": "fourier", "points": [0], "values": [{"re": "1"}]}
        path = write_config("recover.json", {"mode": "guess", "observation": observation})
        with pytest.raises(ConfigError, match="unknown mode"):
            load_config(path, RecoverConfig)

    def test_verify_uniqueness(self, write_config: WriteConfig) -> None:
        """Test uniqueness verify configs."""
        path = write_config(
            "verify.json",
            {
                "check": "uniqueness",
                "class": BINARY_CLASS,
                "trace": {"domain": "fourier", "points": [1]},
                "limit": 100,
            },
        )
        cfg = load_config(path, VerifyConfig)
        assert cfg.class_spec is not None
        assert cfg.class_spec.real_only
        assert cfg.points == (1,)
        assert cfg.limit == 100

    def test_verify_minors(self, write_config: WriteConfig) -> None:
        """Test minor-scan verify configs."""
        path = write_config(
            "verify.json", {"check": "minors", "n": 4, "m": 2, "allow_composite": True}
        )
        cfg = load_config(path, VerifyConfig)
        assert (cfg.n, cfg.m, cfg.allow_composite) == (4, 2, True)

    def test_verify_flag_must_be_boolean(self, write_config: WriteConfig) -> None:
        """Test allow_composite must be a boolean."""
        path = write_config(
            "verify.json", {"check": "minors", "n": 4, "m": 2, "allow_composite": "yes"}
        )
        with pytest.raises(ConfigError, match="allow_composite"):
            load_config(path, VerifyConfig)

    def test_muscan(self, write_config: WriteConfig) -> None:
        """Test μ-scan configs."""
        path = write_config(
            "muscan.json",
            {
                "signal": SIGNAL,
                "encoding": {"nu": 2, "M": 2},
                "sparsity": 2,
                "delta": "1/8",
                "mus": [0, 4, 6],
            },
        )
        cfg = load_config(path, MuScanConfig)
        assert cfg.delta == Fraction(1, 8)
        assert cfg.mus == (0, 4, 6)

    def test_muscan_empty_depths(self, write_config: WriteConfig) -> None:
        """Test an empty depth list is reported."""
        path = write_config(
            "muscan.json",
            {
                "signal": SIGNAL,
                "encoding": {"nu": 2, "M": 2},
                "sparsity": 2,
                "delta": "1/8",
                "mus": [],
            },
        )
        with pytest.raises(ConfigError, match="mus"):
            load_config(path, MuScanConfig)

    def test_enumerate(self, write_config: WriteConfig) -> None:
        """Test enumerate configs."""
        path = write_config("enumerate.json", {"class": BINARY_CLASS, "count_only": True})
        cfg = load_config(path, EnumerateConfig)
        assert cfg.count_only
        assert cfg.class_spec.n == 2

"""Tests for configuration handling."""

import pytest
import yaml

from qratpp.config import Config
from qratpp.error_handler import ConfigError
from qratpp.redundancy import CheckMode


def test_defaults_enable_everything():
    config = Config()
    assert config.enabled_techniques() == ["qbce", "qat", "qrate", "ble", "qratu"]
    assert config.mode is CheckMode.QRAT_PLUS
    assert config.seed is None
    assert config.soft_time_limit is None
    assert config.max_outer_rounds is None
    assert not config.schedule_everything
    assert config.strict


@pytest.mark.parametrize("value, expected", [
    ("on", True), ("OFF", False), ("yes", True), ("0", False), (1, True), (False, False),
])
def test_boolean_values(value, expected):
    config = Config()
    config.set("qbce", value)
    assert config.qbce is expected


def test_option_names_accept_dashes_and_aliases():
    config = Config()
    config.set("max-rounds", "3")
    config.set("QRATE+", "off")
    config.set("schedule-everything", "on")
    assert config.max_outer_rounds == 3
    assert not config.qrate
    assert config.schedule_everything


def test_mode_values():
    config = Config()
    config.set("mode", "qrat")
    assert config.mode is CheckMode.QRAT_CLASSIC
    config.set("mode", "QRAT+")
    assert config.mode is CheckMode.QRAT_PLUS


def test_seed_and_limits_are_coerced():
    config = Config()
    config.update({"seed": "18446744073709551615", "soft_time_limit": "2.5"})
    assert config.seed == (1 << 64) - 1
    assert config.soft_time_limit == 2.5
    config.set("seed", "none")
    assert config.seed is None


@pytest.mark.parametrize("option, value", [
    ("qbce", "maybe"),
    ("mode", "qbf"),
    ("seed", "-1"),
    ("seed", str(1 << 64)),
    ("seed", True),
    ("soft_time_limit", "0"),
    ("soft_time_limit", "soon"),
    ("max_outer_rounds", "-2"),
    ("max_outer_rounds", "1.5"),
])
def test_invalid_values_are_rejected(option, value):
    config = Config()
    with pytest.raises(ConfigError):
        config.set(option, value)
    assert config == Config()


def test_unknown_option():
    config = Config()
    with pytest.raises(ConfigError) as info:
        config.set("turbo", "on")
    assert "unknown option 'turbo'" in str(info.value)
    assert config.get("turbo", "fallback") == "fallback"
    assert config.get("qat") is True


def test_from_file(tmp_path):
    path = tmp_path / "qratpp.yaml"
    path.write_text("qbce: off\nmode: qrat\nseed: 7\nmax-rounds: 2\n")
    config = Config.from_file(path)
    assert not config.qbce
    assert config.mode is CheckMode.QRAT_CLASSIC
    assert config.seed == 7
    assert config.max_outer_rounds == 2


def test_from_empty_file(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    assert Config.from_file(path) == Config()


@pytest.mark.parametrize("text", ["- qbce\n- qat\n", "qbce: [unclosed\n", "speed: 11\n"])
def test_from_bad_file(tmp_path, text):
    path = tmp_path / "bad.yaml"
    path.write_text(text)
    with pytest.raises(ConfigError):
        Config.from_file(path)


def test_show_config_round_trips_through_yaml(tmp_path):
    config = Config()
    config.update({"ble": False, "seed": 11, "mode": "qrat"})
    shown = config.show_config()
    data = yaml.safe_load(shown)
    assert data["mode"] == "qrat"
    assert data["ble"] is False
    path = tmp_path / "shown.yaml"
    path.write_text(shown)
    assert Config.from_file(path) == config

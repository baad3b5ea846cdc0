"""Configuration management for qratpp."""

import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Callable, ClassVar, Dict, Mapping, Optional, Union

import yaml

from .error_handler import ConfigError
from .redundancy import CheckMode

logger = logging.getLogger(__name__)

_TRUE = {"on", "true", "yes", "1"}
_FALSE = {"off", "false", "no", "0"}
_NONE = {"none", "off", ""}


def _to_bool(name: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, int) and value in (0, 1):
        return bool(value)
    if isinstance(value, str):
        lowered = value.strip().lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
    raise ConfigError(f"option '{name}' expects on/off, got {value!r}")


def _to_mode(name: str, value: Any) -> CheckMode:
    if isinstance(value, CheckMode):
        return value
    if isinstance(value, str):
        lowered = value.strip().lower()
        if lowered in ("qrat+", "qratplus", "plus"):
            return CheckMode.QRAT_PLUS
        if lowered in ("qrat", "classic"):
            return CheckMode.QRAT_CLASSIC
    raise ConfigError(f"option '{name}' expects 'qrat' or 'qrat+', got {value!r}")


def _is_none(value: Any) -> bool:
    return value is None or (isinstance(value, str) and value.strip().lower() in _NONE)


def _to_seed(name: str, value: Any) -> Optional[int]:
    if _is_none(value):
        return None
    try:
        if isinstance(value, bool):
            raise ValueError
        seed = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"option '{name}' expects an integer seed, got {value!r}") from None
    if not 0 <= seed < 1 << 64:
        raise ConfigError(f"option '{name}' must fit in 64 unsigned bits, got {seed}")
    return seed


def _to_seconds(name: str, value: Any) -> Optional[float]:
    if _is_none(value):
        return None
    try:
        if isinstance(value, bool):
            raise ValueError
        seconds = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"option '{name}' expects seconds, got {value!r}") from None
    if seconds <= 0:
        raise ConfigError(f"option '{name}' must be positive, got {seconds}")
    return seconds


def _to_rounds(name: str, value: Any) -> Optional[int]:
    if _is_none(value):
        return None
    try:
        if isinstance(value, bool):
            raise ValueError
        rounds = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"option '{name}' expects an integer, got {value!r}") from None
    if rounds <= 0:
        raise ConfigError(f"option '{name}' must be positive, got {rounds}")
    return rounds


@dataclass
class Config:
    """Pipeline options; the defaults apply every technique until saturation."""
    qbce: bool = True
    qat: bool = True
    qrate: bool = True
    ble: bool = True
    qratu: bool = True
    mode: CheckMode = CheckMode.QRAT_PLUS
    seed: Optional[int] = None
    soft_time_limit: Optional[float] = None
    max_outer_rounds: Optional[int] = None
    schedule_everything: bool = False
    strict: bool = True

    ALIASES: ClassVar[Dict[str, str]] = {
        "max_rounds": "max_outer_rounds",
        "qrate+": "qrate",
        "qratu+": "qratu",
    }
    COERCE: ClassVar[Dict[str, Callable[[str, Any], Any]]] = {
        "qbce": _to_bool,
        "qat": _to_bool,
        "qrate": _to_bool,
        "ble": _to_bool,
        "qratu": _to_bool,
        "mode": _to_mode,
        "seed": _to_seed,
        "soft_time_limit": _to_seconds,
        "max_outer_rounds": _to_rounds,
        "schedule_everything": _to_bool,
        "strict": _to_bool,
    }

    @classmethod
    def option_names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def _resolve(cls, key: str) -> str:
        name = key.strip().lower().replace("-", "_")
        name = cls.ALIASES.get(name, name)
        if name not in cls.COERCE:
            raise ConfigError(
                f"unknown option '{key}' (known: {', '.join(cls.option_names())})")
        return name

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "Config":
        """Load options from a YAML (or JSON) mapping."""
        with open(path, "r", encoding="utf-8") as f:
            try:
                data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError(f"invalid config file {path}: {e}") from None
        config = cls()
        if data is None:
            return config
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a mapping")
        config.update(data)
        logger.debug(f"loaded configuration from {path}")
        return config

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value."""
        try:
            return getattr(self, self._resolve(key))
        except ConfigError:
            return default

    def set(self, key: str, value: Any) -> None:
        """Set configuration value, validating name and value."""
        name = self._resolve(key)
        setattr(self, name, self.COERCE[name](name, value))

    def update(self, updates: Mapping[str, Any]) -> None:
        """Update multiple configuration values."""
        for key, value in updates.items():
            self.set(key, value)

    def enabled_techniques(self):
        return [name for name in ("qbce", "qat", "qrate", "ble", "qratu") if getattr(self, name)]

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["mode"] = self.mode.value
        return data

    def show_config(self) -> str:
        """Return formatted configuration."""
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

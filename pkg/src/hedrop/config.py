"""Run configuration: defaults, flat ``key = value`` files and command-line overrides."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .heprops import Isotope


class ConfigError(ValueError):
    """Malformed or unknown configuration entry."""


@dataclass(frozen=True)
class RunConfig:
    isotope: Isotope = Isotope.HE4
    radius: float = 1e-3  # m
    temperature: float = 0.3  # K
    wavelength: float = 1e-6  # m
    input_power: float = 10e-6  # W
    heat_load: float = 0.0  # W
    data_dir: Optional[Path] = None
    output: Optional[Path] = None
    format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "isotope", Isotope.parse(self.isotope))
        for name in ("radius", "temperature", "wavelength"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("input_power", "heat_load"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative, got {getattr(self, name)!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")

    def updated(self, **changes):
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)


_FLOAT_KEYS = {"radius", "temperature", "wavelength", "input_power", "heat_load"}
_PATH_KEYS = {"data_dir", "output"}
KNOWN_KEYS = {f.name for f in fields(RunConfig)}


def parse_config_text(text):
    """Parse ``key = value`` lines; ``#`` starts a comment. Unknown keys are rejected."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs a number, got {value!r}") from None
        elif key in _PATH_KEYS:
            values[key] = Path(value)
        else:
            values[key] = value
    return values


def load_config(path=None, **overrides):
    base = parse_config_text(Path(path).read_text(encoding="utf-8")) if path else {}
    base.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**base)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

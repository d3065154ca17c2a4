"""Run configuration: JSON (or YAML) files plus `key=value` overrides."""

from __future__ import annotations

import dataclasses
import json
import math
import numbers
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from bec_entanglement import DEFAULT_DELTA

__all__ = [
    "RunConfig",
    "ConfigParseError",
    "ConfigValidationError",
    "parse_config",
    "parse_overrides",
    "arange_inclusive",
    "parse_grid",
]


class ConfigParseError(ValueError):
    pass


class ConfigValidationError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    eta_a: float = 7.7  # units of ω_q^B
    eta_b: float = 7.7
    delta_a: float = DEFAULT_DELTA
    delta_b: float = DEFAULT_DELTA
    n_p: float = 10.0  # |α|² = |β|²
    theta_alpha: float = 0.0
    theta_beta: float = 0.0
    bs_t_mag: float = 1.0 / math.sqrt(2.0)
    phi: float = 0.0
    phi_prime: float = 0.0
    tau_start: float = 0.0
    tau_stop: float = 10.0
    tau_step: float = 0.05
    n_max: int = 2

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if field.name == "n_max":
                if (
                    isinstance(value, bool)
                    or not isinstance(value, numbers.Real)
                    or not float(value).is_integer()
                ):
                    raise ConfigValidationError(
                        f"n_max must be an integer, got {value!r}"
                    )
                object.__setattr__(self, "n_max", int(value))
                continue
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise ConfigValidationError(
                    f"{field.name} must be a number, got {value!r}"
                )
            if not math.isfinite(value):
                raise ConfigValidationError(
                    f"{field.name} must be finite, got {value!r}"
                )
            object.__setattr__(self, field.name, float(value))

        if self.tau_step <= 0:
            raise ConfigValidationError(
                f"tau_step must be positive, got {self.tau_step}"
            )
        if self.tau_start < 0:
            raise ConfigValidationError(f"tau_start must be >= 0, got {self.tau_start}")
        if self.tau_stop < self.tau_start:
            raise ConfigValidationError(
                f"tau_stop ({self.tau_stop}) must not be below "
                f"tau_start ({self.tau_start})"
            )
        if self.n_p < 0:
            raise ConfigValidationError(f"n_p must be >= 0, got {self.n_p}")
        if not 0.0 <= self.bs_t_mag <= 1.0:
            raise ConfigValidationError(
                f"bs_t_mag must lie in [0, 1], got {self.bs_t_mag}"
            )
        if self.n_max < 2:
            raise ConfigValidationError(f"n_max must be >= 2, got {self.n_max}")

    @property
    def theta_ab(self) -> float:
        return self.theta_alpha - self.theta_beta

    def tau_grid(self) -> np.ndarray:
        return arange_inclusive(self.tau_start, self.tau_stop, self.tau_step)

    def updated(self, **changes) -> RunConfig:
        return dataclasses.replace(self, **changes)


CONFIG_FIELDS = tuple(field.name for field in dataclasses.fields(RunConfig))


def arange_inclusive(start: float, stop: float, step: float) -> np.ndarray:
    """start, start+step, ... up to stop inclusive (within rounding)."""
    if step <= 0:
        raise ValueError(f"Grid step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"Grid stop {stop} is below start {start}")
    n_steps = int(math.floor((stop - start) / step + 1e-9))
    return start + step * np.arange(n_steps + 1)


def parse_grid(text: str) -> list[float]:
    """`start:stop:step` or a comma-separated list of values."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            return [float(x) for x in arange_inclusive(start, stop, step)]
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as err:
        raise ValueError(f"Invalid grid {text!r}: {err}") from err


def _load_file(path: Path) -> dict[str, Any]:
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    text = path.read_text()

    if path.suffix in (".yml", ".yaml"):
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as err:
            mark = getattr(err, "problem_mark", None)
            where = f"{mark.line + 1}:{mark.column + 1}" if mark else "?"
            raise ConfigParseError(f"{path}:{where}: malformed YAML ({err})") from err
        data = {} if data is None else data
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigParseError(
                f"{path}:{err.lineno}:{err.colno}: {err.msg}"
            ) from err

    if not isinstance(data, dict):
        raise ConfigParseError(
            f"{path}: expected an object of settings, got {type(data).__name__}"
        )
    return data


def parse_overrides(items: list[str] | None) -> dict[str, Any]:
    """`key=value` strings, values read as YAML scalars (so 3 -> int, 1.5 -> float)."""
    overrides = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigValidationError(
                f"Override {item!r} is not of the form key=value"
            )
        parsed = yaml.safe_load(value)
        if isinstance(parsed, str):
            # YAML 1.1 leaves exponent forms such as 1e-3 as strings
            try:
                parsed = float(parsed)
            except ValueError:
                pass
        overrides[key.strip()] = parsed
    return overrides


def parse_config(
    path: str | Path | None = None, overrides: dict[str, Any] | None = None
) -> RunConfig:
    """Build a RunConfig from an optional file and inline overrides.

    Args:
        path (str | Path, optional): JSON file, or .yml/.yaml file.
        overrides (dict, optional): values applied on top of the file.

    Returns:
        RunConfig: fully populated; absent fields take their defaults.
    """
    settings = _load_file(Path(path)) if path is not None else {}
    settings = {**settings, **(overrides or {})}

    unknown = sorted(set(settings) - set(CONFIG_FIELDS))
    if unknown:
        raise ConfigValidationError(f"Unknown config field(s): {', '.join(unknown)}")
    return RunConfig(**settings)

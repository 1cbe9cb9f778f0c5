"""Strict JSON experiment configs.

Every command has a fixed key schema: unknown keys are rejected, values are
range-checked on load, and error messages carry the offending field path.
``serialize_config`` emits canonical JSON that reparses to an equal config.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .bounds import BoundMode
from .classifier import Loss
from .experiment import SweepGrid
from .generator import as_ratio


class ConfigError(ValueError):
    """Invalid configuration: malformed JSON, unknown key, or bad value."""


_REQUIRED = object()
_MAX_SEED = (1 << 64) - 1


def _expect_int(value, name, minimum):
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{name}: must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{name}: must be >= {minimum}, got {value}")
    return value


def _expect_seed(value, name):
    seed = _expect_int(value, name, 0)
    if seed > _MAX_SEED:
        raise ConfigError(f"{name}: must fit in 64 bits, got {value}")
    return seed


def _expect_pos_float(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: must be a number, got {value!r}")
    out = float(value)
    if not (math.isfinite(out) and out > 0.0):
        raise ConfigError(f"{name}: must be positive and finite, got {value}")
    return out


def _expect_open01(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: must be a number, got {value!r}")
    out = float(value)
    if not 0.0 < out < 1.0:
        raise ConfigError(f"{name}: must lie in (0, 1), got {value}")
    return out


def _expect_ratio(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: must be a number, got {value!r}")
    try:
        return as_ratio(value)
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def _list_of(element_check):
    def check(value, name):
        if not isinstance(value, list) or not value:
            raise ConfigError(f"{name}: must be a nonempty list, got {value!r}")
        return tuple(element_check(v, f"{name}[{i}]") for i, v in enumerate(value))

    return check


def _expect_loss(value, name):
    try:
        return Loss(value)
    except ValueError:
        raise ConfigError(
            f"{name}: must be one of {[l.value for l in Loss]}, got {value!r}"
        ) from None


def _expect_mode(value, name):
    try:
        return BoundMode(value)
    except ValueError:
        raise ConfigError(
            f"{name}: must be one of {[m.value for m in BoundMode]}, got {value!r}"
        ) from None


def _expect_out(value, name):
    if value is None or isinstance(value, str):
        return value
    raise ConfigError(f"{name}: must be a string or null, got {value!r}")


def _expect_bool(value, name):
    if not isinstance(value, bool):
        raise ConfigError(f"{name}: must be a boolean, got {value!r}")
    return value


def _scalar_int_axis(minimum):
    def check(value, name):
        return (_expect_int(value, name, minimum),)

    return check


def _scalar_ratio_axis(value, name):
    return (_expect_ratio(value, name),)


_DIM_LIST = _list_of(lambda v, n: _expect_int(v, n, 1))
_COUNT_LIST = _list_of(lambda v, n: _expect_int(v, n, 1))
_RATIO_LIST = _list_of(_expect_ratio)

_SCHEMAS = {
    "sweep": {
        "d": (_DIM_LIST, _REQUIRED),
        "m_S": (_COUNT_LIST, _REQUIRED),
        "gamma": (_RATIO_LIST, _REQUIRED),
        "master_seed": (_expect_seed, _REQUIRED),
        "runs": (lambda v, n: _expect_int(v, n, 1), 1000),
        "sigma": (_expect_pos_float, 0.6),
        "n_test": (lambda v, n: _expect_int(v, n, 1), 10000),
        "loss": (_expect_loss, Loss.NLL),
        "out": (_expect_out, None),
        "workers": (lambda v, n: _expect_int(v, n, 1), 1),
    },
    "predict": {
        "d": (_DIM_LIST, _REQUIRED),
        "m_S": (_COUNT_LIST, _REQUIRED),
        "gamma": (_RATIO_LIST, _REQUIRED),
        "delta": (_expect_open01, 0.05),
        "mode": (_expect_mode, BoundMode.PREDICT),
        "min_cap": (_expect_bool, False),
        "out": (_expect_out, None),
    },
    "optimal-mg": {
        "d": (_scalar_int_axis(1), _REQUIRED),
        "m_S": (_scalar_int_axis(1), _REQUIRED),
        "gamma": (_RATIO_LIST, _REQUIRED),
        "delta": (_expect_open01, 0.05),
        "mode": (_expect_mode, BoundMode.PREDICT),
        "min_cap": (_expect_bool, False),
        "out": (_expect_out, None),
    },
    "kl-check": {
        "draws": (lambda v, n: _expect_int(v, n, 1), 50),
        "master_seed": (_expect_seed, 0),
        "out": (_expect_out, None),
    },
    "single-trial": {
        "d": (_scalar_int_axis(1), _REQUIRED),
        "m_S": (_scalar_int_axis(1), _REQUIRED),
        "gamma": (_scalar_ratio_axis, _REQUIRED),
        "master_seed": (_expect_seed, _REQUIRED),
        "trial_index": (lambda v, n: _expect_int(v, n, 0), 0),
        "sigma": (_expect_pos_float, 0.6),
        "n_test": (lambda v, n: _expect_int(v, n, 1), 10000),
        "loss": (_expect_loss, Loss.NLL),
    },
}

_FIELD_BY_KEY = {
    "d": "dims",
    "m_S": "real_counts",
    "gamma": "gammas",
    "master_seed": "master_seed",
    "runs": "runs",
    "sigma": "sigma",
    "n_test": "n_test",
    "loss": "loss",
    "mode": "mode",
    "delta": "delta",
    "out": "out",
    "workers": "workers",
    "trial_index": "trial_index",
    "draws": "draws",
    "min_cap": "min_cap",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated settings for one CLI command."""

    command: str
    dims: tuple[int, ...] | None = None
    real_counts: tuple[int, ...] | None = None
    gammas: tuple[Fraction, ...] | None = None
    master_seed: int = 0
    runs: int = 1000
    sigma: float = 0.6
    n_test: int = 10000
    loss: Loss = Loss.NLL
    mode: BoundMode = BoundMode.PREDICT
    delta: float = 0.05
    out: str | None = None
    workers: int = 1
    trial_index: int = 0
    draws: int = 50
    min_cap: bool = False

    @property
    def grid(self) -> SweepGrid:
        if self.dims is None or self.real_counts is None or self.gammas is None:
            raise ConfigError(f"command '{self.command}' carries no grid")
        return SweepGrid(dims=self.dims, real_counts=self.real_counts, gammas=self.gammas)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON config document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
    command = raw.get("command")
    if command is None:
        raise ConfigError("command: missing")
    if command not in _SCHEMAS:
        raise ConfigError(
            f"command: must be one of {sorted(_SCHEMAS)}, got {command!r}"
        )
    schema = _SCHEMAS[command]
    unknown = sorted(set(raw) - set(schema) - {"command"})
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown key for command '{command}'")
    fields: dict = {"command": command}
    for key, (check, default) in schema.items():
        if key in raw:
            fields[_FIELD_BY_KEY[key]] = check(raw[key], key)
        elif default is _REQUIRED:
            raise ConfigError(f"{key}: required for command '{command}'")
        else:
            fields[_FIELD_BY_KEY[key]] = default
    return ExperimentConfig(**fields)


def _gamma_json(gamma: Fraction):
    return int(gamma) if gamma.denominator == 1 else float(gamma)


def serialize_config(cfg: ExperimentConfig) -> str:
    """Canonical JSON for a config; reparsing yields an equal config."""
    if cfg.command not in _SCHEMAS:
        raise ConfigError(f"command: unknown command {cfg.command!r}")
    schema = _SCHEMAS[cfg.command]
    scalar_axes = cfg.command in ("optimal-mg", "single-trial")
    out: dict = {"command": cfg.command}
    for key in schema:
        value = getattr(cfg, _FIELD_BY_KEY[key])
        if key == "d" or key == "m_S":
            value = value[0] if scalar_axes else list(value)
        elif key == "gamma":
            if cfg.command == "single-trial":
                value = _gamma_json(value[0])
            else:
                value = [_gamma_json(g) for g in value]
        elif isinstance(value, (Loss, BoundMode)):
            value = value.value
        out[key] = value
    return json.dumps(out, sort_keys=True)


def load_config_file(path) -> ExperimentConfig:
    """Read and parse a config file, folding I/O problems into ConfigError."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)

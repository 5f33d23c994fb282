"""Flat experiment configuration: YAML file, then ``--set`` style overrides.

Every key is validated before any computation starts; unknown keys are
rejected so that typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Any, Callable

import yaml

from .belief import LambdaSchedule
from .evaluation.sweeps import lambda_grid
from .fosg import GameError
from .games import GAME_PARAMS

OUTPUT_ENV = "MIXBELIEF_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


def _lambda_list(value) -> list[float]:
    """``[0, 0.5, 1]``, ``"0,0.5,1"`` or a ``"start:stop:step"`` range."""
    if isinstance(value, (int, float)):
        out = [float(value)]
    elif isinstance(value, str) and ":" in value:
        start, stop, step = (float(x) for x in value.split(":"))
        if step <= 0 or stop < start:
            raise ConfigError(f"bad lambda range {value!r}")
        out = lambda_grid(start, stop, step)
    elif isinstance(value, str):
        out = [float(x) for x in value.split(",") if x.strip()]
    else:
        out = [float(x) for x in value]
    if not out or any(not 0.0 <= x <= 1.0 for x in out):
        raise ConfigError(f"lambdas must be non-empty and inside [0, 1]: {value!r}")
    return out


def _schedule(value) -> str:
    try:
        return str(LambdaSchedule.parse(value))
    except (GameError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad schedule {value!r}: {exc}") from None


def _positive(value) -> int:
    v = int(value)
    if v < 1 or v != float(value):
        raise ConfigError(f"expected a positive integer, got {value!r}")
    return v


def _seat(value) -> int:
    v = int(value)
    if v not in (0, 1) or v != float(value):
        raise ConfigError(f"seat must be 0 or 1, got {value!r}")
    return v


def _choice(*options: str) -> Callable[[Any], str]:
    def conv(value) -> str:
        if value not in options:
            raise ConfigError(f"expected one of {list(options)}, got {value!r}")
        return value

    return conv


def _unit(value) -> float:
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise ConfigError(f"expected a value in [0, 1], got {value!r}")
    return v


def _threshold(value) -> float:
    v = float(value)
    if not 0.0 < v <= 1.0:
        raise ConfigError(f"threshold must lie in (0, 1], got {value!r}")
    return v


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    if str(value).lower() in ("1", "true", "yes"):
        return True
    if str(value).lower() in ("0", "false", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def _optional_str(value):
    return None if value is None else str(value)


# key -> (converter, default)
FIELDS: dict[str, tuple[Callable[[Any], Any], Any]] = {
    "game": (_choice(*GAME_PARAMS), "liars_dice"),
    "dice": (_positive, None),
    "faces": (_positive, None),
    "cards": (_positive, None),
    "hidden": (_positive, None),
    "suits": (_positive, None),
    "algorithm": (_choice("pimc", "ismcts"), "pimc"),
    "lambdas": (_lambda_list, [0.0, 0.5, 1.0]),
    "lambda0s": (_lambda_list, [0.0, 1.0]),
    "lambda1s": (_lambda_list, [0.0, 1.0]),
    "schedule": (_schedule, "0.0"),
    "budget": (_positive, 1000),
    "batch_size": (_positive, 10),
    "threshold": (_threshold, 0.01),
    "max_batches": (_positive, 200),
    "seat": (_seat, 0),
    "seed": (int, 0),
    "workers": (_positive, 1),
    "n_games": (_positive, 1000),
    "opponent": (_choice("same", "pimc", "ismcts"), "same"),
    "opponent_lambda": (_unit, 0.0),
    "draw_weight": (_unit, 0.5),
    "first_only": (_bool, False),
    "output": (_optional_str, None),
    "output_dir": (_optional_str, None),
}


@dataclass
class ExperimentConfig:
    values: dict[str, Any]

    def __getattr__(self, name: str) -> Any:
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None

    def game_params(self) -> dict[str, Any]:
        return {k: self.values[k] for k in GAME_PARAMS[self.values["game"]] if self.values.get(k) is not None}

    def echo(self) -> dict[str, Any]:
        return dict(self.values)

    @property
    def outdir(self) -> str:
        return self.values["output_dir"] or os.environ.get(OUTPUT_ENV) or "results"


def read_config_file(path) -> dict[str, Any]:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
        raise ConfigError("config must be a flat mapping of key: value")
    return data


def parse_assignment(text: str) -> tuple[str, Any]:
    key, sep, value = text.partition("=")
    if not sep:
        raise ConfigError(f"override {text!r} is not key=value")
    return key.strip(), yaml.safe_load(value)


def build_config(*layers: dict[str, Any]) -> ExperimentConfig:
    """Merge layers left to right (later wins), then validate every key."""
    raw: dict[str, Any] = {}
    for layer in layers:
        raw.update({k: v for k, v in layer.items() if v is not None})
    unknown = sorted(set(raw) - set(FIELDS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    values = {}
    for key, (conv, default) in FIELDS.items():
        if key in raw:
            try:
                values[key] = conv(raw[key])
            except ConfigError as exc:
                raise ConfigError(f"{key}: {exc}") from None
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key}: {exc}") from None
        else:
            values[key] = default
    game = values["game"]
    stray = [k for k in ("dice", "faces", "cards", "hidden", "suits") if values[k] is not None and k not in GAME_PARAMS[game]]
    if stray:
        raise ConfigError(f"parameters {stray} do not apply to {game}")
    return ExperimentConfig(values)

"""YAML run configuration: presets, user files, and schema validation.

Layering is preset < config file < command-line flags. Presets may name a
parent with ``extends``. Validation errors carry the dotted field path.
"""
from __future__ import annotations

import copy
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .benchmark import SigmoidFit
from .discrimination import SprtConfig
from .inference import InferenceConfig
from .laws import GrowthRates, ScalingLaw, schedule_from_pairs
from .trajectory import ScenarioConfig

DEFAULT_PRESET = "defaults"

_NUM = (int, float)
SCHEMA = {
    "law": {"a_coeff": _NUM, "alpha": _NUM, "l_irreducible": _NUM},
    "rates": {"g_h": _NUM, "g_alg": _NUM, "g_i": _NUM, "g_inf": _NUM,
              "flop_per_dollar_t0": _NUM, "usd_per_token_budget": _NUM},
    "scenario": {"meek_budget": _NUM, "sota_budget_t0": _NUM, "horizon": _NUM,
                 "step": _NUM, "schedule": (list, type(None))},
    "inference": {"params_per_flop_t0": _NUM, "chinchilla_kappa": _NUM, "include_alg": bool},
    "sprt": {"alpha_err": _NUM, "beta_err": _NUM, "slowdown": _NUM},
    "sigmoid": {"amplitude": _NUM, "k": _NUM, "x0": _NUM, "b": _NUM},
    "output": {"format": str, "plot": (str, type(None))},
}


class ConfigError(ValueError):
    pass


def preset_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get("MEEK_PRESET_DIR")
    if env:
        dirs.append(Path(env))
    dirs.append(Path(str(resources.files("meek") / "presets")))
    return dirs


def available_presets() -> list[str]:
    names = set()
    for d in preset_dirs():
        if d.is_dir():
            names.update(p.stem for p in d.glob("*.yaml"))
    return sorted(names)


def _read_yaml(path: Path) -> dict:
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _resolve(data: dict, seen: tuple[str, ...]) -> dict:
    parent = data.pop("extends", None)
    if parent is None:
        return data
    return merge(load_preset(parent, seen), data)


def load_preset(name: str, _seen: tuple[str, ...] = ()) -> dict:
    if name in _seen:
        raise ConfigError(f"preset cycle: {' -> '.join(_seen + (name,))}")
    for d in preset_dirs():
        path = d / f"{name}.yaml"
        if path.is_file():
            return _resolve(_read_yaml(path), _seen + (name,))
    raise ConfigError(f"unknown preset {name!r}; available: {', '.join(available_presets())}")


def load_file(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return _resolve(_read_yaml(path), ())


def validate(data: dict) -> None:
    for section, body in data.items():
        if section not in SCHEMA:
            raise ConfigError(f"{section}: unknown section")
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(f"{section}: must be a mapping")
        for key, value in body.items():
            if key not in SCHEMA[section]:
                raise ConfigError(f"{section}.{key}: unknown field")
            types = SCHEMA[section][key]
            if isinstance(value, bool) and types is _NUM:
                raise ConfigError(f"{section}.{key}: expected a number, got {value!r}")
            if not isinstance(value, types):
                raise ConfigError(f"{section}.{key}: wrong type {type(value).__name__}")
            if types is _NUM and not math.isfinite(value):
                raise ConfigError(f"{section}.{key}: must be finite")


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig
    inference: InferenceConfig
    sprt: SprtConfig
    sigmoid: SigmoidFit | None
    format: str = "csv"
    plot: str | None = None


def _build(section: str, factory, kwargs: dict):
    try:
        return factory(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{section}: {exc}") from None


def build(data: dict) -> RunConfig:
    validate(data)
    get = lambda s: dict(data.get(s) or {})  # noqa: E731
    law = _build("law", ScalingLaw, get("law"))
    rates = _build("rates", GrowthRates, get("rates"))
    sc = get("scenario")
    pairs = sc.pop("schedule", None)
    schedule = None
    if pairs is not None:
        try:
            schedule = schedule_from_pairs(pairs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"scenario.schedule: {exc}") from None
    scenario = _build("scenario", ScenarioConfig,
                      dict(law=law, rates=rates, sota_schedule=schedule, **sc))
    inference = _build("inference", InferenceConfig, dict(sota=scenario, **get("inference")))
    sprt = _build("sprt", SprtConfig, get("sprt"))
    sig = get("sigmoid")
    sigmoid = _build("sigmoid", SigmoidFit, sig) if sig else None
    out = get("output")
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: must be csv or json, got {fmt!r}")
    return RunConfig(scenario, inference, sprt, sigmoid, fmt, out.get("plot"))


def load(preset: str | None = None, path=None, overrides: dict | None = None) -> RunConfig:
    data = load_preset(preset or DEFAULT_PRESET)
    if path is not None:
        data = merge(data, load_file(path))
    if overrides:
        data = merge(data, overrides)
    return build(data)

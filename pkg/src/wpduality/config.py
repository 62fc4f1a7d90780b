"""Scenario configuration: YAML file plus ``--set key=value`` overrides.

All angles in the file are degrees; they are converted to radians when
the physics objects are built.  See ``docs/config.md`` for the schema.
"""
from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import polarization as pol
from .interferometer import InterferometerConfig
from .montecarlo import NoiseModel

DEFAULTS: dict[str, Any] = {
    "seed": None,
    "out": None,
    "input": {"kind": "pure", "angle": 90.0, "purity": 1.0, "theta_in": 45.0},
    "marker": {"kind": "hwp", "angle": 45.0, "path2_angle": 0.0, "matrix": None},
    "interferometer": {"w1": 0.5, "v0": 1.0, "residual1": 0.0, "residual2": 0.0},
    "sweep": {"axis": None, "start": None, "stop": None, "step": None, "values": None},
    "analysis": {"basis": "optimal"},
    "noise": {
        "background_d1": 250.0,
        "background_d2": 250.0,
        "efficiency_ratio": 1.11,
        "max_signal_rate": 50_000.0,
        "integration_time": 10.0,
        "phase_step": 0.5,
        "repetitions": 20,
    },
    "poincare": {"kind": "auto", "samples": 360},
}

DEFAULT_GRIDS = {
    "theta_hwp": (0.0, 90.0, 1.0),
    "analyzer": (0.0, 180.0, 1.0),
    "phi": (0.0, 359.5, 0.5),
    "purity": (0.0, 1.0, 0.05),
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _merge(base: dict, extra: dict, prefix: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        path = f"{prefix}{key}"
        if key not in base:
            raise ConfigError(path, "unknown key")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(path, "expected a mapping")
            out[key] = _merge(base[key], value, path + ".")
        else:
            out[key] = value
    return out


def apply_override(raw: dict, assignment: str) -> None:
    """Apply one ``a.b.c=value`` override in place; value is parsed as YAML."""
    if "=" not in assignment:
        raise ConfigError(assignment, "override must look like KEY=VALUE")
    key, text = assignment.split("=", 1)
    parts = key.strip().split(".")
    node = raw
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(key, "cannot descend into a scalar")
    node[parts[-1]] = yaml.safe_load(text)


def load_raw(path: str | Path | None, overrides=(), seed: int | None = None) -> dict:
    raw: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        try:
            raw = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError("--config", f"not valid YAML ({exc.__class__.__name__})") from None
        if not isinstance(raw, dict):
            raise ConfigError("--config", "top level must be a mapping")
    for item in overrides:
        apply_override(raw, item)
    if seed is not None:
        raw["seed"] = seed
    return _merge(DEFAULTS, raw)


def _number(cfg: dict, path: str, lo=-np.inf, hi=np.inf, *, integer=False) -> float:
    node: Any = cfg
    for p in path.split("."):
        node = node[p]
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ConfigError(path, f"expected a number, got {node!r}")
    if not np.isfinite(node):
        raise ConfigError(path, "must be finite")
    if integer and int(node) != node:
        raise ConfigError(path, "expected an integer")
    if not lo <= node <= hi:
        raise ConfigError(path, f"must lie in [{lo}, {hi}], got {node}")
    return int(node) if integer else float(node)


@dataclass(frozen=True)
class ScenarioConfig:
    raw: dict

    @property
    def digest(self) -> str:
        text = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @property
    def seed(self) -> int | None:
        s = self.raw["seed"]
        if s is None:
            return None
        return _number(self.raw, "seed", 0, 2**64 - 1, integer=True)

    def input_state(self, purity: float | None = None) -> pol.PolState:
        sec = self.raw["input"]
        kind = sec["kind"]
        angle = np.radians(_number(self.raw, "input.angle"))
        if kind == "pure":
            return pol.PolState.pure(pol.linear(angle))
        if kind == "partial":
            s = _number(self.raw, "input.purity", 0, 1) if purity is None else purity
            return pol.partial_mix(pol.linear(angle), s)
        if kind == "mixed":
            return pol.PolState.mixed()
        if kind == "tunable":
            return pol.tunable_source(np.radians(_number(self.raw, "input.theta_in")))
        raise ConfigError("input.kind", f"expected pure|partial|mixed|tunable, got {kind!r}")

    @property
    def input_angle(self) -> float:
        return float(np.radians(_number(self.raw, "input.angle")))

    def marker(self, angle_deg: float | None = None) -> tuple[pol.ElementUnitary, pol.ElementUnitary]:
        """Path-1 and path-2 elements; ``angle_deg`` overrides the marker angle."""
        sec = self.raw["marker"]
        kind = sec["kind"]
        a = _number(self.raw, "marker.angle") if angle_deg is None else angle_deg
        if kind == "hwp":
            return pol.hwp(np.radians(a)), pol.identity()
        if kind == "rotator":
            a2 = _number(self.raw, "marker.path2_angle")
            return pol.rotator(np.radians(a)), pol.rotator(np.radians(a2))
        if kind == "custom":
            m = sec["matrix"]
            try:
                mat = np.array([[complex(x) for x in row] for row in m])
                return pol.ElementUnitary(mat), pol.identity()
            except (TypeError, ValueError) as exc:
                raise ConfigError("marker.matrix", str(exc)) from None
        raise ConfigError("marker.kind", f"expected hwp|rotator|custom, got {kind!r}")

    def interferometer(self, angle_deg: float | None = None) -> InterferometerConfig:
        w1 = _number(self.raw, "interferometer.w1", 0, 1)
        if not 0 < w1 < 1:
            raise ConfigError("interferometer.w1", "must lie strictly between 0 and 1")
        v0 = _number(self.raw, "interferometer.v0", 0, 1)
        res = []
        for i in (1, 2):
            r = _number(self.raw, f"interferometer.residual{i}")
            res.append(pol.rotator(np.radians(r)) if r else None)
        p1, p2 = self.marker(angle_deg)
        return InterferometerConfig(w1=w1, path1=p1, path2=p2, v0=v0, residual1=res[0], residual2=res[1])

    def sweep(self, allowed: tuple[str, ...]) -> tuple[str, np.ndarray]:
        """Sweep axis and its grid (file units, i.e. degrees for angles)."""
        sec = self.raw["sweep"]
        axis = sec["axis"] or allowed[0]
        if axis not in allowed:
            raise ConfigError("sweep.axis", f"expected one of {'|'.join(allowed)}, got {axis!r}")
        if sec["values"] is not None:
            try:
                grid = np.array(sec["values"], dtype=float)
            except (TypeError, ValueError):
                raise ConfigError("sweep.values", "expected a list of numbers") from None
            if grid.ndim != 1 or grid.size == 0:
                raise ConfigError("sweep.values", "expected a nonempty list")
        else:
            d_start, d_stop, d_step = DEFAULT_GRIDS[axis]
            start = d_start if sec["start"] is None else _number(self.raw, "sweep.start")
            stop = d_stop if sec["stop"] is None else _number(self.raw, "sweep.stop")
            step = d_step if sec["step"] is None else _number(self.raw, "sweep.step")
            if step <= 0:
                raise ConfigError("sweep.step", "must be positive")
            if stop < start:
                raise ConfigError("sweep.stop", "must not be below sweep.start")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            grid = start + step * np.arange(n)
        if not np.all(np.isfinite(grid)):
            raise ConfigError("sweep.values", "must be finite")
        if np.any(np.diff(grid) <= 0):
            raise ConfigError("sweep.values", "grid must be strictly increasing")
        if axis == "purity" and (grid.min() < 0 or grid.max() > 1):
            raise ConfigError("sweep.values", "purity grid must lie in [0, 1]")
        return axis, grid

    def noise(self) -> NoiseModel:
        seed = self.seed
        if seed is None:
            raise ConfigError("seed", "montecarlo needs a seed (--seed N or 'seed:' in the config)")
        try:
            return NoiseModel(
                background_d1=_number(self.raw, "noise.background_d1", 0),
                background_d2=_number(self.raw, "noise.background_d2", 0),
                efficiency_ratio=_number(self.raw, "noise.efficiency_ratio", 0),
                max_signal_rate=_number(self.raw, "noise.max_signal_rate", 0),
                integration_time=_number(self.raw, "noise.integration_time", 0),
                rng_seed=seed,
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("noise", str(exc)) from None

    @property
    def repetitions(self) -> int:
        return _number(self.raw, "noise.repetitions", 1, integer=True)

    @property
    def phases(self) -> np.ndarray:
        step = _number(self.raw, "noise.phase_step", 0)
        if step <= 0 or 360.0 / step < 6:
            raise ConfigError("noise.phase_step", "must be positive and give at least 6 points")
        n = int(round(360.0 / step))
        return np.arange(n) * 2 * np.pi / n


def load_config(path=None, overrides=(), seed: int | None = None) -> ScenarioConfig:
    return ScenarioConfig(load_raw(path, overrides, seed))

"""Run configuration: flat ``dotted.key = <JSON value>`` text files.

Example::

    # steady-state map over the two one-photon detunings
    params.g = 10
    params.omega12 = 0.1
    params.delta = 0
    sweep.delta12.min = -10
    sweep.delta12.max = 10
    sweep.delta12.count = 41
    sweep.delta23.min = -10
    sweep.delta23.max = 10
    sweep.delta23.count = 41
    outputs = ["n_photon", "p33"]

Sweep axes keep the order in which they first appear in the file.
"""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import CONVENTIONS, SystemParams
from .solvers import TimeGrid


class ConfigError(ValueError):
    pass


AXIS_NAMES = ("delta12", "delta23", "omega12", "omega23", "g")
SCALES = ("linear", "log")
BASE_OUTPUTS = (
    "bright_population",
    "concurrence",
    "concurrence_trace",
    "g2_zero",
    "n_photon",
    "p33",
    "ratio",
)
_DARK_OUTPUT = re.compile(r"dark_p(\d+)$")

_PARAM_FIELDS = {f.name for f in dataclasses.fields(SystemParams)} - {"n_max"}
_TOP_KEYS = {"outputs", "out_path", "n_max", "strong_regime", "dark_states"}


def is_valid_output(name: str) -> bool:
    return name in BASE_OUTPUTS or _DARK_OUTPUT.match(name) is not None


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int
    scale: str = "linear"

    def validate(self, allowed=AXIS_NAMES) -> None:
        if self.name not in allowed:
            raise ConfigError(f"unknown sweep axis {self.name!r}; expected one of {allowed}")
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 2:
            raise ConfigError(f"axis {self.name}: count must be an integer >= 2")
        if self.scale not in SCALES:
            raise ConfigError(f"axis {self.name}: scale must be 'linear' or 'log'")
        if not self.max > self.min:
            raise ConfigError(f"axis {self.name}: max must exceed min")
        if self.scale == "log" and self.min <= 0:
            raise ConfigError(f"axis {self.name}: log scale needs min > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)

    def as_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "count": self.count, "scale": self.scale}


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams = field(default_factory=SystemParams)
    axes: tuple[Axis, ...] = ()
    outputs: tuple[str, ...] = ("n_photon", "p33")
    out_path: str | None = None
    n_max: int | None = None  # None = auto truncation
    time: TimeGrid | None = None
    initial: tuple[int, int] = (1, 0)
    strong_regime: bool = False
    dark_states: int = 3
    theta: Axis | None = None

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def resolved_items(self) -> list[tuple[str, object]]:
        """Flat ``(key, value)`` pairs describing the run, in a fixed order."""
        items: list[tuple[str, object]] = []
        for f in dataclasses.fields(SystemParams):
            if f.name == "n_max":
                continue
            value = getattr(self.params, f.name)
            items.append((f"params.{f.name}", "auto" if value is None and f.name == "delta" else value))
        items.append(("n_max", "auto" if self.n_max is None else self.n_max))
        for ax in self.axes:
            items.extend((f"sweep.{ax.name}.{k}", v) for k, v in ax.as_dict().items())
        items.append(("outputs", sorted(self.outputs)))
        if self.time is not None:
            items += [("time.t0", self.time.t0), ("time.t1", self.time.t1), ("time.n_steps", self.time.n_steps)]
            items += [("initial.level", self.initial[0]), ("initial.photons", self.initial[1])]
            items += [("strong_regime", self.strong_regime), ("dark_states", self.dark_states)]
        if self.theta is not None:
            items.extend((f"theta.{k}", v) for k, v in self.theta.as_dict().items())
        return items


def _parse_value(raw: str, key: str, lineno: int):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {lineno}: value for {key!r} is not valid JSON: {raw!r}") from exc


def parse_pairs(text: str) -> list[tuple[str, object]]:
    pairs = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        pairs.append((key, _parse_value(raw, key, lineno)))
    return pairs


def _number(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return value


def _n_max(value, key="n_max"):
    if value == "auto" or value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{key} must be 'auto' or an integer >= 1, got {value!r}")
    return value


def _axis_from(name: str, spec: dict, allowed) -> Axis:
    unknown = set(spec) - {"min", "max", "count", "scale"}
    if unknown:
        raise ConfigError(f"axis {name}: unknown keys {sorted(unknown)}")
    missing = {"min", "max", "count"} - set(spec)
    if missing:
        raise ConfigError(f"axis {name}: missing {sorted(missing)}")
    ax = Axis(
        name,
        float(_number(spec["min"], f"{name}.min")),
        float(_number(spec["max"], f"{name}.max")),
        spec["count"],
        spec.get("scale", "linear"),
    )
    ax.validate(allowed)
    return ax


def build_config(pairs: list[tuple[str, object]]) -> RunConfig:
    params: dict = {}
    axes: dict[str, dict] = {}
    theta: dict = {}
    time: dict = {}
    initial: dict = {}
    top: dict = {}
    for key, value in pairs:
        parts = key.split(".")
        head = parts[0]
        if head == "params" and len(parts) == 2 and parts[1] in _PARAM_FIELDS:
            params[parts[1]] = value
        elif head == "sweep" and len(parts) == 3:
            axes.setdefault(parts[1], {})[parts[2]] = value
        elif head == "theta" and len(parts) == 2:
            theta[parts[1]] = value
        elif head == "time" and len(parts) == 2 and parts[1] in ("t0", "t1", "n_steps"):
            time[parts[1]] = value
        elif head == "initial" and len(parts) == 2 and parts[1] in ("level", "photons"):
            initial[parts[1]] = value
        elif len(parts) == 1 and key in _TOP_KEYS:
            top[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")

    if params.get("delta") == "auto":
        params["delta"] = None
    for k, v in params.items():
        if k == "decay_convention":
            if v not in CONVENTIONS:
                raise ConfigError(f"params.decay_convention must be one of {CONVENTIONS}")
        elif v is not None:
            params[k] = float(_number(v, f"params.{k}"))
    try:
        sp_ = SystemParams(**params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    ax_list = tuple(_axis_from(name, spec, AXIS_NAMES) for name, spec in axes.items())
    if len({a.name for a in ax_list}) != len(ax_list):
        raise ConfigError("duplicate sweep axis")

    outputs = top.get("outputs", ["n_photon", "p33"])
    if not isinstance(outputs, list) or not outputs or not all(isinstance(o, str) for o in outputs):
        raise ConfigError("outputs must be a non-empty list of names")
    bad = [o for o in outputs if not is_valid_output(o)]
    if bad:
        raise ConfigError(f"unknown outputs {bad}")
    if len(set(outputs)) != len(outputs):
        raise ConfigError("duplicate outputs")

    grid = None
    if time:
        try:
            grid = TimeGrid(float(_number(time.get("t0", 0.0), "time.t0")),
                            float(_number(time["t1"], "time.t1")),
                            time["n_steps"])
        except KeyError as exc:
            raise ConfigError(f"time.{exc.args[0]} is required") from exc
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    level = initial.get("level", 1)
    photons = initial.get("photons", 0)
    if level not in (1, 2, 3) or not isinstance(photons, int) or photons < 0:
        raise ConfigError("initial.level must be 1..3 and initial.photons a non-negative integer")

    dark_states = top.get("dark_states", 3)
    if isinstance(dark_states, bool) or not isinstance(dark_states, int) or dark_states < 0:
        raise ConfigError("dark_states must be a non-negative integer")
    strong = top.get("strong_regime", False)
    if not isinstance(strong, bool):
        raise ConfigError("strong_regime must be true or false")
    out_path = top.get("out_path")
    if out_path is not None and not isinstance(out_path, str):
        raise ConfigError("out_path must be a string")

    theta_axis = _axis_from("theta_rot", theta, ("theta_rot",)) if theta else None

    return RunConfig(
        params=sp_,
        axes=ax_list,
        outputs=tuple(outputs),
        out_path=out_path,
        n_max=_n_max(top.get("n_max", "auto")),
        time=grid,
        initial=(level, photons),
        strong_regime=strong,
        dark_states=dark_states,
        theta=theta_axis,
    )


def parse_config(text: str) -> RunConfig:
    return build_config(parse_pairs(text))


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)

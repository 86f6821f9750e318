"""TOML scenario/experiment files.

Example::

    [array]
    num_sensors = 11

    [scenario]
    look_direction = 0.0
    noise_power = 1.0

    [[scenario.interferers]]
    direction_cosine = "3/11"   # floats or exact fractions
    inr_db = 40.0               # or: power = 1e4 (linear)

    [experiment]
    num_snapshots = 12
    num_trials = 3000
    beamformers = ["SMI", "UC", "DL-matched"]
    base_seed = 0

    [sweep]                     # optional, exactly one key
    num_snapshots = [12, 14, 16]
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .array_model import SourceSpec, UlaGeometry, UlaScenario
from .experiments import BEAMFORMERS, ExperimentConfig

SCHEMA = {
    "array": {"num_sensors", "spacing_over_wavelength"},
    "scenario": {"look_direction", "noise_power", "interferers"},
    "interferer": {"direction_cosine", "inr_db", "power"},
    "experiment": {
        "num_snapshots", "num_trials", "beamformers", "base_seed", "fixed_loading_db",
        "fixed_loading", "dl_grid_db", "emit_zeros",
    },
    "output": {"beampattern_points", "linear_power"},
    "sweep": {"num_snapshots", "inr_db"},
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` is the dotted key path, ``line`` 1-based when known."""

    def __init__(self, message: str, field: str = "", line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class RunConfig:
    """Validated contents of a config file."""

    scenario: UlaScenario
    experiment: Optional[ExperimentConfig] = None
    sweep: Optional[tuple[str, tuple]] = None
    beampattern_points: int = 1001
    linear_power: bool = False
    canonical: dict = field(default_factory=dict, compare=False)

    @property
    def config_hash(self) -> str:
        return config_hash(self.canonical)

    def with_seed(self, seed: int) -> "RunConfig":
        canon = json.loads(json.dumps(self.canonical))
        canon.setdefault("experiment", {})["base_seed"] = int(seed)
        exp = replace(self.experiment, base_seed=int(seed)) if self.experiment else None
        return replace(self, experiment=exp, canonical=canon)

    def sweep_points(self):
        """Yield ``(label, ExperimentConfig)`` for each sweep value (or once without a sweep)."""
        if self.experiment is None:
            raise ConfigError("an [experiment] section is required", "experiment")
        if self.sweep is None:
            yield "", self.experiment
            return
        key, values = self.sweep
        for v in values:
            if key == "num_snapshots":
                yield f"L={v}", replace(self.experiment, num_snapshots=int(v))
            else:
                sc = self.experiment.scenario
                srcs = tuple(SourceSpec.from_db(s.direction_cosine, v, sc.noise_power) for s in sc.interferers)
                yield f"INR={v:g}dB", replace(self.experiment, scenario=replace(sc, interferers=srcs))


def config_hash(canonical: dict) -> str:
    blob = json.dumps(canonical, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode("ascii")).hexdigest()


class _Locator:
    """Best-effort mapping from a dotted key to the line that defines it."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def find(self, section: str, key: str, occurrence: int = 0) -> Optional[int]:
        header = re.compile(r"^\s*\[\[?\s*([\w.]+)\s*\]\]?")
        keyre = re.compile(rf"^\s*{re.escape(key)}\s*=")
        current, count = "", -1
        for i, line in enumerate(self.lines, start=1):
            m = header.match(line)
            if m:
                current = m.group(1)
                if not section and current.split(".")[0] == key:
                    return i
                if current == section:
                    count += 1
                continue
            if section and current == section and count == occurrence and keyre.match(line):
                return i
        return None


def _number(value, field_name, loc, line, *, integer=False, positive=False, nonneg=False):
    if isinstance(value, bool):
        raise ConfigError("expected a number, got a boolean", field_name, line)
    if isinstance(value, str):
        try:
            value = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse {value!r} as a number", field_name, line) from None
    if not isinstance(value, (int, float, Fraction)):
        raise ConfigError(f"expected a number, got {type(value).__name__}", field_name, line)
    if integer:
        if Fraction(value).denominator != 1:
            raise ConfigError(f"expected an integer, got {value}", field_name, line)
        value = int(value)
    else:
        value = float(value)
    if value != value or value in (float("inf"), float("-inf")):
        raise ConfigError("value must be finite", field_name, line)
    if positive and not value > 0:
        raise ConfigError(f"must be positive, got {value}", field_name, line)
    if nonneg and not value >= 0:
        raise ConfigError(f"must be non-negative, got {value}", field_name, line)
    return value


def _check_keys(table, allowed, prefix, loc, section):
    if not isinstance(table, dict):
        raise ConfigError("expected a table", prefix)
    for key in table:
        if key not in allowed:
            raise ConfigError(f"unknown key (allowed: {', '.join(sorted(allowed))})",
                              f"{prefix}.{key}", loc.find(section, key))


def parse_config(text: str) -> RunConfig:
    """Parse and validate TOML text; raises :class:`ConfigError` with location details."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"TOML syntax error: {exc}", "", int(m.group(1)) if m else None) from None
    loc = _Locator(text)
    for key in raw:
        if key not in SCHEMA or key == "interferer":
            raise ConfigError("unknown section", key, loc.find("", key))
    canon: dict[str, Any] = {}

    array = raw.get("array")
    if array is None:
        raise ConfigError("missing [array] section", "array")
    _check_keys(array, SCHEMA["array"], "array", loc, "array")
    if "num_sensors" not in array:
        raise ConfigError("required", "array.num_sensors")
    n = _number(array["num_sensors"], "array.num_sensors", loc, loc.find("array", "num_sensors"), integer=True)
    if n < 2:
        raise ConfigError("need at least 2 sensors", "array.num_sensors", loc.find("array", "num_sensors"))
    spacing = _number(array.get("spacing_over_wavelength", 0.5), "array.spacing_over_wavelength", loc,
                      loc.find("array", "spacing_over_wavelength"), positive=True)
    geometry = UlaGeometry(n, spacing)
    canon["array"] = {"num_sensors": n, "spacing_over_wavelength": spacing}

    sc = raw.get("scenario", {})
    _check_keys(sc, SCHEMA["scenario"], "scenario", loc, "scenario")
    u0 = _number(sc.get("look_direction", 0.0), "scenario.look_direction", loc, loc.find("scenario", "look_direction"))
    if abs(u0) > 1:
        raise ConfigError("direction cosine must lie in [-1, 1]", "scenario.look_direction",
                          loc.find("scenario", "look_direction"))
    noise = _number(sc.get("noise_power", 1.0), "scenario.noise_power", loc, loc.find("scenario", "noise_power"),
                    positive=True)
    interferers = []
    items = sc.get("interferers", [])
    if not isinstance(items, list):
        raise ConfigError("expected an array of tables", "scenario.interferers")
    for i, item in enumerate(items):
        prefix = f"scenario.interferers[{i}]"
        sec = "scenario.interferers"
        if not isinstance(item, dict):
            raise ConfigError("expected a table", prefix)
        for key in item:
            if key not in SCHEMA["interferer"]:
                raise ConfigError("unknown key", f"{prefix}.{key}", loc.find(sec, key, i))
        if "direction_cosine" not in item:
            raise ConfigError("required", f"{prefix}.direction_cosine")
        u = _number(item["direction_cosine"], f"{prefix}.direction_cosine", loc, loc.find(sec, "direction_cosine", i))
        if abs(u) > 1:
            raise ConfigError("direction cosine must lie in [-1, 1]", f"{prefix}.direction_cosine",
                              loc.find(sec, "direction_cosine", i))
        if ("inr_db" in item) == ("power" in item):
            raise ConfigError("give exactly one of inr_db or power", prefix)
        if "inr_db" in item:
            power = noise * 10.0 ** (_number(item["inr_db"], f"{prefix}.inr_db", loc, loc.find(sec, "inr_db", i)) / 10)
        else:
            power = _number(item["power"], f"{prefix}.power", loc, loc.find(sec, "power", i), positive=True)
        interferers.append(SourceSpec(u, power))
    try:
        scenario = UlaScenario(geometry, u0, tuple(interferers), noise)
    except ValueError as exc:
        raise ConfigError(str(exc), "scenario") from None
    canon["scenario"] = {
        "look_direction": u0,
        "noise_power": noise,
        "interferers": [{"direction_cosine": s.direction_cosine, "power": s.power} for s in interferers],
    }

    out = raw.get("output", {})
    _check_keys(out, SCHEMA["output"], "output", loc, "output")
    points = _number(out.get("beampattern_points", 1001), "output.beampattern_points", loc,
                     loc.find("output", "beampattern_points"), integer=True, positive=True)
    linear = out.get("linear_power", False)
    if not isinstance(linear, bool):
        raise ConfigError("expected true/false", "output.linear_power", loc.find("output", "linear_power"))
    canon["output"] = {"beampattern_points": points, "linear_power": linear}

    experiment = None
    sweep = None
    if "experiment" in raw:
        experiment, canon["experiment"] = _parse_experiment(raw["experiment"], scenario, loc)
    if "sweep" in raw:
        if experiment is None:
            raise ConfigError("[sweep] needs an [experiment] section", "sweep")
        sweep, canon["sweep"] = _parse_sweep(raw["sweep"], experiment, loc)
    return RunConfig(scenario, experiment, sweep, points, linear, canon)


def _parse_experiment(ex, scenario, loc):
    _check_keys(ex, SCHEMA["experiment"], "experiment", loc, "experiment")

    def line(key):
        return loc.find("experiment", key)

    if "num_snapshots" not in ex:
        raise ConfigError("required", "experiment.num_snapshots")
    snaps = _number(ex["num_snapshots"], "experiment.num_snapshots", loc, line("num_snapshots"),
                    integer=True, positive=True)
    trials = _number(ex.get("num_trials", 3000), "experiment.num_trials", loc, line("num_trials"),
                     integer=True, positive=True)
    names = ex.get("beamformers", ["SMI", "UC", "DL-matched"])
    if not isinstance(names, list) or not names or not all(isinstance(b, str) for b in names):
        raise ConfigError("expected a nonempty list of names", "experiment.beamformers", line("beamformers"))
    for b in names:
        if b not in BEAMFORMERS:
            raise ConfigError(f"unknown beamformer {b!r}; choose from {', '.join(BEAMFORMERS)}",
                              "experiment.beamformers", line("beamformers"))
    seed = _number(ex.get("base_seed", 0), "experiment.base_seed", loc, line("base_seed"), integer=True, nonneg=True)
    fixed = None
    if "fixed_loading_db" in ex and "fixed_loading" in ex:
        raise ConfigError("give only one of fixed_loading_db or fixed_loading", "experiment.fixed_loading")
    if "fixed_loading_db" in ex:
        fixed = 10.0 ** (_number(ex["fixed_loading_db"], "experiment.fixed_loading_db", loc,
                                 line("fixed_loading_db")) / 10.0)
    elif "fixed_loading" in ex:
        fixed = _number(ex["fixed_loading"], "experiment.fixed_loading", loc, line("fixed_loading"), nonneg=True)
    grid = ex.get("dl_grid_db", [-60.0, 60.0, 121])
    if not isinstance(grid, list) or len(grid) != 3:
        raise ConfigError("expected [start_db, stop_db, num_points]", "experiment.dl_grid_db", line("dl_grid_db"))
    grid = (
        _number(grid[0], "experiment.dl_grid_db[0]", loc, line("dl_grid_db")),
        _number(grid[1], "experiment.dl_grid_db[1]", loc, line("dl_grid_db")),
        _number(grid[2], "experiment.dl_grid_db[2]", loc, line("dl_grid_db"), integer=True, positive=True),
    )
    if grid[1] < grid[0]:
        raise ConfigError("stop_db must not be below start_db", "experiment.dl_grid_db", line("dl_grid_db"))
    zeros = ex.get("emit_zeros", False)
    if not isinstance(zeros, bool):
        raise ConfigError("expected true/false", "experiment.emit_zeros", line("emit_zeros"))
    try:
        cfg = ExperimentConfig(scenario, snaps, trials, tuple(names), seed, fixed, grid, zeros)
    except ValueError as exc:
        raise ConfigError(str(exc), "experiment") from None
    canon = {
        "num_snapshots": snaps, "num_trials": trials, "beamformers": list(names), "base_seed": seed,
        "fixed_loading": fixed, "dl_grid_db": list(grid), "emit_zeros": zeros,
    }
    return cfg, canon


def _parse_sweep(sw, experiment, loc):
    _check_keys(sw, SCHEMA["sweep"], "sweep", loc, "sweep")
    if len(sw) != 1:
        raise ConfigError("exactly one sweep parameter is supported", "sweep")
    key, values = next(iter(sw.items()))
    line = loc.find("sweep", key)
    if not isinstance(values, list) or not values:
        raise ConfigError("expected a nonempty list", f"sweep.{key}", line)
    if key == "num_snapshots":
        values = tuple(_number(v, f"sweep.{key}", loc, line, integer=True, positive=True) for v in values)
        for v in values:
            try:
                replace(experiment, num_snapshots=v)
            except ValueError as exc:
                raise ConfigError(str(exc), f"sweep.{key}", line) from None
    else:
        values = tuple(_number(v, f"sweep.{key}", loc, line) for v in values)
        if not experiment.scenario.interferers:
            raise ConfigError("an INR sweep needs at least one interferer", f"sweep.{key}", line)
    return (key, values), {key: list(values)}


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode("utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except UnicodeDecodeError as exc:
        raise ConfigError(f"config is not valid UTF-8: {exc}") from None
    return parse_config(text)

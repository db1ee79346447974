"""Run configuration: presets, config files and key=value overrides.

Config files are flat text, one ``key = value`` per line with ``#`` comments;
the same dotted key paths work with the CLI ``--set`` flag, which is applied
after the file.  All frequencies and rates are in linewidth units except the
doppler.* keys, which are SI.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .doppler import DopplerConfig
from .model import AtomParams, ExchangeModel, FieldParams
from .scenarios import Scenario, preset

__all__ = ["ConfigError", "RunConfig", "parse_config", "scenario_to_dict", "KNOWN_KEYS"]


class ConfigError(Exception):
    """Invalid configuration; the message names the offending key."""


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_signs(raw: str) -> tuple[int, ...]:
    text = raw.strip()
    try:
        values = json.loads(text) if text.startswith("[") else [int(p) for p in text.split(",")]
    except (json.JSONDecodeError, ValueError) as exc:
        raise ValueError(f"expected four comma-separated signs, got {raw!r}") from exc
    return tuple(int(v) for v in values)


_ATOM_FLOAT_KEYS = (
    "omega43",
    "gamma31",
    "gamma32",
    "gamma41",
    "gamma42",
    "gamma3_deph",
    "gamma4_deph",
    "gamma2_deph",
)
_FIELD_KEYS = ("omega_p3", "omega_p4", "omega_c3", "omega_c4", "delta_p", "delta_c")
_DOPPLER_FLOAT_KEYS = ("temperature", "mass", "wavelength0", "cutoff_sigmas", "gamma3_hz")

#: key path -> parser for everything overridable via file or --set.
KNOWN_KEYS: dict[str, object] = {"preset": str, "exchange.kind": str, "exchange.rate": float}
KNOWN_KEYS.update({f"atom.{k}": float for k in _ATOM_FLOAT_KEYS})
KNOWN_KEYS["atom.dipole_signs"] = _parse_signs
KNOWN_KEYS.update({f"fields.{k}": float for k in _FIELD_KEYS})
KNOWN_KEYS.update({f"doppler.{k}": float for k in _DOPPLER_FLOAT_KEYS})
KNOWN_KEYS["doppler.n_samples"] = int
KNOWN_KEYS["doppler.enabled"] = _parse_bool
KNOWN_KEYS.update({"grid.min": float, "grid.max": float, "grid.count": int})


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved scan request: what to run and where to put it."""

    scenario: Scenario
    out: Path | None = None
    fmt: str = "csv"
    workers: int = 1


def _read_config_file(path: str | Path) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        pairs[key.strip()] = value.strip()
    return pairs


def _convert(key: str, raw: str):
    parser = KNOWN_KEYS.get(key)
    if parser is None:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return parser(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _grid_from_values(values: dict[str, object], base: np.ndarray) -> np.ndarray:
    lo = float(values.get("grid.min", base[0]))
    hi = float(values.get("grid.max", base[-1]))
    count = int(values.get("grid.count", base.size))
    if count < 2:
        raise ConfigError(f"grid.count: need at least 2 points, got {count}")
    if not lo < hi:
        raise ConfigError(f"grid.min/grid.max: need min < max, got {lo} >= {hi}")
    return np.linspace(lo, hi, count)


def parse_grid_spec(spec: str) -> dict[str, object]:
    """Translate a ``min:max:count`` flag into grid.* override values."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid: expected min:max:count, got {spec!r}")
    try:
        return {
            "grid.min": float(parts[0]),
            "grid.max": float(parts[1]),
            "grid.count": int(parts[2]),
        }
    except ValueError as exc:
        raise ConfigError(f"--grid: {exc}") from exc


def parse_config(
    preset_name: str | None = None,
    config_path: str | Path | None = None,
    set_pairs: list[str] | None = None,
    grid_spec: str | None = None,
    out: str | Path | None = None,
    fmt: str = "csv",
    workers: int = 1,
) -> RunConfig:
    """Resolve file plus flag overrides into a validated RunConfig.

    Precedence, lowest to highest: config file, --preset, --grid, --set.
    Unknown keys and invariant violations raise ConfigError naming the key;
    nothing is solved before the whole configuration validates.
    """
    values: dict[str, object] = {}
    if config_path is not None:
        for key, raw in _read_config_file(config_path).items():
            values[key] = _convert(key, raw)
    if preset_name is not None:
        values["preset"] = preset_name
    if grid_spec is not None:
        values.update(parse_grid_spec(grid_spec))
    for pair in set_pairs or ():
        if "=" not in pair:
            raise ConfigError(f"--set: expected key=value, got {pair!r}")
        key, _, raw = pair.partition("=")
        values[key.strip()] = _convert(key.strip(), raw.strip())

    if "preset" not in values:
        raise ConfigError("preset: no scenario selected (use --preset or a config file)")

    try:
        scenario = preset(str(values["preset"]))
    except Exception as exc:
        raise ConfigError(f"preset: {exc}") from exc

    scenario = replace(scenario, delta_grid=_grid_from_values(values, scenario.delta_grid))
    scenario = _apply_section(scenario, values)

    if workers < 1:
        raise ConfigError(f"workers: must be >= 1, got {workers}")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format: must be csv or json, got {fmt!r}")

    out_path = Path(out) if out is not None else None
    if out_path is not None:
        parent = out_path.parent if out_path.parent != Path("") else Path(".")
        if not parent.is_dir() or not os.access(parent, os.W_OK):
            raise ConfigError(f"out: directory {parent} is not writable")

    return RunConfig(scenario=scenario, out=out_path, fmt=fmt, workers=workers)


def _apply_section(scenario: Scenario, values: dict[str, object]) -> Scenario:
    atom_updates = {
        key.split(".", 1)[1]: val for key, val in values.items() if key.startswith("atom.")
    }
    field_updates = {
        key.split(".", 1)[1]: val for key, val in values.items() if key.startswith("fields.")
    }
    doppler_updates = {
        key.split(".", 1)[1]: val
        for key, val in values.items()
        if key.startswith("doppler.") and key != "doppler.enabled"
    }
    exchange_updates = {
        key.split(".", 1)[1]: val for key, val in values.items() if key.startswith("exchange.")
    }

    try:
        atom = replace(scenario.atom, **atom_updates) if atom_updates else scenario.atom
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"atom.*: {exc}") from exc
    try:
        fields = (
            replace(scenario.fields_template, **field_updates)
            if field_updates
            else scenario.fields_template
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"fields.*: {exc}") from exc

    exchange = scenario.exchange
    if exchange_updates:
        kind = str(exchange_updates.get("kind", exchange.kind if exchange.kind != "none" else "effective"))
        rate = float(exchange_updates.get("rate", exchange.rate))
        if kind == "none":
            rate = 0.0
        try:
            exchange = ExchangeModel(kind, rate)
        except ValueError as exc:
            raise ConfigError(f"exchange.*: {exc}") from exc

    doppler = scenario.doppler
    enabled = values.get("doppler.enabled")
    if enabled is False:
        doppler = None
    elif doppler_updates or enabled is True:
        base = doppler if doppler is not None else DopplerConfig()
        try:
            doppler = replace(base, **doppler_updates)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"doppler.*: {exc}") from exc

    return replace(
        scenario, atom=atom, fields_template=fields, exchange=exchange, doppler=doppler
    )


def scenario_to_dict(scenario: Scenario) -> dict:
    """JSON-friendly echo of a scenario (grid abbreviated to min/max/count)."""
    from dataclasses import asdict

    doppler = asdict(scenario.doppler) if scenario.doppler is not None else None
    return {
        "name": scenario.name,
        "atom": asdict(scenario.atom) | {"dipole_signs": list(scenario.atom.dipole_signs)},
        "fields": asdict(scenario.fields_template),
        "exchange": asdict(scenario.exchange),
        "doppler": doppler,
        "grid": {
            "min": float(scenario.delta_grid[0]),
            "max": float(scenario.delta_grid[-1]),
            "count": int(scenario.delta_grid.size),
        },
    }

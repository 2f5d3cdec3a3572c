"""Flat ``key = value`` scenario files.

Units are fixed by key name (``_m`` meters, ``_w`` watts, ``_db`` decibels,
...). ``#`` starts a comment. Either ``M_symbols`` or both ``B_hz`` and
``Tmax_s`` must be given.
"""

from __future__ import annotations

import os
from importlib import resources
from typing import Dict, Tuple, Union

from .model import ScenarioParams
from .optimizer import SolverConfig


class ConfigError(ValueError):
    pass


# config key -> (target, field name, type)
SCENARIO_KEYS = {
    "D_m": ("D", float),
    "H_m": ("H", float),
    "d1_m": ("d1", float),
    "d2_m": ("d2", float),
    "L_bits": ("L", float),
    "M_symbols": ("M", int),
    "B_hz": ("B", float),
    "Tmax_s": ("T_max", float),
    "P1_w": ("P1", float),
    "P2_w": ("P2", float),
    "beta0_db": ("beta0_dB", float),
    "noise": ("noise_power", float),
}
SOLVER_KEYS = {
    "delta": ("delta", float),
    "zeta": ("zeta", float),
    "n_max": ("n_max", int),
    "t_max": ("t_max", int),
    "early_stop_tol": ("early_stop_tol", float),
}
REQUIRED = ("D_m", "H_m", "d1_m", "d2_m", "L_bits", "P1_w", "P2_w", "beta0_db")


def _convert(key, raw, typ, lineno):
    try:
        if typ is int:
            v = float(raw)
            if not v.is_integer():
                raise ValueError
            return int(v)
        return float(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects a number, got {raw!r}") from None


def parse_text(text: str) -> Dict[str, Tuple[object, int]]:
    """Return {key: (value, line number)}."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key in SCENARIO_KEYS:
            typ = SCENARIO_KEYS[key][1]
        elif key in SOLVER_KEYS:
            typ = SOLVER_KEYS[key][1]
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = (_convert(key, raw, typ, lineno), lineno)
    return out


def build(entries: Dict[str, Tuple[object, int]]) -> Tuple[ScenarioParams, SolverConfig]:
    for key in REQUIRED:
        if key not in entries:
            raise ConfigError(f"missing required key {key}")
    vals = {k: v for k, (v, _) in entries.items()}
    has_bt = "B_hz" in vals and "Tmax_s" in vals
    if "M_symbols" not in vals:
        if not has_bt:
            raise ConfigError("missing required key M_symbols (or B_hz and Tmax_s)")
        vals["M_symbols"] = int(round(vals["B_hz"] * vals["Tmax_s"]))
    scen = {SCENARIO_KEYS[k][0]: v for k, v in vals.items() if k in SCENARIO_KEYS}
    solv = {SOLVER_KEYS[k][0]: v for k, v in vals.items() if k in SOLVER_KEYS}
    try:
        return ScenarioParams(**scen), SolverConfig(**solv)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def loads(text: str) -> Tuple[ScenarioParams, SolverConfig]:
    return build(parse_text(text))


def load_scenario(path: Union[str, os.PathLike]) -> Tuple[ScenarioParams, SolverConfig]:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def bundled_text(name: str = "paper.cfg") -> str:
    return resources.files("uavfbl").joinpath("data", name).read_text(encoding="utf-8")


def load_bundled(name: str = "paper.cfg") -> Tuple[ScenarioParams, SolverConfig]:
    return loads(bundled_text(name))

"""Flat ``key = value`` scenario configuration.

One pair per line, ``#`` starts a comment. Numeric values may be simple
arithmetic in ``pi`` (``pi/3``, ``2*pi``, ``1e-9``). Unknown keys and
non-finite numbers are rejected before anything is computed.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from .errors import ConfigError

PI = math.pi

_COMMON = {"t_end": 3.0, "n_steps": 600, "tol": 1e-9}

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "fig2": {
        **_COMMON,
        "omega0": 10.0,
        "gamma": 1.0,
        "lambda": None,
        "beta": None,
        "omega_c": None,
        "vartheta": PI / 3,
        "theta": PI / 3,
        "phi": 0.0,
        "phi_prime": PI / 2,
    },
    "fig3": {
        **_COMMON,
        "gamma0": 1.0,
        "sharpness": 5.0,
        "t_switch": 1.0,
        "schedule": "tanh",
        "initial": "mixed",
    },
    "fig4": {
        **_COMMON,
        "omega0": 10.0,
        "gamma": 1.0,
        "theta": PI / 3,
        "phi": PI / 2,
        "phi_prime": PI,
        "dephasing_scale": 0.5,
        "n_phi": 64,
        "n_t": 200,
        "region_t_end": 3.0,
        "region_out": None,
    },
    "diagnose": {
        **_COMMON,
        "source": "fig2",
        "omega0": 10.0,
        "gamma": 1.0,
        "lambda": None,
        "beta": None,
        "omega_c": None,
        "vartheta": PI / 3,
        "theta": PI / 3,
        "phi": 0.0,
        "gamma_plus": 1.0,
        "gamma_minus": 1.0,
        "gamma_z": 1.0,
        "dephasing_scale": 0.5,
        "gamma0": 1.0,
        "sharpness": 5.0,
        "t_switch": 1.0,
        "schedule": "tanh",
        "stride": 1,
    },
    "scan-cp": {
        "omega0": 10.0,
        "gamma": 1.0,
        "dephasing_scale": 0.5,
        "n_phi": 64,
        "n_t": 200,
        "t_end": 3.0,
        "tol": 1e-9,
    },
}

CHOICES = {
    "schedule": ("tanh", "constant"),
    "initial": ("mixed", "ket0", "ket1"),
    "source": ("fig2", "pc", "mimic", "fig3"),
}
INTEGER_KEYS = {"n_steps", "n_phi", "n_t", "stride"}
STRING_KEYS = set(CHOICES) | {"region_out"}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def _eval_number(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return PI
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_number(node.left), _eval_number(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_eval_number(node.operand))
    raise ValueError("not a number")


def parse_number(text: str) -> float:
    lowered = text.strip().lower()
    if lowered in ("nan", "inf", "+inf", "-inf", "infinity", "-infinity"):
        raise ValueError(f"non-finite value {text!r}")
    try:
        value = _eval_number(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError):
        raise ValueError(f"cannot parse {text!r} as a number") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


@dataclass
class ScenarioConfig:
    scenario: str
    params: Dict[str, Any] = field(default_factory=dict)
    out: Optional[str] = None

    def __getitem__(self, key):
        return self.params[key]

    def get(self, key, default=None):
        return self.params.get(key, default)


def coerce(scenario: str, key: str, raw: str, where: str = ""):
    allowed = DEFAULTS[scenario]
    prefix = f"{where}: " if where else ""
    if key == "out":
        return raw.strip()
    if key not in allowed:
        raise ConfigError(f"{prefix}unknown key {key!r} for scenario {scenario!r}")
    raw = raw.strip()
    if key in STRING_KEYS:
        if key in CHOICES and raw not in CHOICES[key]:
            raise ConfigError(f"{prefix}{key} must be one of {', '.join(CHOICES[key])}, got {raw!r}")
        return raw
    try:
        value = parse_number(raw)
    except ValueError as exc:
        raise ConfigError(f"{prefix}{key}: {exc}") from None
    if key in INTEGER_KEYS:
        if value != int(value):
            raise ConfigError(f"{prefix}{key} must be an integer, got {raw!r}")
        return int(value)
    return value


def parse_config_text(scenario: str, text: str, source: str = "<config>") -> Dict[str, Any]:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        values[key] = coerce(scenario, key, raw, where=f"{source}:{lineno}")
    return values


def build_config(scenario: str, file_text: Optional[str] = None, overrides=None,
                 out: Optional[str] = None, source: str = "<config>") -> ScenarioConfig:
    """Merge defaults, an optional config file and ``(key, raw value)`` overrides."""
    if scenario not in DEFAULTS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    params = dict(DEFAULTS[scenario])
    if file_text is not None:
        parsed = parse_config_text(scenario, file_text, source)
        out = out or parsed.pop("out", None)
        params.update(parsed)
    for key, raw in overrides or ():
        params[key] = coerce(scenario, key, str(raw), where="--" + key)
    validate(scenario, params)
    return ScenarioConfig(scenario=scenario, params=params, out=out)


def validate(scenario: str, params: Dict[str, Any]):
    for key in ("n_steps", "n_t"):
        if key in params and params[key] < 2:
            raise ConfigError(f"{key} must be at least 2")
    if "n_phi" in params and params["n_phi"] < 1:
        raise ConfigError("n_phi must be positive")
    if "stride" in params and params["stride"] < 1:
        raise ConfigError("stride must be positive")
    for key in ("t_end", "region_t_end", "tol"):
        if key in params and not params[key] > 0:
            raise ConfigError(f"{key} must be positive")
    for key in ("gamma", "gamma0", "lambda"):
        if params.get(key) is not None and params[key] < 0:
            raise ConfigError(f"{key} must be nonnegative")
    for key in ("omega_c", "beta"):
        if params.get(key) is not None and not params[key] > 0:
            raise ConfigError(f"{key} must be positive")
    if scenario in ("fig2", "diagnose") and (params.get("lambda") is None) != (params.get("beta") is None):
        raise ConfigError("lambda and beta must be given together")
    if params.get("omega_c") is not None and params.get("lambda") is None:
        raise ConfigError("omega_c requires lambda and beta")

"""
Run configuration: JSON file merged over defaults, then command-line
flags over the file.
"""

import json
import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional

from .errors import ConfigError

COMMANDS = ('code build', 'amd audit', 'wt audit', 'lecss verify', 'nm audit', 'smt run', 'bounds')
MODES = ('exact', 'montecarlo')
FORMATS = ('json', 'csv')


@dataclass
class RunConfig:
    command: str = 'bounds'
    # code parameters
    construction: int = 2
    h: int = 5
    extended: bool = False
    n: int = 16
    k: int = 1
    u: int = 2
    ell: int = 2
    r: int = 3
    q: int = 16
    t: int = 1
    code_seed: int = 0
    # adversary
    rho_r: float = 0.0
    rho_w: Optional[float] = None
    adversaries: int = 10
    sampler: str = 'mixed'
    set_size: Optional[int] = None
    # bounds queries
    query: str = 'capacity'
    epsilon: float = 0.0
    delta: Optional[float] = None
    rho: Optional[float] = None
    t_prime: Optional[int] = None
    d_prime: Optional[int] = None
    # run
    mode: str = 'exact'
    samples: int = 100_000
    seed: int = 0
    out: Optional[str] = None
    format: str = 'json'

    def validate(self) -> 'RunConfig':
        if self.command not in COMMANDS:
            raise ConfigError(f"command: expected one of {', '.join(COMMANDS)}, got {self.command!r}")
        if self.construction not in (1, 2):
            raise ConfigError(f"construction: expected 1 or 2, got {self.construction}")
        if self.mode not in MODES:
            raise ConfigError(f"mode: expected exact or montecarlo, got {self.mode!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format: expected json or csv, got {self.format!r}")
        for name in ('rho_r', 'rho_w', 'epsilon'):
            value = getattr(self, name)
            if value is not None and not 0 <= value <= 1:
                raise ConfigError(f"{name}: must lie in [0, 1], got {value}")
        for name in ('h', 'n', 'k', 'u', 'samples'):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name}: must be positive, got {getattr(self, name)}")
        if self.adversaries < 0:
            raise ConfigError(f"adversaries: must be non-negative, got {self.adversaries}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _coerce(name: str, value: Any) -> Any:
    default = getattr(RunConfig(), name)
    if value is None:
        return None
    expected = type(default) if default is not None else None
    if name in ('set_size', 't_prime', 'd_prime'):
        expected = int
    elif name in ('delta', 'rho', 'rho_w'):
        expected = float
    elif name == 'out':
        expected = str
    try:
        if expected is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        if expected is int:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise TypeError
            return int(value)
        if expected is float:
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if expected is str:
            if not isinstance(value, str):
                raise TypeError
            return value
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected {expected.__name__}, got {value!r}")
    return value


def config_from_dict(data: Dict[str, Any], base: Optional[RunConfig] = None) -> RunConfig:
    """Merge `data` over `base` (defaults when omitted); unknown keys are rejected."""
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a JSON object")
    for key in data:
        if key not in _FIELDS:
            raise ConfigError(f"unknown config key: {key!r}")
    values = {key: _coerce(key, value) for key, value in data.items()}
    return replace(base or RunConfig(), **values)


def load_config(path: str) -> RunConfig:
    """
    Load a JSON run configuration.

    An empty file gives the defaults.

    Raises:
        ConfigError: missing file, syntax error (with line and column),
            unknown key or bad value
    """
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as f:
        text = f.read()
    if not text.strip():
        return RunConfig()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")
    return config_from_dict(data)


def apply_flags(config: RunConfig, flags: Dict[str, Any]) -> RunConfig:
    """Flags left at None keep the file (or default) value."""
    overrides = {key: value for key, value in flags.items() if value is not None}
    return config_from_dict(overrides, base=config).validate()

"""Flat ``key = value`` run configuration.

Lines are ``key = value``; ``#`` starts a comment; lists are comma separated.
Every key is also a command-line flag (``--key value``, dashes or underscores),
and flags override the file. A run manifest (JSON) is accepted as a config
file, which makes every run reproducible from its manifest.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import ConfigError

SCENARIOS = ("rest", "gaussian-bump", "exact-forced", "custom-from-file")
OUTPUT_ROOT_ENV = "CNSLAB_OUTPUT_ROOT"


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).replace(";", ",").split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in _floats(text)]


def _bool(text):
    if isinstance(text, bool):
        return text
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass
class RunConfig:
    # fluid
    gamma: float = 2.0
    A: float = 1.0
    mu: float = 1e-3
    lam: float = 0.0
    n: int = 3
    # grid and boundary
    r_min: float = 0.0
    r_max: float = 1.0
    cells: int = 200
    bc_inner: str = ""  # empty: scenario default
    bc_outer: str = ""
    # scenario
    scenario: str = "gaussian-bump"
    background: float = 1.0
    amplitude: float = 0.5
    width: float = 0.2
    T: float = 1.0  # blowup time of the exact solution
    initial_file: str = ""
    # numerics
    cfl: float = 0.4
    floor: float = 1e-10
    reconstruction: str = "linear"
    limiter: str = "vanleer"
    dt_min: float = 1e-12
    max_steps: int = 10_000_000
    t_end: float = 0.3
    snapshot_times: list = field(default_factory=list)
    grad_omega: bool = False
    # diagnostics
    q: float = 4.0
    p: float = 4.0
    T_ref: float = 0.0  # 0: use T for exact-forced runs, otherwise off
    fit_window: list = field(default_factory=list)
    diagnostics_file: str = ""
    # scale-check
    kappa: float = 2.0
    levels: list = field(default_factory=lambda: [200, 400, 800])
    t1: float = 0.1
    t2: float = 0.3
    interp_order: int = 3
    # criteria
    gammas: list = field(default_factory=lambda: [1.0, 2.0, 3.0])
    # exact / profile-check sampling
    sample_r_min: float = 0.05
    sample_r_max: float = 1.0
    sample_count: int = 20
    sample_times: list = field(default_factory=lambda: [0.0, 0.25, 0.5])
    profile_file: str = ""
    lp_exponent: float = 2.0
    lp_radius: float = 1.0
    # output
    output_dir: str = "out"

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        for name in ("initial_file", "diagnostics_file", "profile_file"):
            path = getattr(self, name)
            if path and not Path(path).is_file():
                raise ConfigError(f"{name} {path!r} does not exist")
        if self.scenario == "custom-from-file" and not self.initial_file:
            raise ConfigError("scenario custom-from-file needs initial_file")

    def fluid_params(self):
        from .params import FluidParams

        return FluidParams(gamma=self.gamma, A=self.A, mu=self.mu, lam=self.lam, n=self.n)

    def output_path(self) -> Path:
        root = os.environ.get(OUTPUT_ROOT_ENV)
        path = Path(self.output_dir)
        if root and not path.is_absolute():
            path = Path(root) / path
        return path

    def to_dict(self) -> dict:
        return asdict(self)


_CONVERTERS = {}
for _f in fields(RunConfig):
    if _f.name in ("levels",):
        _CONVERTERS[_f.name] = _ints
    elif _f.name in ("snapshot_times", "gammas", "sample_times", "fit_window"):
        _CONVERTERS[_f.name] = _floats
    elif _f.type in ("int",):
        _CONVERTERS[_f.name] = lambda v: int(float(v))
    elif _f.type in ("float",):
        _CONVERTERS[_f.name] = float
    elif _f.type in ("bool",):
        _CONVERTERS[_f.name] = _bool
    else:
        _CONVERTERS[_f.name] = str

ALIASES = {"lambda": "lam", "cell_count": "cells"}
KEYS = tuple(_CONVERTERS)


def normalise_key(key: str) -> str:
    k = key.strip().replace("-", "_")
    return ALIASES.get(k, k)


def coerce(key: str, value):
    key = normalise_key(key)
    if key not in _CONVERTERS:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return _CONVERTERS[key](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None


def parse_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        values[normalise_key(key)] = coerce(key, value.strip())
    return values


def load(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {str(path)!r} does not exist")
    text = path.read_text()
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        data = data.get("config", data)
        return {normalise_key(k): coerce(k, v) for k, v in data.items()}
    return parse_text(text)


def build(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    merged = dict(file_values or {})
    merged.update({normalise_key(k): coerce(k, v) for k, v in (overrides or {}).items() if v is not None})
    unknown = set(merged) - set(KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**merged)


def dumps(cfg: RunConfig) -> str:
    """Serialise in the ``key = value`` format accepted by :func:`parse_text`."""
    out = []
    for k, v in cfg.to_dict().items():
        if isinstance(v, list):
            v = ", ".join(repr(x) for x in v)
        out.append(f"{k} = {v}")
    return "\n".join(out) + "\n"

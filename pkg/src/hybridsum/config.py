"""Run configuration files and their conversion to an ExperimentConfig."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

from .algebra import MODES
from .characters import AddChar, MultChar
from .errors import ConfigError, HybridSumError
from .field import make_field
from .geometry import Rectangle
from .polyparse import parse_poly, parse_rational
from .sums import SCALES, ExperimentConfig


@dataclass
class RunConfig:
    p: int
    curve: str
    g: str = "x"
    f: str = "x*y"
    chi_order: int = 2
    chi_power: int = 1
    psi_k: int = 1
    theta: float = 0.0
    I: list[int] | None = None      # [lo, hi], inclusive; default [0, p-1]
    J: list[int] | None = None      # [lo, hi), default [0, p)
    H: int = 1
    k_max: int = 8
    mode: str = "auto"
    wrap: bool = True
    scale: str = "density"
    seed: int = 0
    out_dir: str = "out"

    def __post_init__(self):
        if self.I is None:
            self.I = [0, self.p - 1]
        if self.J is None:
            self.J = [0, self.p]

    def to_dict(self):
        return asdict(self)

    @property
    def resolved_mode(self) -> str:
        if self.mode != "auto":
            return self.mode
        if self.chi_order == 1:
            return "trivial_chi"
        if self.psi_k % self.p == 0:
            return "trivial_psi"
        return "mainthm"


_FIELDS = {f for f in RunConfig.__dataclass_fields__}


def _need_int(d, key, path):
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(path, f"expected an integer, got {v!r}")
    return v


def load_run_config(source) -> RunConfig:
    """Load and validate a RunConfig from a path or a dict."""
    if isinstance(source, (str, Path)):
        try:
            with open(source) as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON: {exc}") from exc
        except OSError as exc:
            raise ConfigError("<file>", f"cannot read config: {exc}") from exc
    else:
        raw = dict(source)
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    unknown = set(raw) - _FIELDS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown field")
    for key in ("p", "curve"):
        if key not in raw:
            raise ConfigError(key, "required field missing")
    for key in ("p", "chi_order", "chi_power", "psi_k", "H", "k_max", "seed"):
        if key in raw:
            _need_int(raw, key, key)
    for key in ("I", "J"):
        if key in raw:
            v = raw[key]
            if (not isinstance(v, list) or len(v) != 2
                    or not all(isinstance(e, int) and not isinstance(e, bool) for e in v)):
                raise ConfigError(key, "expected [lo, hi] integers")
    if "theta" in raw and not isinstance(raw["theta"], (int, float)):
        raise ConfigError("theta", "expected a number (radians)")
    if "wrap" in raw and not isinstance(raw["wrap"], bool):
        raise ConfigError("wrap", "expected a boolean")
    rc = RunConfig(**raw)
    validate(rc)
    return rc


def validate(rc: RunConfig) -> None:
    """Cross-field checks; building the experiment re-parses everything."""
    if rc.mode not in ("auto",) + MODES:
        raise ConfigError("mode", f"must be auto or one of {MODES}")
    if rc.scale not in SCALES:
        raise ConfigError("scale", f"must be one of {SCALES}")
    if rc.k_max < 1:
        raise ConfigError("k_max", "must be >= 1")
    if not math.isfinite(rc.theta) or rc.theta < 0:
        raise ConfigError("theta", "must be a finite angle >= 0")
    mode = rc.resolved_mode
    if mode == "mainthm" and (rc.chi_order == 1 or rc.psi_k % rc.p == 0):
        raise ConfigError("mode", "mainthm needs both characters nontrivial")
    if mode == "trivial_chi" and rc.chi_order != 1:
        raise ConfigError("mode", "trivial_chi needs chi_order = 1")
    if mode == "trivial_psi" and rc.psi_k % rc.p != 0:
        raise ConfigError("mode", "trivial_psi needs psi_k = 0")
    build_experiment(rc)


def build_experiment(rc: RunConfig) -> ExperimentConfig:
    try:
        F = make_field(rc.p)
    except HybridSumError as exc:
        raise ConfigError("p", str(exc)) from exc
    parsed = {}
    for key, parser in (("curve", parse_poly), ("g", parse_rational), ("f", parse_rational)):
        try:
            parsed[key] = parser(getattr(rc, key), F)
        except HybridSumError as exc:
            raise ConfigError(key, str(exc)) from exc
    if parsed["curve"].deg_y < 1:
        raise ConfigError("curve", "degree in y must be at least 1")
    try:
        chi = MultChar(F, rc.chi_order, rc.chi_power)
    except HybridSumError as exc:
        raise ConfigError("chi_order", str(exc)) from exc
    try:
        rect = Rectangle(rc.p, rc.I[0], rc.I[1], rc.J[0], rc.J[1], rc.H)
    except ValueError as exc:
        path = "H" if "H=" in str(exc) else ("I" if "I=" in str(exc) else "J")
        raise ConfigError(path, str(exc)) from exc
    return ExperimentConfig(F, parsed["curve"], parsed["g"], parsed["f"], chi,
                            AddChar(F, rc.psi_k), rect, float(rc.theta), rc.wrap, rc.scale)


def config_hash(rc: RunConfig) -> str:
    from .io import content_hash
    d = rc.to_dict()
    d.pop("out_dir", None)
    return content_hash(d)

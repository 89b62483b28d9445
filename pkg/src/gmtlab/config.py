"""Run configuration: JSON config file plus flag overrides (flags win)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

from .errors import ConfigError

SUITES = ("uniformity", "distributed", "identities", "sucp", "wucp", "dimension", "all")
FORMATS = ("json", "csv")

_KNOWN_KEYS = {
    "measure",
    "suite",
    "centers",
    "radii",
    "tol",
    "rel_tol",
    "h_tol",
    "flat_tol",
    "seed",
    "out",
    "format",
}

_MEASURE_PARAM_KEYS = {"k", "n_plus_1", "rho"}


@dataclass
class RunConfig:
    measure_label: str = "plane"
    measure_params: dict = field(default_factory=dict)
    suite: str = "all"
    centers: list | None = None  # None -> catalog defaults
    radii: list = field(default_factory=lambda: [0.25, 0.5, 1.0])
    tol: float = 1e-6
    rel_tol: float = 1e-8
    h_tol: float = 1e-8
    flat_tol: float = 1e-10
    seed: int = 0x5EED
    out: str | None = None
    format: str = "json"

    def validate(self) -> "RunConfig":
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {SUITES}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        for name in ("tol", "rel_tol", "h_tol", "flat_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        for r in self.radii:
            if not 0 < r <= 1:
                raise ConfigError(f"radius {r} outside (0, 1]")
        for key in self.measure_params:
            if key not in _MEASURE_PARAM_KEYS:
                raise ConfigError(f"unknown measure parameter {key!r}")
        return self

    def echo(self) -> dict:
        return asdict(self)


def parse_measure(text: str) -> tuple[str, dict]:
    """Parse 'sphere:k=2,rho=1' into a label and numeric parameters."""
    label, _, rest = text.partition(":")
    params: dict = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not val:
                raise ConfigError(f"bad measure parameter {item!r}")
            key = key.strip()
            params[key] = int(val) if key in ("k", "n_plus_1") else float(val)
    return label.strip(), params


def parse_centers(text: str) -> list[list[float]]:
    """Parse '0,0,-1;1,0,0' into a list of points."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append([float(v) for v in chunk.split(",")])
    return out


def load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path}: expected a JSON object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"config {path}: unknown keys {sorted(unknown)}")
    return raw


def build_config(file_values: dict | None, overrides: dict) -> RunConfig:
    """Merge config-file values with CLI flag overrides; flags win."""
    cfg = RunConfig()
    merged = dict(file_values or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    for key, value in merged.items():
        if key == "measure":
            label, params = parse_measure(value) if isinstance(value, str) else (
                value.get("label"),
                {k: v for k, v in value.items() if k != "label"},
            )
            cfg.measure_label = label
            cfg.measure_params = params
        elif key == "centers":
            cfg.centers = parse_centers(value) if isinstance(value, str) else value
        elif key == "radii":
            if isinstance(value, str):
                value = [float(v) for v in value.split(",")]
            cfg.radii = [float(v) for v in value]
        elif key in ("tol", "rel_tol", "h_tol", "flat_tol"):
            setattr(cfg, key, float(value))
        elif key == "seed":
            cfg.seed = int(value)
        elif key in ("suite", "out", "format"):
            setattr(cfg, key, value)
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    return cfg.validate()

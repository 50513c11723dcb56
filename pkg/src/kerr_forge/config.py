"""Run configuration from a flat ``key = value`` file, overridable by flags."""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .pulses import TrapConfig
from .wigner import REFERENCE_STEP, Region

ENV_VAR = "KERR_FORGE_CONFIG"

TRAP_KEYS = ("omega_c", "omega_r", "eta", "vib_coherence", "elec_coherence", "m_max")
KEYS = TRAP_KEYS + ("step", "half_width", "region", "fock_dim", "output_dir", "format", "workers")


class ConfigError(ValueError):
    pass


_ANGLE = re.compile(r"^\s*([+-]?[0-9.eE+-]*)\s*\*?\s*(pi)?\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_angle(text: str | float) -> float:
    """Float or multiple of pi: '1.2', 'pi', '2pi', '-pi/2', '3*pi/4'."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _ANGLE.match(text.lower())
    if not m or not (m.group(1) or m.group(2)):
        raise ConfigError(f"cannot parse angle {text!r}")
    coef, has_pi, den = m.groups()
    if coef in ("", "+", "-"):
        coef = coef + "1"
    val = float(coef) * (math.pi if has_pi else 1.0)
    return val / float(den) if den else val


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = val
    return out


@dataclass(frozen=True)
class RunConfig:
    trap: TrapConfig = field(default_factory=TrapConfig)
    step: float = REFERENCE_STEP
    half_width: float = 2.0
    region: Region | None = None
    fock_dim: int | None = None
    output_dir: Path = Path(".")
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if self.step <= 0:
            raise ConfigError("step must be positive")
        if self.half_width <= 0:
            raise ConfigError("half_width must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.fock_dim is not None and self.fock_dim < 1:
            raise ConfigError("fock_dim must be >= 1")

    def region_for(self, alpha: complex) -> Region:
        return self.region if self.region is not None else Region.square(alpha, self.half_width)

    @classmethod
    def from_mapping(cls, values: dict) -> RunConfig:
        v = {k: x for k, x in values.items() if x is not None}
        trap_kw = {}
        for k in TRAP_KEYS:
            if k in v:
                trap_kw[k] = int(v[k]) if k == "m_max" else float(v[k])
        kw = {"trap": TrapConfig(**trap_kw)}
        if "step" in v:
            kw["step"] = float(v["step"])
        if "half_width" in v:
            kw["half_width"] = float(v["half_width"])
        if "region" in v:
            r = v["region"]
            parts = [float(s) for s in r.split(",")] if isinstance(r, str) else list(r)
            if len(parts) != 4:
                raise ConfigError("region needs re_min,re_max,im_min,im_max")
            kw["region"] = Region(*parts)
        if "fock_dim" in v:
            kw["fock_dim"] = int(v["fock_dim"])
        if "output_dir" in v:
            kw["output_dir"] = Path(v["output_dir"])
        if "format" in v:
            kw["format"] = str(v["format"])
        if "workers" in v:
            kw["workers"] = int(v["workers"])
        return cls(**kw)


def load(config_path: str | None, overrides: dict) -> RunConfig:
    """Defaults < config file (explicit path or $KERR_FORGE_CONFIG) < overrides."""
    path = config_path or os.environ.get(ENV_VAR)
    values: dict = {}
    if path:
        values.update(read_config_file(path))
    values.update({k: x for k, x in overrides.items() if x is not None})
    try:
        return RunConfig.from_mapping(values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

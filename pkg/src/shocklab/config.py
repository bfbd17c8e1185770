"""Flat key-value run configuration.

Format: one ``key = value`` pair per line, ``#`` starts a comment, blank
lines ignored.  Unknown keys are errors so typos cannot silently change a
run.  Example::

    case = planar_shock
    scheme = hllem_fp1d
    r = 0.3333333333333333
    order = 1
    cfl = 0.5
    end_time = 55
    snapshot_every_iters = 500
    formats = csv,vtk
    out_dir = runs/planar
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cases import PRESETS
from .errors import ConfigError
from .riemann import FluxScheme

_SCHEME_NAMES = ("hlle", "hllem", "hllem_lm", "hllem_fp1d")
_FORMAT_NAMES = ("csv", "vtk")


@dataclass
class RunConfig:
    case: str
    scheme: str
    r: float = 1.0 / 3.0
    order: int = 1
    cfl: Optional[float] = None  # None -> use the preset's value
    end_time: Optional[float] = None
    max_iters: Optional[int] = None
    ni: Optional[int] = None
    nj: Optional[int] = None
    out_dir: str = "out"
    snapshot_every_iters: Optional[int] = None
    snapshot_every_time: Optional[float] = None
    formats: tuple = ("csv",)

    def flux_scheme(self) -> FluxScheme:
        return FluxScheme.from_name(self.scheme, self.r)


_PARSERS = {
    "case": str,
    "scheme": str,
    "r": float,
    "order": int,
    "cfl": float,
    "end_time": float,
    "max_iters": int,
    "ni": int,
    "nj": int,
    "out_dir": str,
    "snapshot_every_iters": int,
    "snapshot_every_time": float,
    "formats": lambda s: tuple(x.strip() for x in s.split(",") if x.strip()),
}


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration; raises ConfigError with the
    offending line number and key."""
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _PARSERS:
            raise ConfigError("unknown configuration key", line=lineno, key=key)
        if key in values:
            raise ConfigError("duplicate key", line=lineno, key=key)
        try:
            values[key] = _PARSERS[key](val)
        except ValueError:
            raise ConfigError(f"cannot parse value {val!r}", line=lineno, key=key) from None
        lines[key] = lineno

    def bad(key, message):
        return ConfigError(message, line=lines.get(key), key=key)

    if "case" not in values:
        raise ConfigError("missing required key", key="case")
    if "scheme" not in values:
        raise ConfigError("missing required key", key="scheme")
    cfg = RunConfig(**values)

    if cfg.case not in PRESETS:
        raise bad("case", f"unknown case preset '{cfg.case}'")
    if cfg.scheme not in _SCHEME_NAMES:
        raise bad("scheme", f"scheme must be one of {_SCHEME_NAMES}")
    if not 0.0 < cfg.r <= 1.0:
        raise bad("r", "exponent r must lie in (0, 1]")
    if cfg.order not in (1, 2):
        raise bad("order", "order must be 1 or 2")
    if cfg.cfl is not None and not 0.0 < cfg.cfl <= 1.0:
        raise bad("cfl", "cfl must lie in (0, 1]")
    if cfg.end_time is not None and cfg.end_time <= 0.0:
        raise bad("end_time", "end_time must be positive")
    if cfg.max_iters is not None and cfg.max_iters <= 0:
        raise bad("max_iters", "max_iters must be positive")
    for key in ("ni", "nj"):
        if getattr(cfg, key) is not None and getattr(cfg, key) < 1:
            raise bad(key, f"{key} must be at least 1")
    if cfg.snapshot_every_iters is not None and cfg.snapshot_every_iters <= 0:
        raise bad("snapshot_every_iters", "snapshot cadence must be positive")
    if cfg.snapshot_every_time is not None and cfg.snapshot_every_time <= 0.0:
        raise bad("snapshot_every_time", "snapshot cadence must be positive")
    unknown_formats = set(cfg.formats) - set(_FORMAT_NAMES)
    if unknown_formats:
        raise bad("formats", f"unknown formats {sorted(unknown_formats)}")
    if not cfg.formats:
        raise bad("formats", "at least one output format is required")
    return cfg


def serialize_config(cfg: RunConfig) -> str:
    """Inverse of parse_config: parse(serialize(cfg)) == cfg."""
    out = [f"case = {cfg.case}", f"scheme = {cfg.scheme}"]
    out.append(f"r = {cfg.r!r}")
    out.append(f"order = {cfg.order}")
    for key in ("cfl", "end_time", "snapshot_every_time"):
        val = getattr(cfg, key)
        if val is not None:
            out.append(f"{key} = {val!r}")
    for key in ("max_iters", "ni", "nj", "snapshot_every_iters"):
        val = getattr(cfg, key)
        if val is not None:
            out.append(f"{key} = {val}")
    out.append(f"out_dir = {cfg.out_dir}")
    out.append("formats = " + ",".join(cfg.formats))
    return "\n".join(out) + "\n"

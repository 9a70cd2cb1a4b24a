"""``key = value`` run configuration files.

Blank lines and ``#`` comments are ignored; unknown or repeated keys are
errors.  Lists (``snapshot_times``) are comma separated.  ``ic_mode`` is one
of ``uniform_box``, ``steady`` or ``steady_times(<scale>)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ParseError, ValidationError
from .grid import Grid, State
from .integrate import Scheme, SchemeConfig, random_ic
from .model import Params, steady_state

REQUIRED = ("a", "b", "alpha", "beta", "gamma", "rho", "k", "nx", "ny", "lx", "ly", "t_end")
IC_MODES = ("uniform_box", "steady", "steady_times")
COLORMAPS = ("gray", "heat")

_IC_RE = re.compile(r"^steady_times\(\s*([^)]+?)\s*\)$")


@dataclass(frozen=True)
class RunConfig:
    a: float
    b: float
    alpha: float
    beta: float
    gamma: float
    rho: float
    k: float
    nx: int
    ny: int
    lx: float
    ly: float
    t_end: float
    dt: float = 0.01
    snapshot_times: tuple = ()
    scheme: str = "imex"
    seed: int = 0
    ic_mode: str = "uniform_box"
    ic_scale: float = 1.0
    u_lo: float | None = None
    u_hi: float | None = None
    v_lo: float | None = None
    v_hi: float | None = None
    out_dir: str = "out"
    burn_in: float = 20.0
    colormap: str = "gray"

    def __post_init__(self):
        # constructing these runs their invariant checks
        self.params()
        self.grid()
        self.scheme_config()
        if self.seed < 0:
            raise ValidationError("seed must be nonnegative")
        if self.ic_mode not in IC_MODES:
            raise ValidationError(f"ic_mode must be one of {IC_MODES} (got {self.ic_mode!r})")
        if self.ic_mode == "steady_times" and not self.ic_scale > 0:
            raise ValidationError("steady_times scale must be positive")
        if self.ic_mode == "uniform_box":
            bounds = (self.u_lo, self.u_hi, self.v_lo, self.v_hi)
            if any(b is None for b in bounds):
                raise ValidationError("uniform_box needs u_lo, u_hi, v_lo, v_hi")
            if not (self.u_lo < self.u_hi and self.v_lo < self.v_hi):
                raise ValidationError("uniform_box bounds need lo < hi")
        if not self.burn_in >= 0:
            raise ValidationError("burn_in must be nonnegative")
        if self.colormap not in COLORMAPS:
            raise ValidationError(f"colormap must be one of {COLORMAPS}")

    def params(self) -> Params:
        return Params(self.a, self.b, self.alpha, self.beta, self.gamma, self.rho, self.k)

    def grid(self) -> Grid:
        return Grid(self.nx, self.ny, self.lx, self.ly)

    def scheme_config(self) -> SchemeConfig:
        try:
            scheme = Scheme(self.scheme)
        except ValueError:
            raise ValidationError(f"scheme must be imex or etd (got {self.scheme!r})") from None
        return SchemeConfig(scheme, self.dt, self.t_end, self.snapshot_times)

    def initial_state(self) -> State:
        grid = self.grid()
        if self.ic_mode == "uniform_box":
            return random_ic(grid, self.u_lo, self.u_hi, self.v_lo, self.v_hi, self.seed)
        us, vs = steady_state(self.params())
        scale = self.ic_scale if self.ic_mode == "steady_times" else 1.0
        return State.constant(grid, scale * us, scale * vs)


_INT_KEYS = {"nx", "ny", "seed"}
_STR_KEYS = {"scheme", "ic_mode", "out_dir", "colormap"}
_OPTIONAL_FLOAT = {"u_lo", "u_hi", "v_lo", "v_hi"}
_KNOWN = {f.name for f in fields(RunConfig)} - {"ic_scale"}


def _convert(key, raw, lineno):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _STR_KEYS:
            return raw
        if key == "snapshot_times":
            return tuple(float(s) for s in raw.split(",") if s.strip())
        return float(raw)
    except ValueError:
        raise ParseError(f"bad value for {key}: {raw!r}", lineno) from None


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno)
        if key == "ic_mode":
            m = _IC_RE.match(raw)
            if m:
                values["ic_scale"] = _convert("ic_scale", m.group(1), lineno)
                raw = "steady_times"
        values[key] = _convert(key, raw, lineno)

    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ValidationError(f"missing required keys: {', '.join(missing)}")
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def render_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(cfg):
        key, value = f.name, getattr(cfg, f.name)
        if key == "ic_scale" or value is None:
            continue
        if key == "ic_mode" and value == "steady_times":
            value = f"steady_times({cfg.ic_scale!r})"
        elif key == "snapshot_times":
            value = ", ".join(repr(t) for t in value)
            if not value:
                continue
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"

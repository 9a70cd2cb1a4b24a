"""Thomas kinetics for the Murray coat model and bounds on its nonlinearity.

The system on a rectangle with zero-flux boundaries is::

    u_t = lap(u)         + gamma (a - u - rho h(u, v))
    v_t = alpha lap(v)   + gamma (beta (b - v) - rho h(u, v))
    h(u, v) = u v / (1 + u + k u^2)

``thomas_h`` returns the full consumption rate ``gamma rho h``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np

from .errors import NoBracket, ValidationError
from .grid import Grid, State, check_state, l2_norm, sup_norm


@dataclass(frozen=True)
class Params:
    a: float
    b: float
    alpha: float
    beta: float
    gamma: float
    rho: float
    k: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not np.isfinite(value):
                raise ValidationError(f"params: {f.name} must be finite (got {value})")
        for name in ("a", "b", "beta", "gamma"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"params: {name} > 0 required (got {getattr(self, name)})")
        # rho = 0 decouples the species; allowed as a degenerate control case
        if self.rho < 0:
            raise ValidationError(f"params: rho >= 0 required (got {self.rho})")
        if self.k < 0:
            raise ValidationError(f"params: k >= 0 required (got {self.k})")
        if not self.alpha > 1:
            raise ValidationError(f"params: alpha > 1 required (got {self.alpha})")

    @classmethod
    def fig1(cls) -> "Params":
        """Constants of the published two-dimensional coat-pattern run."""
        return cls(a=103.0, b=77.0, alpha=7.0, beta=1.5, gamma=15.0, rho=13.0, k=0.125)


class KineticsValue(NamedTuple):
    fu: np.ndarray | float
    fv: np.ndarray | float


def thomas_h(u, v, p: Params):
    return p.gamma * p.rho * u * v / (1.0 + u + p.k * u * u)


def reaction_full(u, v, p: Params) -> KineticsValue:
    h = thomas_h(u, v, p)
    return KineticsValue(p.gamma * (p.a - u) - h, p.gamma * p.beta * (p.b - v) - h)


def reaction_split(u, v, p: Params) -> KineticsValue:
    """Nonlinear part left after moving the linear decay into ``A``.

    Absolute values make the map globally defined for signed inputs; on the
    nonnegative orthant it equals ``reaction_full + (gamma u, gamma beta v)``.
    """
    au = np.abs(u)
    denom = 1.0 + au + p.k * u * u
    c = p.gamma * p.rho
    return KineticsValue(
        p.gamma * p.a - c * u * np.abs(v) / denom,
        p.gamma * p.beta * p.b - c * au * v / denom,
    )


def _stationarity_residual(u, p: Params):
    # subtracting the two stationarity equations gives v = b - (a - u) / beta
    v = p.b - (p.a - u) / p.beta
    return reaction_full(u, v, p).fu


def steady_state(p: Params, tol: float = 1e-10, n_scan: int = 1024, max_iter: int = 200):
    """Positive homogeneous equilibrium ``(u*, v*)``.

    Scans ``u`` over ``n_scan`` uniform points of ``(0, a]``, takes the first
    sign change and bisects it.  Raises :class:`NoBracket` when the residual
    never changes sign.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    us = p.a * np.arange(1, n_scan + 1) / n_scan
    r = _stationarity_residual(us, p)

    def finish(u):
        v = p.b - (p.a - u) / p.beta
        if not (u > 0 and v > 0):
            raise NoBracket(f"equilibrium ({u}, {v}) is not positive")
        return float(u), float(v)

    for i in range(n_scan):
        if r[i] == 0.0:
            return finish(us[i])
        if i + 1 < n_scan and np.sign(r[i]) != np.sign(r[i + 1]):
            lo, hi = us[i], us[i + 1]
            break
    else:
        raise NoBracket(f"no sign change of the stationarity residual on (0, {p.a}]")

    r_lo = _stationarity_residual(lo, p)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        r_mid = _stationarity_residual(mid, p)
        if r_mid == 0.0:
            lo = hi = mid
            break
        if np.sign(r_mid) == np.sign(r_lo):
            lo, r_lo = mid, r_mid
        else:
            hi = mid
    # pick whichever end has the smaller residual
    u = min((lo, hi), key=lambda s: abs(_stationarity_residual(s, p)))
    return finish(u)


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    holds: bool


def _nonlinearity_norm(fu, fv, grid: Grid) -> float:
    fu = np.broadcast_to(fu, grid.shape)
    fv = np.broadcast_to(fv, grid.shape)
    return l2_norm(State(fu, fv), grid)


def lipschitz_bound_check(x: State, y: State, grid: Grid, p: Params) -> BoundReport:
    """Compare ``||F(x) - F(y)||`` with the local Lipschitz bound
    ``sqrt(2) gamma rho max(k+1, 4) (1 + |x|_inf + |y|_inf) ||x - y||``."""
    x = check_state(x, grid)
    y = check_state(y, grid)
    fx = reaction_split(x.u, x.v, p)
    fy = reaction_split(y.u, y.v, p)
    lhs = _nonlinearity_norm(fx.fu - fy.fu, fx.fv - fy.fv, grid)
    const = np.sqrt(2.0) * p.gamma * p.rho * max(p.k + 1.0, 4.0)
    rhs = const * (1.0 + sup_norm(x) + sup_norm(y)) * l2_norm(x - y, grid)
    return BoundReport(lhs, float(rhs), bool(lhs <= rhs * (1 + 1e-12)))


def growth_bound_check(x: State, grid: Grid, p: Params) -> BoundReport:
    """Compare ``||F(x)||`` with ``sqrt(2) gamma (max(a, gamma b) Vol + rho ||x||)``."""
    x = check_state(x, grid)
    f = reaction_split(x.u, x.v, p)
    lhs = _nonlinearity_norm(f.fu, f.fv, grid)
    rhs = np.sqrt(2.0) * p.gamma * (max(p.a, p.gamma * p.b) * grid.volume + p.rho * l2_norm(x, grid))
    return BoundReport(lhs, float(rhs), bool(lhs <= rhs * (1 + 1e-12)))

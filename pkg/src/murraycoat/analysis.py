"""Numerical checks of the qualitative theory: positivity, energy decay,
continuous dependence on data, spectral squeezing and the dimension bound
of the exponential attractor."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .diagnostics import DiagnosticsRecord, a_norm, diagnose, negative_part_energy
from .errors import DomainError, EmptyTrajectory, InsufficientData
from .grid import Grid, SpectralOperator, State, check_state, dct2_forward, l2_norm
from .integrate import SchemeConfig, Trajectory, simulate
from .model import Params

__all__ = [
    "DiagnosticsRecord",
    "EnergyReport",
    "DependenceReport",
    "SqueezeReport",
    "a_norm",
    "diagnose",
    "negative_part_energy",
    "energy_decay_rate",
    "energy_inequality_check",
    "continuous_dependence_experiment",
    "squeeze_diagnostic",
    "squeeze_profile",
    "minimal_squeeze_rank",
    "fractal_dimension_bound",
    "absorbing_radius_estimate",
]


def energy_decay_rate(p: Params) -> float:
    """``gamma* = min(gamma, gamma beta) / 2``."""
    return min(p.gamma, p.gamma * p.beta) / 2.0


@dataclass(frozen=True)
class EnergyReport:
    gamma_star: float
    c_hat: float
    band: float
    sup_energy: float
    bounded: bool


def energy_inequality_check(traj: Trajectory, p: Params, margin: float = 0.1) -> EnergyReport:
    """Fit the smallest ``C`` with

        E(t) <= exp(-2 g* (t - s)) E(s) + C (1 - exp(-2 g* (t - s))) / (2 g*)

    over all snapshot pairs ``s < t``, where ``E = ||u||^2 + ||v||^2``.

    ``bounded`` requires a finite supremum of ``E`` and ``E`` non-increasing
    between consecutive snapshots while it sits above the band
    ``C / (2 g*) (1 + margin)``.
    """
    if len(traj.diagnostics) < 2:
        raise EmptyTrajectory("energy check needs at least two snapshots")
    gs = energy_decay_rate(p)
    t = traj.column("t")
    e = traj.column("norm_x") ** 2

    dt = t[None, :] - t[:, None]
    mask = dt > 0
    decay = np.exp(-2.0 * gs * np.where(mask, dt, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        need = 2.0 * gs * (e[None, :] - decay * e[:, None]) / (1.0 - decay)
    c_hat = float(max(0.0, np.max(need[mask]))) if mask.any() else 0.0

    band = c_hat / (2.0 * gs) * (1.0 + margin)
    sup_e = float(np.max(e))
    above = e[:-1] > band
    monotone = np.all(e[1:][above] <= e[:-1][above] * (1 + 1e-12))
    bounded = bool(np.isfinite(sup_e) and np.isfinite(c_hat) and monotone)
    return EnergyReport(gs, c_hat, c_hat / (2.0 * gs), sup_e, bounded)


@dataclass(frozen=True)
class DependenceReport:
    eps: tuple
    distances: tuple
    ratios: tuple
    lipschitz_constant: float
    consistent: bool


def continuous_dependence_experiment(x0: State, direction: State, eps_list, t: float,
                                     cfg: SchemeConfig, grid: Grid, sop: SpectralOperator,
                                     p: Params, rel_tol: float = 0.1) -> DependenceReport:
    """Distance at time ``t`` between runs from ``x0`` and ``x0 + eps * direction``."""
    eps_list = [float(e) for e in eps_list]
    if len(eps_list) < 3 or any(e <= 0 for e in eps_list) or any(
            b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list needs at least three strictly decreasing positive entries")
    x0 = check_state(x0, grid)
    direction = check_state(direction, grid)
    run_cfg = replace(cfg, t_end=float(t), snapshot_times=())

    base = simulate(x0, run_cfg, grid, sop, p).final
    distances = []
    for eps in eps_list:
        pert = simulate(x0 + direction.scale(eps), run_cfg, grid, sop, p).final
        distances.append(l2_norm(pert - base, grid))
    ratios = [d / e for d, e in zip(distances, eps_list)]
    k = max(ratios)
    if k == 0.0:
        consistent = True
    else:
        consistent = (max(ratios) - min(ratios)) <= rel_tol * min(ratios)
    consistent = bool(consistent and all(d <= k * e * (1 + 1e-12) for d, e in zip(distances, eps_list)))
    return DependenceReport(tuple(eps_list), tuple(distances), tuple(ratios), k, consistent)


@dataclass(frozen=True)
class SqueezeReport:
    rank: int
    head: float
    tail: float
    contraction: float

    @property
    def squeezed(self) -> bool:
        """Difference energy concentrates in the leading ``rank`` modes."""
        return self.tail <= self.head

    def contracts(self, delta: float) -> bool:
        return self.contraction <= delta


def squeeze_profile(diff: State, grid: Grid, sop: SpectralOperator) -> np.ndarray:
    """Squared energy of ``diff`` per (mode, component), in ``sop.triple_order``."""
    diff = check_state(diff, grid)
    c = np.stack((dct2_forward(diff.u, grid), dct2_forward(diff.v, grid)))
    order = sop.triple_order
    return grid.w * c[order[:, 2], order[:, 0], order[:, 1]] ** 2


def _evolve_pair(x0, y0, t0, cfg, grid, sop, p):
    run_cfg = replace(cfg, t_end=float(t0), snapshot_times=())
    return simulate(x0, run_cfg, grid, sop, p).final, simulate(y0, run_cfg, grid, sop, p).final


def squeeze_diagnostic(x0: State, y0: State, t0: float, N: int, cfg: SchemeConfig,
                       grid: Grid, sop: SpectralOperator, p: Params) -> SqueezeReport:
    """Split ``S(t0) x0 - S(t0) y0`` into its first ``N`` eigenmodes and the rest."""
    if N < 0:
        raise ValueError("rank N must be nonnegative")
    x0 = check_state(x0, grid)
    y0 = check_state(y0, grid)
    d0 = l2_norm(x0 - y0, grid)
    if d0 == 0.0:
        raise ValueError("x0 and y0 must differ")
    xt, yt = _evolve_pair(x0, y0, t0, cfg, grid, sop, p)
    prof = squeeze_profile(xt - yt, grid, sop)
    head = float(np.sqrt(np.sum(prof[:N])))
    tail = float(np.sqrt(np.sum(prof[N:])))
    return SqueezeReport(int(N), head, tail, l2_norm(xt - yt, grid) / d0)


def minimal_squeeze_rank(pairs, t0: float, cfg: SchemeConfig, grid: Grid,
                         sop: SpectralOperator, p: Params):
    """Smallest rank with ``tail <= head`` for every pair.

    Returns ``(n_star, per_pair_ranks, contractions)``.
    """
    ranks, contractions = [], []
    for x0, y0 in pairs:
        xt, yt = _evolve_pair(check_state(x0, grid), check_state(y0, grid), t0, cfg, grid, sop, p)
        prof = squeeze_profile(xt - yt, grid, sop)
        total = prof.sum()
        head2 = np.concatenate(([0.0], np.cumsum(prof)))
        tail2 = total - head2
        ranks.append(int(np.argmax(tail2 <= head2)))
        contractions.append(l2_norm(xt - yt, grid) / l2_norm(x0 - y0, grid))
    return max(ranks), ranks, contractions


def fractal_dimension_bound(delta: float, N: int, L: float, theta: float) -> float:
    """``1 + N max(-log(3 L / theta + 1) / log(2 delta + theta), 1)``."""
    if not 0 < delta < 0.25:
        raise DomainError(f"need 0 < delta < 1/4 (got {delta})")
    if not 0 < theta < 1 - 2 * delta:
        raise DomainError(f"need 0 < theta < 1 - 2 delta (got theta={theta}, delta={delta})")
    if not L > 0:
        raise DomainError(f"need L > 0 (got {L})")
    if int(N) != N or N < 0:
        raise DomainError(f"N must be a nonnegative integer (got {N})")
    slope = max(-math.log(3 * L / theta + 1) / math.log(2 * delta + theta), 1.0)
    return 1.0 + int(N) * slope


def absorbing_radius_estimate(traj: Trajectory, burn_in: float, quantity: str = "a_norm") -> float:
    """Largest ``quantity`` (default ``||A X||``) over snapshots with ``t >= burn_in``."""
    vals = [getattr(r, quantity) for r in traj.diagnostics if r.t >= burn_in]
    if not vals:
        raise InsufficientData(f"no snapshots at or after burn_in={burn_in}")
    return float(max(vals))

"""Per-snapshot diagnostics recorded by the simulation driver."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

from .grid import Grid, SpectralOperator, State, check_field, dct2_forward, l2_norm


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    norm_x: float
    min_u: float
    min_v: float
    max_u: float
    max_v: float
    std_u: float
    neg_energy_u: float
    neg_energy_v: float
    a_norm: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def values(self) -> tuple:
        return astuple(self)


def negative_part_energy(f, grid: Grid) -> float:
    """Quadrature of ``H(f)`` with ``H(s) = s^2 / 2`` for ``s < 0``, else 0."""
    f = check_field(f, grid)
    neg = np.minimum(f, 0.0)
    return float(grid.w * np.sum(0.5 * neg * neg))


def a_norm(x: State, grid: Grid, sop: SpectralOperator) -> float:
    """Discrete ``||A X||`` evaluated in the cosine basis."""
    cu = dct2_forward(x.u, grid)
    cv = dct2_forward(x.v, grid)
    s = np.sum((sop.lam_u * cu) ** 2) + np.sum((sop.lam_v * cv) ** 2)
    return float(np.sqrt(grid.w * s))


def diagnose(t: float, x: State, grid: Grid, sop: SpectralOperator) -> DiagnosticsRecord:
    return DiagnosticsRecord(
        t=float(t),
        norm_x=l2_norm(x, grid),
        min_u=float(np.min(x.u)),
        min_v=float(np.min(x.v)),
        max_u=float(np.max(x.u)),
        max_v=float(np.max(x.v)),
        std_u=float(np.std(x.u)),
        neg_energy_u=negative_part_energy(x.u, grid),
        neg_energy_v=negative_part_energy(x.v, grid),
        a_norm=a_norm(x, grid, sop),
    )

"""Cell-centred rectangle discretisation with zero-flux (Neumann) boundaries.

Fields are numpy arrays of shape ``(ny, nx)``: axis 0 runs along y, axis 1
along x, so a row-major flatten walks x fastest.  Cell ``(j, i)`` has centre
``((i + 1/2) hx, (j + 1/2) hy)``.

The 5-point Laplacian with ghost cells equal to the adjacent boundary cell is
diagonalised exactly by the DCT-II basis ``cos(m pi (i + 1/2) / nx)``, whose
eigenvalues are ``-(2/hx^2)(1 - cos(m pi / nx))`` per axis.  Both time
integrators share that operator through :class:`SpectralOperator`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from scipy.fft import dctn, idctn

from .errors import ShapeMismatch, ValidationError

if TYPE_CHECKING:
    from .model import Params


@dataclass(frozen=True)
class Grid:
    nx: int
    ny: int
    lx: float
    ly: float

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValidationError("grid: nx and ny must be integers")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))
        if self.nx < 2 or self.ny < 2:
            raise ValidationError(f"grid: need nx, ny >= 2 (got {self.nx}, {self.ny})")
        if not (self.lx > 0 and self.ly > 0 and np.isfinite(self.lx) and np.isfinite(self.ly)):
            raise ValidationError(f"grid: need lx, ly > 0 (got {self.lx}, {self.ly})")

    @property
    def hx(self) -> float:
        return self.lx / self.nx

    @property
    def hy(self) -> float:
        return self.ly / self.ny

    @property
    def w(self) -> float:
        """Quadrature weight of one cell."""
        return self.hx * self.hy

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def volume(self) -> float:
        return self.lx * self.ly

    def cell_centres(self):
        x = (np.arange(self.nx) + 0.5) * self.hx
        y = (np.arange(self.ny) + 0.5) * self.hy
        return np.meshgrid(x, y)

    def full(self, value) -> np.ndarray:
        return np.full(self.shape, float(value))


class State(NamedTuple):
    """Activator ``u`` and inhibitor ``v`` on a common grid."""

    u: np.ndarray
    v: np.ndarray

    def __add__(self, other):
        return State(self.u + other.u, self.v + other.v)

    def __sub__(self, other):
        return State(self.u - other.u, self.v - other.v)

    def scale(self, factor: float) -> "State":
        return State(factor * self.u, factor * self.v)

    @classmethod
    def constant(cls, grid: Grid, u: float, v: float) -> "State":
        return cls(grid.full(u), grid.full(v))


def check_field(f, grid: Grid, name: str = "field") -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != grid.shape:
        raise ShapeMismatch(f"{name} has shape {f.shape}, grid expects {grid.shape}")
    return f


def check_state(x: State, grid: Grid) -> State:
    return State(check_field(x.u, grid, "u"), check_field(x.v, grid, "v"))


def laplacian_neumann(f, grid: Grid) -> np.ndarray:
    """5-point Laplacian with cell-centred zero-flux closure."""
    f = check_field(f, grid)
    # ghost value = boundary cell, so the face flux vanishes
    p = np.pad(f, 1, mode="edge")
    c = p[1:-1, 1:-1]
    d2x = (p[1:-1, 2:] - 2.0 * c + p[1:-1, :-2]) / grid.hx**2
    d2y = (p[2:, 1:-1] - 2.0 * c + p[:-2, 1:-1]) / grid.hy**2
    return d2x + d2y


def stencil_symbol(n: int, h: float) -> np.ndarray:
    """Eigenvalues of the negated 1-D Neumann stencil, modes 0..n-1."""
    return (2.0 / h**2) * (1.0 - np.cos(np.pi * np.arange(n) / n))


@dataclass(frozen=True)
class SpectralOperator:
    """Eigenvalues of ``A = diag(-lap + gamma, -alpha lap + gamma beta)``.

    ``lam_u`` and ``lam_v`` have the coefficient layout ``(ny, nx)``; entry
    ``[q, p]`` belongs to the cosine mode with ``q`` half-waves along y and
    ``p`` along x.  ``mode_order`` lists ``(q, p)`` pairs ascending by
    ``min(lam_u, lam_v)``; ``triple_order`` lists ``(q, p, component)``
    ascending by that component's own eigenvalue (component 0 is u).  Ties
    fall back to lexicographic order of the indices.
    """

    lam_u: np.ndarray
    lam_v: np.ndarray
    mode_order: np.ndarray = field(repr=False)
    triple_order: np.ndarray = field(repr=False)

    @classmethod
    def from_eigenvalues(cls, lam_u, lam_v) -> "SpectralOperator":
        lam_u = np.asarray(lam_u, dtype=float)
        lam_v = np.asarray(lam_v, dtype=float)
        ny, nx = lam_u.shape
        q, p = np.indices((ny, nx))
        q, p = q.ravel(), p.ravel()
        key = np.minimum(lam_u, lam_v).ravel()
        idx = np.lexsort((p, q, key))
        mode_order = np.column_stack((q[idx], p[idx]))

        qq = np.concatenate((q, q))
        pp = np.concatenate((p, p))
        comp = np.repeat([0, 1], q.size)
        lam = np.concatenate((lam_u.ravel(), lam_v.ravel()))
        idx = np.lexsort((comp, pp, qq, lam))
        triple_order = np.column_stack((qq[idx], pp[idx], comp[idx]))
        return cls(lam_u, lam_v, mode_order, triple_order)

    @property
    def shape(self):
        return self.lam_u.shape

    @property
    def n_modes(self) -> int:
        """Number of (mode, component) triples, i.e. the dimension of E_h."""
        return 2 * self.lam_u.size

    def sorted_eigenvalues(self) -> np.ndarray:
        t = self.triple_order
        lam = np.stack((self.lam_u, self.lam_v))
        return lam[t[:, 2], t[:, 0], t[:, 1]]


def build_spectral_operator(grid: Grid, p: "Params") -> SpectralOperator:
    mu = stencil_symbol(grid.ny, grid.hy)[:, None] + stencil_symbol(grid.nx, grid.hx)[None, :]
    lam_u = mu + p.gamma
    lam_v = p.alpha * mu + p.gamma * p.beta
    return SpectralOperator.from_eigenvalues(lam_u, lam_v)


def dct2_forward(f, grid: Grid) -> np.ndarray:
    """Coefficients of ``f`` in the orthonormal tensor cosine basis."""
    return dctn(check_field(f, grid), type=2, norm="ortho")


def dct2_inverse(c, grid: Grid) -> np.ndarray:
    return idctn(check_field(c, grid, "coefficients"), type=2, norm="ortho")


def cosine_mode(grid: Grid, p: int, q: int) -> np.ndarray:
    """Unnormalised cosine mode with ``p`` half-waves in x and ``q`` in y."""
    i = np.arange(grid.nx)
    j = np.arange(grid.ny)
    return np.outer(np.cos(q * np.pi * (j + 0.5) / grid.ny), np.cos(p * np.pi * (i + 0.5) / grid.nx))


def inner(f, g, grid: Grid) -> float:
    return grid.w * float(np.sum(check_field(f, grid) * check_field(g, grid)))


def field_norm(f, grid: Grid) -> float:
    f = check_field(f, grid)
    return float(np.sqrt(grid.w * np.sum(f * f)))


def l2_norm(x: State, grid: Grid) -> float:
    """``sqrt(||u||^2 + ||v||^2)`` with midpoint quadrature."""
    x = check_state(x, grid)
    return float(np.sqrt(grid.w * (np.sum(x.u * x.u) + np.sum(x.v * x.v))))


def sup_norm(x: State) -> float:
    return float(max(np.max(np.abs(x.u)), np.max(np.abs(x.v))))

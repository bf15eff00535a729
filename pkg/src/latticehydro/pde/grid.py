"""Uniform space-time grids for the explicit solvers.

Cell-centered finite volumes: cells i = 0..n_cells-1 with centers
u_lo + (i + 1/2) du.  Explicit first-order time stepping; the stability
bounds below are hard validation limits, default grids are built with a
stricter safety factor so the schemes are also monotone (the Dirichlet
boundary cell carries an effective 3/2 stiffness factor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError

#: hard stability limits (validated); see module docstring
DISSIPATIVE_CFL = 0.9
EXCLUSION_CFL = 0.9
#: default safety used when building grids (monotone schemes)
DEFAULT_SAFETY = 0.6

_REL_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class Grid:
    """Space interval, spacing, time step and horizon of one solve."""

    u_lo: float
    u_hi: float
    du: float
    dt: float
    T: float

    def __post_init__(self) -> None:
        if not (self.u_hi > self.u_lo and self.du > 0 and self.dt > 0 and self.T > 0):
            raise ConfigurationError("grid extents, du, dt and T must be positive")
        if abs(self.n_cells * self.du - (self.u_hi - self.u_lo)) > 1e-9 * self.du:
            raise ConfigurationError("du must divide the space interval")
        if abs(self.n_steps * self.dt - self.T) > 1e-9 * self.dt:
            raise ConfigurationError("dt must divide the horizon T")

    @property
    def n_cells(self) -> int:
        return int(round((self.u_hi - self.u_lo) / self.du))

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    @property
    def centers(self) -> np.ndarray:
        return self.u_lo + (np.arange(self.n_cells) + 0.5) * self.du

    @property
    def faces(self) -> np.ndarray:
        return self.u_lo + np.arange(self.n_cells + 1) * self.du

    def step_index(self, t: float) -> int:
        """Index of the time step landing on t (must align with the grid)."""
        k = int(round(t / self.dt))
        if not 0 <= k <= self.n_steps or abs(k * self.dt - t) > 1e-9 * max(1.0, self.T):
            raise ConfigurationError(f"time {t} does not align with the time grid")
        return k

    def validate_dissipative(self) -> None:
        """Stability bound for the nonlinear diffusion solver (sup phi' = 1)."""
        if self.dt > DISSIPATIVE_CFL * self.du**2 * _REL_SLACK:
            raise ConfigurationError(
                f"dt={self.dt:g} violates dt <= {DISSIPATIVE_CFL}*du^2={DISSIPATIVE_CFL * self.du ** 2:g}"
            )

    def validate_exclusion(self, a_max: float) -> None:
        """Stability bound for the drift-diffusion solver."""
        limit = EXCLUSION_CFL * self.du**2 / (1.0 + max(a_max, 0.0) * self.du)
        if self.dt > limit * _REL_SLACK:
            raise ConfigurationError(
                f"dt={self.dt:g} violates dt <= 0.9*du^2/(1+a*du)={limit:g} (a_max={a_max:g})"
            )


def make_grid(
    u_lo: float,
    u_hi: float,
    du: float,
    T: float,
    n_saves: int = 1,
    a_bound: float = 0.0,
    safety: float = DEFAULT_SAFETY,
) -> tuple[Grid, np.ndarray]:
    """Build a stable grid whose steps land exactly on ``n_saves`` save times.

    ``a_bound`` is an a priori bound on the drift/boundary-flux magnitude
    (for the drift solver pass ``phi(rho_max)/du``).  Returns the grid and
    the aligned save times ``linspace(0, T, n_saves + 1)``.
    """
    if n_saves < 1:
        raise ConfigurationError("need at least one save interval")
    dt_max = safety * du**2 / (1.0 + max(a_bound, 0.0) * du)
    per_save = max(1, int(np.ceil((T / n_saves) / dt_max - 1e-12)))
    dt = (T / n_saves) / per_save
    grid = Grid(u_lo, u_hi, du, dt, T)
    return grid, np.linspace(0.0, T, n_saves + 1)

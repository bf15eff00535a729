"""Transforms between the exclusion profile, the gap density, and heights.

``M(t, A) = int_0^A zeta(t, u) du`` counts transported particle volume; its
inverse locates the A-th particle, so the right-half gap density is

    rho(t, u) = 1 / zeta(t, M^{-1}(t, u)) - 1,        u > 0,

and the macroscopic height profile is ``lambda(t, u) = int_0^u rho(t, v) dv``
(signed on the left half so that d_u lambda = rho).
"""

from __future__ import annotations

import numpy as np

from ..errors import TransformError
from .solvers import PdeSolution

__all__ = ["transform_zeta_to_rho", "integrate_lambda", "v_truncated"]


def transform_zeta_to_rho(
    zeta_solution: PdeSolution,
    u_points: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Map a zeta solution to the right-half gap density at its save times.

    Returns ``(u_points, rho)`` with ``rho`` of shape (n_saves, len(u_points));
    entries beyond the transported volume ``M(t, u_max)`` are NaN.
    """
    if zeta_solution.field_name != "zeta":
        raise TransformError("transform expects an exclusion-profile solution")
    grid = zeta_solution.grid
    centers = grid.centers
    if u_points is None:
        u_points = centers.copy()
    u_points = np.asarray(u_points, dtype=float)
    out = np.full((zeta_solution.profiles.shape[0], u_points.size), np.nan)
    for s, zeta in enumerate(zeta_solution.profiles):
        if np.any(zeta <= 0):
            raise TransformError("zeta must be strictly positive on the grid")
        # trapezoid cumulative from the origin (half cell up to the first center)
        m = np.empty(centers.size)
        m[0] = zeta[0] * grid.du / 2.0
        m[1:] = m[0] + np.cumsum((zeta[1:] + zeta[:-1]) / 2.0) * grid.du
        if np.any(np.diff(m) <= 0):
            raise TransformError("M(t, .) is not strictly increasing")
        valid = u_points <= m[-1]
        # piecewise-linear monotone inversion with exact node recovery
        inv = np.interp(u_points[valid], m, centers)
        zeta_at = np.interp(inv, centers, zeta)
        out[s, valid] = 1.0 / zeta_at - 1.0
    return u_points, out


def integrate_lambda(rho_solution: PdeSolution) -> tuple[np.ndarray, np.ndarray]:
    """Height profiles on the grid faces: lambda(t, 0) = 0, d_u lambda = rho.

    Exact cell-average integration, so lambda is nondecreasing whenever the
    density is nonnegative.
    """
    grid = rho_solution.grid
    n_left = rho_solution.n_left
    if rho_solution.field_name == "rho":
        n_left = grid.n_cells  # dissipative solutions end at the origin
    faces = grid.faces
    out = np.zeros((rho_solution.profiles.shape[0], faces.size))
    for s, rho in enumerate(rho_solution.profiles):
        lam = np.concatenate(([0.0], np.cumsum(rho) * grid.du))
        out[s] = lam - lam[n_left]
    return faces, out


def v_truncated(rho_solution: PdeSolution, n: int, t: float) -> float:
    """Weighted lost mass ``int H_n (rho_0 - rho(t))`` with ramp H_n=(1+u/n)+.

    Converges (from below, for dominated solutions) to the ledger v_t as the
    ramp widens past the support of the depletion.
    """
    if n < 1:
        raise ValueError("ramp width n must be at least 1")
    grid = rho_solution.grid
    n_left = rho_solution.n_left
    if rho_solution.field_name == "rho":
        n_left = grid.n_cells
    centers = grid.centers[:n_left]
    weights = np.maximum(1.0 + centers / n, 0.0)
    diff = rho_solution.initial[:n_left] - rho_solution.profile_at(t)[:n_left]
    return float(np.dot(weights, diff) * grid.du)

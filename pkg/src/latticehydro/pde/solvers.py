"""Explicit conservative solvers for the three limiting equations.

All three schemes are finite-volume updates ``q_i += (dt/du) * (F_{i+1/2} -
F_{i-1/2})`` on cell averages, so every conservation statement is an exact
ledger identity of the discrete flux bookkeeping:

* dissipative half line (u < 0):  d/dt rho = 1/2 Lap phi(rho), absorbing
  boundary at the origin.  The per-step boundary outflux defines ``a_t`` and
  ``v_t = sum a dt`` equals lost mass exactly.
* exclusion half line (u > 0):  d/dt zeta = 1/2 Lap zeta - a_t d_u zeta in
  conservative form with upwinded drift and zero total flux at both ends,
  so ``int zeta`` is conserved.
* full line: the left block is the dissipative solver; its outflux enters
  the right block as an incoming boundary flux (flux matching at 0).

The solvers optionally accumulate the time integrals entering the weak-form
identities exactly over the steps taken (see ``weak.py``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ConfigurationError, SchemeFailure
from .grid import Grid

__all__ = [
    "phi",
    "phi_prime",
    "PdeSolution",
    "solve_dissipative",
    "solve_exclusion_pde",
    "solve_fullline_zr_pde",
]

NEG_TOL = 1e-9  # admissible-range slack before a scheme failure is raised


def phi(rho):
    """Jump-rate flux function: rho / (1 + rho), increasing, in [0, 1)."""
    arr = np.asarray(rho, dtype=float)
    if np.any(arr < 0):
        raise ValueError("phi is defined for nonnegative densities only")
    out = arr / (1.0 + arr)
    return float(out) if np.isscalar(rho) else out


def phi_prime(rho):
    """Analytic derivative 1 / (1 + rho)^2."""
    arr = np.asarray(rho, dtype=float)
    if np.any(arr < 0):
        raise ValueError("phi' is defined for nonnegative densities only")
    out = 1.0 / (1.0 + arr) ** 2
    return float(out) if np.isscalar(rho) else out


@dataclass
class PdeSolution:
    """Time-indexed profiles plus the per-step flux series and ledgers."""

    field_name: str  # 'rho', 'zeta' or 'rho_full'
    grid: Grid
    save_times: np.ndarray
    profiles: np.ndarray  # (n_saves, n_cells)
    a_series: np.ndarray  # (n_steps,) boundary flux (or drift input for zeta)
    v_series: np.ndarray  # (n_steps+1,) accumulated transferred mass
    mass_saves: np.ndarray  # (n_saves,)
    weak_acc: dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def initial(self) -> np.ndarray:
        return self.profiles[0]

    def save_index(self, t: float) -> int:
        idx = int(np.argmin(np.abs(self.save_times - t)))
        if abs(self.save_times[idx] - t) > 1e-9 * max(1.0, self.grid.T):
            raise ConfigurationError(f"time {t} was not saved")
        return idx

    def profile_at(self, t: float) -> np.ndarray:
        return self.profiles[self.save_index(t)]

    def v_at(self, t: float) -> float:
        return float(self.v_series[self.grid.step_index(t)])

    @property
    def n_left(self) -> int:
        """Number of cells left of the origin ('rho_full' solutions)."""
        return int(self.meta.get("n_left", self.grid.n_cells))

    def left_centers(self) -> np.ndarray:
        return self.grid.centers[: self.n_left]

    def right_centers(self) -> np.ndarray:
        return self.grid.centers[self.n_left :]


def _evaluate(profile, centers: np.ndarray) -> np.ndarray:
    if callable(profile):
        return np.asarray(profile(centers), dtype=float).copy()
    arr = np.asarray(profile, dtype=float).copy()
    if arr.shape != centers.shape:
        raise ConfigurationError("profile array does not match the grid")
    return arr


def _resolve_saves(grid: Grid, save_times) -> tuple[np.ndarray, dict[int, int]]:
    times = np.asarray(
        [0.0, grid.T] if save_times is None else save_times, dtype=float
    )
    if times.ndim != 1 or times.size == 0:
        raise ConfigurationError("save_times must be a nonempty 1-d sequence")
    steps = [grid.step_index(t) for t in times]
    if len(set(steps)) != len(steps) or sorted(steps) != steps:
        raise ConfigurationError("save_times must be strictly increasing")
    return times, {k: i for i, k in enumerate(steps)}


class _WeakTally:
    """Accumulates the weak-form time integrals along the stepping."""

    def __init__(self, test_functions: Sequence, grid: Grid, require_origin_zero: bool,
                 n_cells_slice: slice | None = None):
        self.ids = [g.id for g in test_functions]
        sl = n_cells_slice or slice(None)
        lo, hi, _ = sl.indices(grid.n_cells)
        centers = grid.centers[sl]
        inner_faces = grid.faces[lo + 1 : hi]  # faces strictly between the cells
        self.g_centers = []
        self.gp_centers = []
        self.gp_faces = []
        self.gp_origin = []
        for g in test_functions:
            if require_origin_zero and abs(float(g(0.0))) > 1e-12:
                raise ConfigurationError(
                    f"test function {g.id!r} must vanish at the origin"
                )
            self.g_centers.append(np.asarray(g(centers), dtype=float))
            self.gp_centers.append(np.asarray(g.deriv(centers), dtype=float))
            self.gp_faces.append(np.asarray(g.deriv(inner_faces), dtype=float))
            self.gp_origin.append(float(g.deriv(0.0)))
        self.values = np.zeros(len(self.ids))
        self.saved: list[np.ndarray] = []

    def snapshot(self) -> None:
        self.saved.append(self.values.copy())

    def as_dict(self) -> dict[str, np.ndarray]:
        stacked = np.asarray(self.saved)
        return {gid: stacked[:, j] for j, gid in enumerate(self.ids)}


def solve_dissipative(
    rho0,
    grid: Grid,
    save_times=None,
    test_functions: Sequence = (),
) -> PdeSolution:
    """Absorbing-boundary nonlinear diffusion on ``[u_lo, 0]``.

    ``a_series[k]`` is the discrete outward mass flux through the origin
    during step k, so ``v_series`` equals initial-minus-current mass exactly.
    """
    if abs(grid.u_hi) > 1e-12:
        raise ConfigurationError("dissipative grid must end at u = 0")
    grid.validate_dissipative()
    rho = _evaluate(rho0, grid.centers)
    if np.any(rho < 0) or not np.all(np.isfinite(rho)):
        raise ConfigurationError("rho0 must be bounded and nonnegative")
    times, save_map = _resolve_saves(grid, save_times)
    tally = _WeakTally(test_functions, grid, require_origin_zero=True)

    du, dt, M = grid.du, grid.dt, grid.n_cells
    n_steps = grid.n_steps
    a_series = np.zeros(n_steps)
    v_series = np.zeros(n_steps + 1)
    profiles = np.zeros((len(times), M))
    mass_saves = np.zeros(len(times))
    mass0 = float(rho.sum() * du)
    v, v_comp = 0.0, 0.0  # compensated accumulation of the ledger
    ledger_drift = 0.0
    flux = np.zeros(M + 1)

    def record(k: int) -> None:
        idx = save_map.get(k)
        if idx is not None:
            profiles[idx] = rho
            mass_saves[idx] = rho.sum() * du
            tally.snapshot()

    record(0)
    for k in range(n_steps):
        phi_v = phi(rho)
        a = phi_v[-1] / du
        flux[1:M] = 0.5 * np.diff(phi_v) / du
        flux[M] = -a
        for j in range(len(tally.ids)):
            tally.values[j] += dt * (
                np.dot(tally.gp_faces[j], np.diff(phi_v))
                - tally.gp_origin[j] * phi_v[-1]
            )
        rho += (dt / du) * np.diff(flux)
        lo = rho.min()
        if lo < -NEG_TOL:
            raise SchemeFailure(f"rho left its range at step {k}: min {lo:.3e}")
        if lo < 0.0:
            np.maximum(rho, 0.0, out=rho)
        a_series[k] = a
        y = a * dt - v_comp
        t_sum = v + y
        v_comp = (t_sum - v) - y
        v = t_sum
        v_series[k + 1] = v
        ledger_drift = max(ledger_drift, abs(mass0 - v - rho.sum() * du))
        record(k + 1)

    return PdeSolution(
        "rho",
        grid,
        times,
        profiles,
        a_series,
        v_series,
        mass_saves,
        tally.as_dict(),
        {"mass0": mass0, "ledger_drift": ledger_drift, "scheme": "explicit-fv"},
    )


def _coerce_a_series(a_series, grid: Grid) -> np.ndarray:
    if isinstance(a_series, PdeSolution):
        src = a_series
        if abs(src.grid.dt - grid.dt) > 1e-12 * grid.dt or src.grid.n_steps != grid.n_steps:
            raise ConfigurationError(
                "a_series was produced on an incompatible time grid"
            )
        return src.a_series
    arr = np.asarray(a_series, dtype=float)
    if arr.ndim == 0:
        return np.full(grid.n_steps, float(arr))
    if arr.shape != (grid.n_steps,):
        raise ConfigurationError("a_series must have one value per time step")
    return arr


def solve_exclusion_pde(
    zeta0,
    a_series,
    grid: Grid,
    save_times=None,
    test_functions: Sequence = (),
) -> PdeSolution:
    """Drift-diffusion for the exclusion profile on ``[0, u_hi]``.

    Conservative form with upwinded drift and zero total flux at both ends
    (the zero-flux origin condition is the Robin boundary identity), hence
    ``int zeta`` is conserved to rounding per step.
    """
    if abs(grid.u_lo) > 1e-12:
        raise ConfigurationError("exclusion grid must start at u = 0")
    a_arr = _coerce_a_series(a_series, grid)
    if np.any(a_arr < 0):
        raise ConfigurationError("drift series must be nonnegative")
    grid.validate_exclusion(float(a_arr.max(initial=0.0)))
    zeta = _evaluate(zeta0, grid.centers)
    if np.any(zeta <= 0) or np.any(zeta > 1):
        raise ConfigurationError("zeta0 must lie in (0, 1] on the grid")
    times, save_map = _resolve_saves(grid, save_times)
    tally = _WeakTally(test_functions, grid, require_origin_zero=False)

    du, dt, M = grid.du, grid.dt, grid.n_cells
    n_steps = grid.n_steps
    profiles = np.zeros((len(times), M))
    mass_saves = np.zeros(len(times))
    mass0 = float(zeta.sum() * du)
    ledger_drift = 0.0
    flux = np.zeros(M + 1)

    def record(k: int) -> None:
        idx = save_map.get(k)
        if idx is not None:
            profiles[idx] = zeta
            mass_saves[idx] = zeta.sum() * du
            tally.snapshot()

    record(0)
    for k in range(n_steps):
        a = a_arr[k]
        dz = np.diff(zeta)
        flux[1:M] = -0.5 * dz / du + a * zeta[:-1]
        for j in range(len(tally.ids)):
            tally.values[j] += dt * (
                -0.5 * np.dot(tally.gp_faces[j], dz)
                + a * du * np.dot(tally.gp_centers[j], zeta)
            )
        zeta -= (dt / du) * np.diff(flux)
        lo, hi = zeta.min(), zeta.max()
        if lo < -NEG_TOL or hi > 1.0 + NEG_TOL:
            raise SchemeFailure(
                f"zeta left [0,1] at step {k}: min {lo:.3e}, max {hi:.3e}"
            )
        ledger_drift = max(ledger_drift, abs(zeta.sum() * du - mass0))
        record(k + 1)

    return PdeSolution(
        "zeta",
        grid,
        times,
        profiles,
        a_arr.copy(),
        np.concatenate(([0.0], np.cumsum(a_arr) * dt)),
        mass_saves,
        tally.as_dict(),
        {"mass0": mass0, "ledger_drift": ledger_drift, "scheme": "explicit-fv-upwind"},
    )


def solve_fullline_zr_pde(
    rho0,
    grid: Grid,
    save_times=None,
    test_functions: Sequence = (),
) -> PdeSolution:
    """Full-line density: dissipative left of 0, flux-matched right of 0.

    The origin face carries the single flux value ``-a_t`` (left outflux =
    right influx), so total mass over the line is conserved exactly while
    the left ledger still defines ``v_t``.
    """
    if not (grid.u_lo < 0 < grid.u_hi):
        raise ConfigurationError("full-line grid must straddle the origin")
    n_left = int(round(-grid.u_lo / grid.du))
    if abs(n_left * grid.du + grid.u_lo) > 1e-9 * grid.du:
        raise ConfigurationError("the origin must sit on a cell face")
    grid.validate_dissipative()
    rho = _evaluate(rho0, grid.centers)
    if np.any(rho < 0) or not np.all(np.isfinite(rho)):
        raise ConfigurationError("rho0 must be bounded and nonnegative")
    times, save_map = _resolve_saves(grid, save_times)
    tally = _WeakTally(
        test_functions, grid, require_origin_zero=True, n_cells_slice=slice(0, n_left)
    )

    du, dt, M = grid.du, grid.dt, grid.n_cells
    n_steps = grid.n_steps
    a_series = np.zeros(n_steps)
    v_series = np.zeros(n_steps + 1)
    profiles = np.zeros((len(times), M))
    mass_saves = np.zeros(len(times))
    mass0 = float(rho.sum() * du)
    v, v_comp = 0.0, 0.0
    ledger_drift = 0.0
    flux = np.zeros(M + 1)

    def record(k: int) -> None:
        idx = save_map.get(k)
        if idx is not None:
            profiles[idx] = rho
            mass_saves[idx] = rho.sum() * du
            tally.snapshot()

    record(0)
    for k in range(n_steps):
        phi_v = phi(rho)
        a = phi_v[n_left - 1] / du
        dphi = np.diff(phi_v)
        flux[1:M] = 0.5 * dphi / du
        flux[n_left] = -a  # decouple the blocks except for the matched flux
        for j in range(len(tally.ids)):
            tally.values[j] += dt * (
                np.dot(tally.gp_faces[j], dphi[: n_left - 1])
                - tally.gp_origin[j] * phi_v[n_left - 1]
            )
        rho += (dt / du) * np.diff(flux)
        lo = rho.min()
        if lo < -NEG_TOL:
            raise SchemeFailure(f"rho left its range at step {k}: min {lo:.3e}")
        if lo < 0.0:
            np.maximum(rho, 0.0, out=rho)
        a_series[k] = a
        y = a * dt - v_comp
        t_sum = v + y
        v_comp = (t_sum - v) - y
        v = t_sum
        v_series[k + 1] = v
        ledger_drift = max(ledger_drift, abs(rho.sum() * du - mass0))
        record(k + 1)

    return PdeSolution(
        "rho_full",
        grid,
        times,
        profiles,
        a_series,
        v_series,
        mass_saves,
        tally.as_dict(),
        {
            "mass0": mass0,
            "ledger_drift": ledger_drift,
            "n_left": n_left,
            "scheme": "explicit-fv",
        },
    )

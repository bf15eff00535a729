"""Trajectory simulation of the coupled process and its variant kernels.

``run`` drives the coupled generator (zero-range on the nonpositive sites,
boundary jump at rate ``r_b``, exclusion on the positive sites) speeded up
by N^2; ``run_potts_surface`` drives the interface directly (equivalently,
the full-line zero-range process with the 1 -> 0 jump removed and every
jump at the spin-flip rate 1/2); ``run_reflected_zr`` closes the origin
bond.  All runs are exact-time event chains: no time discretization,
observables recorded at scheduled macroscopic times, and the origin
occupation integral accumulated exactly between events.

``kernel='fast'`` uses the compiled event loops; ``kernel='reference'``
re-enumerates the rate table before every event (slow, but it is the plain
transcription of the generator and doubles as the debug mode with per-event
invariant checks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from ..lattice import (
    CoupledConfig,
    ExclusionConfig,
    IncrementConfig,
    SurfaceConfig,
    allowed_flips,
    apply_flip,
    flip_to_zr_jump,
    increments_to_surface,
    surface_to_increments,
)
from ..measures import EmpiricalRecord, empirical_record
from ._kernels import run_coupled_kernel, run_fullline_kernel
from ._rng import EventStream
from .rates import apply_channel, build_event_table

__all__ = ["Trajectory", "run", "run_potts_surface", "run_reflected_zr"]

_SEED_MASK = (1 << 63) - 1


@dataclass
class Trajectory:
    """Timestamped records of one run under diffusive scaling."""

    kind: str  # 'coupled' | 'surface' | 'reflected'
    n_scale: int
    seed: int
    r_b: float
    times: np.ndarray
    eta_lo: int
    eta_snaps: np.ndarray  # (n_obs, eta window size)
    xi_snaps: np.ndarray | None
    x_series: np.ndarray
    ig_series: np.ndarray | None  # cumulative int_0^t g(eta_s(0)) ds
    overflow_series: np.ndarray | None
    event_counts: dict[str, int]
    warnings: dict[str, int]
    records_eta: list[EmpiricalRecord] | None = None
    records_xi: list[EmpiricalRecord] | None = None
    meta: dict = field(default_factory=dict)

    def increments_at(self, k: int) -> IncrementConfig:
        return IncrementConfig(self.eta_lo, self.eta_snaps[k].copy())

    def exclusion_at(self, k: int) -> ExclusionConfig:
        if self.xi_snaps is None:
            raise ValueError("trajectory has no exclusion side")
        return ExclusionConfig(self.xi_snaps[k].copy())

    def surface_at(self, k: int) -> SurfaceConfig:
        """Reconstruct the interface: f(0) = -X_t pins the level."""
        if self.kind != "surface":
            raise ValueError("only surface trajectories reconstruct heights")
        return increments_to_surface(self.increments_at(k), -int(self.x_series[k]))

    def check_ledgers(self) -> None:
        """Exact mass bookkeeping at every recorded time."""
        if np.any(np.diff(self.x_series) < 0):
            raise AssertionError("crossing counter must be nondecreasing")
        eta_totals = self.eta_snaps.sum(axis=1)
        if self.kind == "surface":
            if not np.all(eta_totals == eta_totals[0]):
                raise AssertionError("full-line increment mass not conserved")
        else:
            ledger = eta_totals + self.x_series
            if not np.all(ledger == ledger[0]):
                raise AssertionError("left mass + crossings is not constant")
        if self.xi_snaps is not None and self.xi_snaps.size:
            right = self.xi_snaps.sum(axis=1) + self.overflow_series
            if not np.all(right == right[0]):
                raise AssertionError("right mass + overflow is not constant")


def _check_schedule(schedule, T: float) -> np.ndarray:
    obs = np.asarray([0.0, T] if schedule is None else schedule, dtype=float)
    if obs.ndim != 1 or obs.size == 0:
        raise ConfigurationError("schedule must be a nonempty sequence")
    if np.any(np.diff(obs) <= 0) or obs[0] < 0 or obs[-1] > T + 1e-12:
        raise ConfigurationError("schedule must increase inside [0, T]")
    return obs


def _attach_records(traj: Trajectory, observables, block_eps) -> None:
    if not observables:
        return
    n = traj.n_scale
    if "eta" in observables:
        traj.records_eta = [
            empirical_record(traj.increments_at(k), observables["eta"], n, block_eps)
            for k in range(traj.times.size)
        ]
    if "xi" in observables and traj.xi_snaps is not None:
        traj.records_xi = [
            empirical_record(traj.exclusion_at(k), observables["xi"], n, block_eps)
            for k in range(traj.times.size)
        ]


def run(
    initial: CoupledConfig,
    N: int,
    T: float,
    schedule=None,
    observables: dict | None = None,
    r_b: float = 1.0,
    seed: int = 0,
    kernel: str = "fast",
    block_eps: float | None = None,
) -> Trajectory:
    """Simulate the coupled generator at speed N^2 up to macroscopic time T."""
    if N < 1 or T <= 0 or r_b < 0:
        raise ConfigurationError("need N >= 1, T > 0 and r_b >= 0")
    if initial.eta.counts.size < 2:
        raise ConfigurationError("zero-range window needs at least two sites")
    obs = _check_schedule(schedule, T)
    n_obs = obs.size
    m = initial.eta.counts.size
    le = initial.xi.box

    eta = initial.eta.counts.copy()
    xi = initial.xi.occupancy.copy()
    eta_snaps = np.zeros((n_obs, m), dtype=np.int64)
    xi_snaps = np.zeros((n_obs, le), dtype=np.int64)
    x_snaps = np.zeros(n_obs, dtype=np.int64)
    ig_snaps = np.zeros(n_obs)
    ov_snaps = np.zeros(n_obs, dtype=np.int64)
    counters = np.zeros(8, dtype=np.int64)

    if kernel == "fast":
        run_coupled_kernel(
            eta, xi, initial.crossings, N, float(r_b), obs,
            seed & _SEED_MASK, eta_snaps, xi_snaps, x_snaps, ig_snaps,
            ov_snaps, counters,
        )
    elif kernel == "reference":
        _run_coupled_reference(
            initial, N, float(r_b), obs, EventStream(seed & _SEED_MASK),
            eta_snaps, xi_snaps, x_snaps, ig_snaps, ov_snaps, counters,
        )
    else:
        raise ConfigurationError(f"unknown kernel {kernel!r}")

    traj = Trajectory(
        kind="coupled",
        n_scale=N,
        seed=seed,
        r_b=r_b,
        times=obs,
        eta_lo=initial.eta.lo,
        eta_snaps=eta_snaps,
        xi_snaps=xi_snaps if le else None,
        x_series=x_snaps,
        ig_series=ig_snaps,
        overflow_series=ov_snaps if le else None,
        event_counts={
            "zr": int(counters[0]),
            "boundary": int(counters[1]),
            "exclusion": int(counters[2]),
        },
        warnings={
            "left_edge_events": int(counters[3]),
            "right_edge_events": int(counters[4]),
            "translation_overflow": int(counters[5]),
        },
    )
    traj.check_ledgers()
    _attach_records(traj, observables, block_eps)
    return traj


def run_reflected_zr(
    initial: IncrementConfig,
    N: int,
    T: float,
    schedule=None,
    observables: dict | None = None,
    seed: int = 0,
    kernel: str = "fast",
    block_eps: float | None = None,
) -> Trajectory:
    """Space-homogeneous zero-range on the nonpositive sites, origin bond
    removed: the equilibrium reference chain for the dissipative system."""
    if initial.hi != 0:
        raise ConfigurationError("reflected window must end at site 0")
    coupled = CoupledConfig(initial, ExclusionConfig(np.zeros(0, dtype=np.int64)))
    traj = run(
        coupled, N, T, schedule, observables=None, r_b=0.0, seed=seed, kernel=kernel
    )
    traj.kind = "reflected"
    _attach_records(traj, observables, block_eps)
    return traj


def run_potts_surface(
    initial: SurfaceConfig,
    N: int,
    T: float,
    schedule=None,
    observables: dict | None = None,
    seed: int = 0,
    kernel: str = "fast",
    block_eps: float | None = None,
) -> Trajectory:
    """Direct interface dynamics: every allowed flip at rate N^2/2."""
    if initial.lo > -2 or initial.hi < 2:
        raise ConfigurationError("surface window must reach sites -2 and 2")
    if initial.origin_height != 0:
        raise ConfigurationError("initial surface must have f(0) = 0")
    obs = _check_schedule(schedule, T)
    n_obs = obs.size
    eta0 = surface_to_increments(initial)
    m = eta0.counts.size

    eta = eta0.counts.copy()
    eta_snaps = np.zeros((n_obs, m), dtype=np.int64)
    x_snaps = np.zeros(n_obs, dtype=np.int64)
    counters = np.zeros(8, dtype=np.int64)

    if kernel == "fast":
        run_fullline_kernel(
            eta, eta0.lo, 0, N, obs, seed & _SEED_MASK, eta_snaps, x_snaps, counters
        )
    elif kernel == "reference":
        _run_surface_reference(
            initial, N, obs, EventStream(seed & _SEED_MASK),
            eta_snaps, x_snaps, counters,
        )
    else:
        raise ConfigurationError(f"unknown kernel {kernel!r}")

    traj = Trajectory(
        kind="surface",
        n_scale=N,
        seed=seed,
        r_b=0.5,
        times=obs,
        eta_lo=eta0.lo,
        eta_snaps=eta_snaps,
        xi_snaps=None,
        x_series=x_snaps,
        ig_series=None,
        overflow_series=None,
        event_counts={"zr": int(counters[0]), "boundary": int(counters[1])},
        warnings={"window_edge_events": int(counters[3])},
    )
    traj.check_ledgers()
    _attach_records(traj, observables, block_eps)
    return traj


# ---------------------------------------------------------------------------
# reference steppers (plain transcription of the generator; debug mode)
# ---------------------------------------------------------------------------


def _run_coupled_reference(
    initial, N, r_b, obs, stream, eta_snaps, xi_snaps, x_snaps, ig_snaps,
    ov_snaps, counters,
):
    state = CoupledConfig(
        IncrementConfig(initial.eta.lo, initial.eta.counts.copy()),
        ExclusionConfig(initial.xi.occupancy.copy()),
        initial.crossings,
    )
    t, k, ig, overflow = 0.0, 0, 0.0, 0
    n_obs = obs.size
    while True:
        table = build_event_table(state, r_b, N)
        total = table.total_rate
        t_next = t + (-math.log(stream.uniform()) / total) if total > 0 else math.inf
        g0 = 1.0 if state.eta.count(0) > 0 else 0.0
        while k < n_obs and obs[k] <= t_next:
            eta_snaps[k] = state.eta.counts
            if state.xi.box:
                xi_snaps[k] = state.xi.occupancy
            x_snaps[k] = state.crossings
            ig_snaps[k] = ig + g0 * (obs[k] - t)
            ov_snaps[k] = overflow
            k += 1
        if k >= n_obs or total == 0:
            break
        ig += g0 * (t_next - t)
        t = t_next
        r = stream.uniform() * total
        chosen = table.channels[-1]
        for ch in table.channels:
            if r < ch.rate:
                chosen = ch
                break
            r -= ch.rate
        state, ov = apply_channel(state, chosen)
        overflow += ov
        state.check_ledger()  # per-event invariant (debug semantics)
        kind_slot = {"zr": 0, "boundary": 1, "ex": 2}[chosen.kind]
        counters[kind_slot] += 1
        counters[5] += ov


def _run_surface_reference(initial, N, obs, stream, eta_snaps, x_snaps, counters):
    f = SurfaceConfig(initial.lo, initial.heights.copy())
    x_count = 0
    t, k = 0.0, 0
    n_obs = obs.size
    half = 0.5 * float(N) * float(N)
    while True:
        moves = sorted(
            ((flip_to_zr_jump(fl, f), fl) for fl in allowed_flips(f)),
            key=lambda pair: pair[0],
        )
        # same accumulation and selection arithmetic as the coupled walk so
        # that equal-rate channel streams stay bit-identical
        total = sum(half for _ in moves)
        t_next = t + (-math.log(stream.uniform()) / total) if total > 0 else math.inf
        while k < n_obs and obs[k] <= t_next:
            eta_snaps[k] = surface_to_increments(f).counts
            x_snaps[k] = x_count
            k += 1
        if k >= n_obs or total == 0:
            break
        t = t_next
        r = stream.uniform() * total
        jump, flip = moves[-1]
        for jmp, fl in moves:
            if r < half:
                jump, flip = jmp, fl
                break
            r -= half
        f = apply_flip(f, flip)
        if jump.source == 0 and jump.target == 1:
            x_count += 1
            counters[1] += 1
        counters[0] += 1

"""Configuration types for the three microscopic representations and the exact
deterministic transforms between them.

Three equivalent pictures are used throughout the package:

* a monotone integer *surface* ``f`` on a window of the integer line,
* its *increments* ``eta(x) = f(x) - f(x-1)``, a zero-range occupation field,
* on the positive side, the gap-encoding *exclusion* occupancy ``xi`` (the
  n-th particle of ``xi`` sits at ``sum(eta[1..n]) + n``).

All transforms here are exact on integers; nothing in this module is random.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .errors import BoxTooSmallError

__all__ = [
    "SurfaceConfig",
    "PottsWeights",
    "IncrementConfig",
    "ExclusionConfig",
    "CoupledConfig",
    "Flip",
    "ZrJump",
    "surface_to_increments",
    "increments_to_surface",
    "kipnis_forward",
    "kipnis_inverse",
    "allowed_flips",
    "apply_flip",
    "flip_to_zr_jump",
]


def _as_int_array(values: Iterable[int]) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("configuration values must be one dimensional")
    return arr


class Flip(NamedTuple):
    """A single admissible spin flip: ``new_spin`` identifies the case.

    new_spin = 1  lowers f(column) by one   (needs f(column) > f(column-1))
    new_spin = 0  raises f(column) by one   (column < 0, f(column) < f(column+1))
    new_spin = -1 raises f(column) by one   (column > 0, f(column) < f(column+1))
    """

    column: int
    new_spin: int


class ZrJump(NamedTuple):
    """A nearest-neighbour particle jump in the increments picture."""

    source: int
    target: int


@dataclass
class SurfaceConfig:
    """Monotone integer height function on the window ``[lo, lo+len-1]``."""

    lo: int
    heights: np.ndarray

    def __post_init__(self) -> None:
        self.heights = _as_int_array(self.heights)
        if self.heights.size < 1:
            raise ValueError("surface window is empty")
        if np.any(np.diff(self.heights) < 0):
            raise ValueError("surface heights must be nondecreasing")

    @property
    def hi(self) -> int:
        return self.lo + self.heights.size - 1

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    @property
    def origin_height(self) -> int:
        if not self.lo <= 0 <= self.hi:
            raise ValueError("origin not inside the surface window")
        return int(self.heights[-self.lo])

    def height(self, x: int) -> int:
        if not self.lo <= x <= self.hi:
            raise ValueError(f"column {x} outside window {self.window}")
        return int(self.heights[x - self.lo])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SurfaceConfig):
            return NotImplemented
        return self.lo == other.lo and np.array_equal(self.heights, other.heights)

    def to_text(self) -> str:
        values = " ".join(str(int(v)) for v in self.heights)
        return f"{self.lo} {self.hi}\n{values}\n"

    @classmethod
    def from_text(cls, text: str) -> "SurfaceConfig":
        lo, hi, values = _parse_window_block(text)
        if len(values) != hi - lo + 1:
            raise ValueError("value count does not match window")
        return cls(lo, values)


@dataclass(frozen=True)
class PottsWeights:
    """Boundary-energy weights of the three spin states.

    Only the ordering constraint is ever used: it forbids the one flip
    (new_spin = -1 at a column <= 0) that would leave the interface class,
    which is already encoded in the flip rules.  The weights never enter a
    rate.
    """

    iota_minus: float
    iota_zero: float
    iota_plus: float

    def __post_init__(self) -> None:
        if not (self.iota_minus > self.iota_zero == self.iota_plus > 0):
            raise ValueError(
                "weights must satisfy iota(-1) > iota(0) = iota(1) > 0"
            )


@dataclass
class IncrementConfig:
    """Nonnegative occupation numbers ``eta(x)`` on ``[lo, lo+len-1]``."""

    lo: int
    counts: np.ndarray

    def __post_init__(self) -> None:
        self.counts = _as_int_array(self.counts)
        if np.any(self.counts < 0):
            raise ValueError("increment counts must be nonnegative")

    @property
    def hi(self) -> int:
        return self.lo + self.counts.size - 1

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def count(self, x: int) -> int:
        if not self.lo <= x <= self.hi:
            raise ValueError(f"site {x} outside window {self.window}")
        return int(self.counts[x - self.lo])

    def total(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IncrementConfig):
            return NotImplemented
        return self.lo == other.lo and np.array_equal(self.counts, other.counts)

    def to_text(self) -> str:
        values = " ".join(str(int(v)) for v in self.counts)
        return f"{self.lo} {self.hi}\n{values}\n"

    @classmethod
    def from_text(cls, text: str) -> "IncrementConfig":
        lo, hi, values = _parse_window_block(text)
        if len(values) != hi - lo + 1:
            raise ValueError("value count does not match window")
        return cls(lo, values)


@dataclass
class ExclusionConfig:
    """0/1 occupancies on the window ``[1, L]``."""

    occupancy: np.ndarray

    def __post_init__(self) -> None:
        self.occupancy = _as_int_array(self.occupancy)
        if not np.isin(self.occupancy, (0, 1)).all():
            raise ValueError("occupancies must be 0 or 1")

    @property
    def box(self) -> int:
        return self.occupancy.size

    @property
    def window(self) -> tuple[int, int]:
        return (1, self.box)

    def particles(self) -> np.ndarray:
        """Occupied sites in increasing order (1-based)."""
        return np.flatnonzero(self.occupancy) + 1

    def total(self) -> int:
        return int(self.occupancy.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExclusionConfig):
            return NotImplemented
        return np.array_equal(self.occupancy, other.occupancy)

    def to_text(self) -> str:
        values = " ".join(str(int(v)) for v in self.occupancy)
        return f"1 {self.box}\n{values}\n"

    @classmethod
    def from_text(cls, text: str) -> "ExclusionConfig":
        lo, hi, values = _parse_window_block(text)
        if lo != 1:
            raise ValueError("exclusion windows start at site 1")
        if len(values) != hi - lo + 1:
            raise ValueError("value count does not match window")
        return cls(values)


@dataclass
class CoupledConfig:
    """State of the coupled pair: zero-range side, exclusion side, crossings.

    ``eta`` lives on ``[-L_z, 0]`` (its window must end at 0), ``xi`` on
    ``[1, L_e]``.  ``crossings`` counts boundary events so far; the exact
    ledger ``crossings + eta.total() == left_ledger`` holds along every
    trajectory.
    """

    eta: IncrementConfig
    xi: ExclusionConfig
    crossings: int = 0
    left_ledger: int = field(default=-1)

    def __post_init__(self) -> None:
        if self.eta.hi != 0:
            raise ValueError("coupled eta window must end at site 0")
        if self.crossings < 0:
            raise ValueError("crossings counter must be nonnegative")
        if self.left_ledger < 0:
            self.left_ledger = self.crossings + self.eta.total()

    def check_ledger(self) -> None:
        got = self.crossings + self.eta.total()
        if got != self.left_ledger:
            raise AssertionError(
                f"left mass ledger broken: {got} != {self.left_ledger}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoupledConfig):
            return NotImplemented
        return (
            self.eta == other.eta
            and self.xi == other.xi
            and self.crossings == other.crossings
        )

    def to_text(self) -> str:
        return self.eta.to_text() + self.xi.to_text() + f"{self.crossings}\n"

    @classmethod
    def from_text(cls, text: str) -> "CoupledConfig":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 5:
            raise ValueError("coupled configuration needs exactly 5 lines")
        eta = IncrementConfig.from_text("\n".join(lines[0:2]))
        xi = ExclusionConfig.from_text("\n".join(lines[2:4]))
        return cls(eta, xi, crossings=int(lines[4]))


def _parse_window_block(text: str) -> tuple[int, int, list[int]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValueError("expected a window line followed by a value line")
    lo_s, hi_s = lines[0].split()
    lo, hi = int(lo_s), int(hi_s)
    values = [int(tok) for tok in lines[1].split()]
    return lo, hi, values


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def surface_to_increments(f: SurfaceConfig) -> IncrementConfig:
    """Difference the surface: ``eta(x) = f(x) - f(x-1)`` on ``[lo+1, hi]``."""
    if f.heights.size < 2:
        raise ValueError("surface window needs at least 2 sites to difference")
    return IncrementConfig(f.lo + 1, np.diff(f.heights))


def increments_to_surface(eta: IncrementConfig, f0: int) -> SurfaceConfig:
    """Cumulate increments into the unique surface with ``f(0) = f0``.

    The increments window ``[lo, hi]`` produces a surface on ``[lo-1, hi]``;
    the origin must satisfy ``lo-1 <= 0 <= hi`` so that f(0) pins the level.
    """
    lo, hi = eta.window
    if not (lo - 1 <= 0 <= hi):
        raise ValueError("origin must lie inside the resulting surface window")
    # heights relative to f(lo-1), then shift so f(0) = f0
    rel = np.concatenate(([0], np.cumsum(eta.counts)))
    heights = rel - rel[0 - (lo - 1)] + f0
    return SurfaceConfig(lo - 1, heights)


def kipnis_forward(eta_plus: IncrementConfig, box: int) -> ExclusionConfig:
    """Map positive-side increments to exclusion occupancies on ``[1, box]``.

    The n-th particle sits at ``p_n = eta(1) + ... + eta(n) + n``; particles
    with ``p_n > box`` are not represented.  Raises if even the first
    particle does not fit.
    """
    if eta_plus.lo != 1:
        raise ValueError("positive-side increments must start at site 1")
    if box < 0:
        raise ValueError("box size must be nonnegative")
    positions = np.cumsum(eta_plus.counts) + np.arange(1, eta_plus.counts.size + 1)
    occ = np.zeros(box, dtype=np.int64)
    if positions.size:
        if box < positions[0]:
            raise BoxTooSmallError(
                f"box {box} cannot hold the first particle at {positions[0]}"
            )
        inside = positions[positions <= box]
        occ[inside - 1] = 1
    return ExclusionConfig(occ)


def kipnis_inverse(xi: ExclusionConfig) -> IncrementConfig:
    """Recover gap counts: ``eta(n)`` = empty sites before the n-th particle."""
    positions = xi.particles()
    if positions.size == 0:
        return IncrementConfig(1, np.zeros(0, dtype=np.int64))
    gaps = np.diff(np.concatenate(([0], positions))) - 1
    return IncrementConfig(1, gaps)


# ---------------------------------------------------------------------------
# flip rules
# ---------------------------------------------------------------------------


def allowed_flips(f: SurfaceConfig) -> set[Flip]:
    """Enumerate the admissible single-spin flips of the interface.

    Window-boundary columns are excluded: their neighbour increments are
    unknown, so neither the rule nor its jump image is well defined there.
    """
    flips: set[Flip] = set()
    h = f.heights
    lo = f.lo
    for i in range(1, h.size - 1):
        x = lo + i
        if h[i] > h[i - 1]:
            flips.add(Flip(x, 1))
        if h[i] < h[i + 1]:
            if x < 0:
                flips.add(Flip(x, 0))
            elif x > 0:
                flips.add(Flip(x, -1))
    return flips


def apply_flip(f: SurfaceConfig, flip: Flip) -> SurfaceConfig:
    """Apply an admissible flip; case 1 lowers the column, cases 0/-1 raise it."""
    if flip not in allowed_flips(f):
        raise ValueError(f"flip {flip} is not allowed on this surface")
    heights = f.heights.copy()
    i = flip.column - f.lo
    heights[i] += -1 if flip.new_spin == 1 else 1
    return SurfaceConfig(f.lo, heights)


def flip_to_zr_jump(flip: Flip, f: SurfaceConfig) -> ZrJump:
    """Image of a flip in the increments picture.

    Lowering column x moves a particle x -> x+1; raising column x moves one
    x+1 -> x.  The raise cases carry the sign restriction that forbids the
    jump 1 -> 0.
    """
    if flip not in allowed_flips(f):
        raise ValueError(f"flip {flip} is not allowed on this surface")
    x = flip.column
    if flip.new_spin == 1:
        return ZrJump(x, x + 1)
    return ZrJump(x + 1, x)


def admissible_zr_jumps(eta: IncrementConfig) -> set[ZrJump]:
    """All nearest-neighbour jumps from occupied sites, except 1 -> 0.

    Jumps whose source or target fall outside the window are excluded, which
    mirrors the window-boundary exclusion of :func:`allowed_flips`.
    """
    jumps: set[ZrJump] = set()
    lo, hi = eta.window
    for x in range(lo, hi + 1):
        if eta.count(x) == 0:
            continue
        if x + 1 <= hi:
            jumps.add(ZrJump(x, x + 1))
        if x - 1 >= lo and not (x == 1):
            jumps.add(ZrJump(x, x - 1))
    return jumps

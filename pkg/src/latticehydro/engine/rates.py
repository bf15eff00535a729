"""Reference rate-table construction and single-step transition.

This is the plain-Python realization of the coupled generator, used by the
tests and as the semantic reference the compiled kernels are checked
against.  Channels are keyed by their zero-range image (source, target), so
that a surface simulation and a coupled simulation driven by the same
uniform stream pick corresponding moves; an exclusion move of particle n is
the image of the jump (n, n+1) (left step) or (n+1, n) (right step), and
the boundary event is (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from ..lattice import CoupledConfig, ExclusionConfig, IncrementConfig

__all__ = ["Channel", "RateTable", "build_event_table", "step"]


class Channel(NamedTuple):
    kind: str  # 'zr' | 'boundary' | 'ex'
    source: int  # zero-range image of the move
    target: int
    rate: float
    site: int = 0  # lattice site of the moving exclusion particle


@dataclass
class RateTable:
    """All active channels of one configuration, canonically ordered."""

    channels: list[Channel]
    n_scale: int
    r_b: float

    @property
    def total_rate(self) -> float:
        return sum(c.rate for c in self.channels)


def build_event_table(c: CoupledConfig, r_b: float, N: int) -> RateTable:
    """Enumerate every admissible move of the coupled configuration.

    Rates carry the N^2 speedup; the boundary channel is active iff the
    origin is occupied.
    """
    n2 = float(N) * float(N)
    half = 0.5 * n2
    channels: list[Channel] = []
    lo, _ = c.eta.window
    for x in range(lo, 1):
        if c.eta.count(x) == 0:
            continue
        if x - 1 >= lo:
            channels.append(Channel("zr", x, x - 1, half, x))
        if x <= -1:
            channels.append(Channel("zr", x, x + 1, half, x))
        if x == 0:
            channels.append(Channel("boundary", 0, 1, r_b * n2, 0))
    occ = c.xi.occupancy
    box = c.xi.box
    for n, p in enumerate(c.xi.particles(), start=1):
        if p - 1 >= 1 and occ[p - 2] == 0:
            channels.append(Channel("ex", n, n + 1, half, int(p)))
        if p + 1 <= box and occ[p] == 0:
            channels.append(Channel("ex", n + 1, n, half, int(p)))
    channels.sort(key=lambda ch: (ch.source, ch.target))
    return RateTable(channels, N, r_b)


def apply_channel(c: CoupledConfig, ch: Channel) -> tuple[CoupledConfig, int]:
    """Apply one move; returns the new configuration and overflow count."""
    overflow = 0
    eta = c.eta.counts.copy()
    occ = c.xi.occupancy.copy()
    crossings = c.crossings
    lo = c.eta.lo
    if ch.kind == "zr":
        eta[ch.source - lo] -= 1
        eta[ch.target - lo] += 1
    elif ch.kind == "boundary":
        eta[0 - lo] -= 1
        crossings += 1
        if occ.size:
            overflow = int(occ[-1])
            occ[1:] = occ[:-1]
            occ[0] = 0
    else:  # exclusion particle at ch.site steps left or right
        p = ch.site
        dst = p - 1 if ch.source < ch.target else p + 1
        occ[p - 1] = 0
        occ[dst - 1] = 1
    new = CoupledConfig(
        IncrementConfig(lo, eta),
        ExclusionConfig(occ),
        crossings,
        left_ledger=c.left_ledger,
    )
    return new, overflow


def step(state: CoupledConfig, table: RateTable, rng) -> tuple[CoupledConfig, Channel | None, float]:
    """One Gillespie transition: exponential wait, rate-proportional choice.

    On an absorbing state (total rate 0) returns ``(state, None, inf)`` so
    the caller can advance straight to its next observation time.
    """
    total = table.total_rate
    if total <= 0.0:
        return state, None, math.inf
    dt = -math.log(rng.uniform()) / total
    r = rng.uniform() * total
    chosen = table.channels[-1]
    for ch in table.channels:
        if r < ch.rate:
            chosen = ch
            break
        r -= ch.rate
    new, _ = apply_channel(state, chosen)
    return new, chosen, dt

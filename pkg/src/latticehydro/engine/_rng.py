"""Deterministic 64-bit stream generator for the event loops.

splitmix64 is used for every event-loop draw: it is tiny enough to inline in
the compiled kernels and to mirror exactly in the pure-Python reference
stepper, so both paths can consume byte-identical streams.  Initial-measure
sampling uses numpy Generators instead; this stream only drives waiting
times and event selection.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
INV_2_53 = 2.0**-53


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance the state and return (new_state, 64-bit output)."""
    state = (state + GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    z = z ^ (z >> 31)
    return state, z


class EventStream:
    """Mutable wrapper used by the reference stepper."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def uniform(self) -> float:
        """Uniform in (0, 1), exclusive at both ends."""
        self.state, z = splitmix64_next(self.state)
        return ((z >> 11) + 0.5) * INV_2_53

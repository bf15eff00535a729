"""Interacting-particle simulators and their hydrodynamic-limit checks.

Three equivalent microscopic systems (a zero-temperature interface under
single-spin flips, a zero-range process with an asymmetric origin, and a
dissipative chain coupled to an exclusion process), exact transforms
between them, compiled event-driven simulation under diffusive scaling,
finite-difference solvers for the limiting equations, and a harness that
turns the scaling-limit statements into desk-scale experiments.
"""

from . import engine, harness, lattice, measures, pde

__all__ = ["lattice", "measures", "engine", "pde", "harness"]
__version__ = "0.1.0"

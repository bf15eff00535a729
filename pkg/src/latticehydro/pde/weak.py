"""Residuals of the weak-formulation identities for solved profiles.

For the gap density (test function G vanishing at the origin):

    R = | <G, rho_t> - <G, rho_0> + 1/2 int_0^t ds int G'(u) d_u phi(rho) |

and for the exclusion profile (any compactly supported G):

    R = | <G, zeta_t> - <G, zeta_0>
          - int_0^t ds { -1/2 int G' d_u zeta + a_s int G' zeta } |

The time integrals are accumulated exactly over the solver steps (the
solver must have been run with G in its ``test_functions``); pairings use
midpoint quadrature and the solver's discrete face derivatives, so the
residual measures pure discretization error, first order in du.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from .solvers import PdeSolution

__all__ = ["weak_form_residual"]


def _pairing(g, centers: np.ndarray, values: np.ndarray, du: float) -> float:
    return float(np.dot(np.asarray(g(centers), dtype=float), values) * du)


def weak_form_residual(solution: PdeSolution, g, t: float) -> float:
    """Absolute residual of the weak identity for ``g`` at time ``t``."""
    if g.id not in solution.weak_acc:
        raise ConfigurationError(
            f"solution was not accumulated against test function {g.id!r}; "
            "pass it via test_functions= when solving"
        )
    idx = solution.save_index(t)
    acc = float(solution.weak_acc[g.id][idx])
    grid = solution.grid
    if solution.field_name in ("rho", "rho_full"):
        n_left = grid.n_cells if solution.field_name == "rho" else solution.n_left
        centers = grid.centers[:n_left]
        now = _pairing(g, centers, solution.profiles[idx][:n_left], grid.du)
        init = _pairing(g, centers, solution.initial[:n_left], grid.du)
        return abs(now - init + 0.5 * acc)
    if solution.field_name == "zeta":
        centers = grid.centers
        now = _pairing(g, centers, solution.profiles[idx], grid.du)
        init = _pairing(g, centers, solution.initial, grid.du)
        return abs(now - init - acc)
    raise ConfigurationError(f"unsupported field {solution.field_name!r}")

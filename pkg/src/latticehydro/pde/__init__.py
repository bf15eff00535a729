from .grid import Grid, make_grid
from .solvers import (
    PdeSolution,
    phi,
    phi_prime,
    solve_dissipative,
    solve_exclusion_pde,
    solve_fullline_zr_pde,
)
from .transforms import integrate_lambda, transform_zeta_to_rho, v_truncated
from .weak import weak_form_residual

__all__ = [
    "Grid",
    "make_grid",
    "PdeSolution",
    "phi",
    "phi_prime",
    "solve_dissipative",
    "solve_exclusion_pde",
    "solve_fullline_zr_pde",
    "integrate_lambda",
    "transform_zeta_to_rho",
    "v_truncated",
    "weak_form_residual",
]

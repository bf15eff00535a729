from ._rng import EventStream
from .coupling import CouplingReport, run_coupled_pair, run_zr_pair
from .rates import Channel, RateTable, build_event_table, step
from .runs import Trajectory, run, run_potts_surface, run_reflected_zr

__all__ = [
    "EventStream",
    "Channel",
    "RateTable",
    "build_event_table",
    "step",
    "Trajectory",
    "run",
    "run_potts_surface",
    "run_reflected_zr",
    "CouplingReport",
    "run_coupled_pair",
    "run_zr_pair",
]

"""Independent validators: finite differences in t, a grid eigensolver and a
Lane-Emden ground-state solver."""

from .fd import fd_trajectory_derivatives, trajectory_value
from .grid import GridProblem, grid_lambda1
from .lane_emden import GroundStateSolution, lane_emden_ground_state

__all__ = [
    "GridProblem",
    "GroundStateSolution",
    "fd_trajectory_derivatives",
    "grid_lambda1",
    "lane_emden_ground_state",
    "trajectory_value",
]

"""Independent reference solutions used to validate the spectral schemes."""

from .burgers_exact import T_STAR, ExactBurgers, exact_burgers, exact_burgers_energy
from .euler_riemann import EulerRiemannSolution, euler_riemann, solve_euler_riemann
from .finite_volume import FVSolution, fv_reference
from .shallow_water_riemann import (
    ShallowWaterRiemannSolution,
    shallow_water_riemann,
    solve_dam_break,
)

__all__ = [
    "T_STAR",
    "ExactBurgers",
    "exact_burgers",
    "exact_burgers_energy",
    "EulerRiemannSolution",
    "euler_riemann",
    "solve_euler_riemann",
    "ShallowWaterRiemannSolution",
    "shallow_water_riemann",
    "solve_dam_break",
    "FVSolution",
    "fv_reference",
]

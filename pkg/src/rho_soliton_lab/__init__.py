"""Numerical laboratory for warped-product gradient rho-Einstein solitons."""

from . import (
    asymptotics,
    exact_solutions,
    integrator,
    phase_system,
    potential_theory,
    profile,
    shooting,
    warped_geometry,
)
from .phase_system import PhaseState, SolitonParams
from .profile import RadialProfile

__all__ = [
    "SolitonParams",
    "PhaseState",
    "RadialProfile",
    "phase_system",
    "integrator",
    "shooting",
    "warped_geometry",
    "asymptotics",
    "exact_solutions",
    "potential_theory",
    "profile",
]

__version__ = "0.1.0"

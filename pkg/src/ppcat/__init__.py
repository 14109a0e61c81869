"""Cat and coherent states through coupled down-conversion and sum-frequency
generation in a periodically poled crystal, in phase space."""
from .errors import NumericalError, ValidationError
from .propagator import CouplingConfig, PropagatorCoeffs, coeffs_ode, commutator_defects, propagator_coeffs
from .scenario import Scenario, run_scenario, run_sweep
from .states import ModeState, TwoModeInput
from .wigner import PhaseSpaceGrid, WignerField, wigner_field

__all__ = [
    "CouplingConfig",
    "ModeState",
    "NumericalError",
    "PhaseSpaceGrid",
    "PropagatorCoeffs",
    "Scenario",
    "TwoModeInput",
    "ValidationError",
    "WignerField",
    "coeffs_ode",
    "commutator_defects",
    "propagator_coeffs",
    "run_scenario",
    "run_sweep",
    "wigner_field",
]

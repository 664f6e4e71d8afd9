"""Adiabatic ground-state search over a truncated number basis, with the
comparison bound ||g(T) - g_0(T)|| <= T ||H_P g_I|| checked numerically."""

from .analysis import (
    BoundReport,
    GapProfile,
    GronwallReport,
    bound_report,
    classical_minimize,
    deviation,
    deviation_bound,
    gap_profile,
    gronwall_check,
    success_chain,
    success_probability,
)
from .eigen import GroundState, ground_state_of
from .evolve import StepControl, Trajectory, brute_force_propagator, propagate, propagate_reference
from .hamiltonian import (
    HiKind,
    InitialHamiltonian,
    Potential,
    Schedule,
    Variant,
    apply_hp,
    build_hi,
    delta_potential,
    interpolate,
    poly_potential,
    shift_potential,
)
from .states import State, inner, make_basis_state, norm, phase_align, tail_mass

__version__ = "0.1.0"

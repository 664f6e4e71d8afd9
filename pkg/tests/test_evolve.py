import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiabatic_search.errors import NormalizationError, StepControlError
from adiabatic_search.evolve import (
    StepControl,
    brute_force_propagator,
    propagate,
    propagate_reference,
    reference_phase,
)
from adiabatic_search.hamiltonian import (
    HiKind,
    InitialHamiltonian,
    Potential,
    Schedule,
    build_hi,
    delta_potential,
    shift_potential,
)
from adiabatic_search.states import State, inner, make_basis_state, norm, phase_align

pytestmark = pytest.mark.filterwarnings("ignore::adiabatic_search.hamiltonian.TruncationWarning")


def _zero_hi(dim):
    return InitialHamiltonian(
        matrix=np.zeros((dim, dim)),
        ground_state=make_basis_state(0, dim),
        ground_energy=0.0,
        ground_gap=0.0,
        kind=HiKind.DIAGONAL,
        degenerate=True,
    )


def _random_state(seed, dim):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return State(v / np.linalg.norm(v))


def test_zero_hamiltonian_leaves_state_unchanged():
    psi = _random_state(0, 5)
    sch = Schedule(_zero_hi(5), Potential(np.zeros(5)), 1.0)
    traj = propagate(sch, psi, StepControl(0.01, 10))
    np.testing.assert_array_equal(traj.final.amplitudes, psi.amplitudes)
    out = brute_force_propagator(sch, psi, 0.01)
    np.testing.assert_array_equal(out.amplitudes, psi.amplitudes)


def test_trajectory_layout():
    hi = build_hi("hopping", {}, 4)
    sch = Schedule(hi, delta_potential(1, 4), 2.0)
    traj = propagate(sch, hi.ground_state, StepControl(0.03, 7))
    assert traj.step_count == 67
    assert traj.times[0] == 0.0 and traj.times[-1] == 2.0
    assert np.all(np.diff(traj.times) > 0)
    assert traj.states[0] is hi.ground_state
    assert len(traj.states) == len(traj.times) == 1 + 67 // 7 + 1
    assert traj.valid and traj.norm_drift <= 1e-9


@pytest.mark.parametrize("x_min", [1, 3, 7])
def test_diagonal_initial_hamiltonian_does_nothing(x_min):
    hi = build_hi("diagonal", {}, 8)
    sch = Schedule(hi, delta_potential(x_min, 8), 6.0)
    final = propagate(sch, hi.ground_state, StepControl(0.01, 100)).final
    assert norm(phase_align(final, make_basis_state(0, 8)) - make_basis_state(0, 8)) <= 1e-6


def test_hopping_matches_fine_oracle():
    hi = build_hi("hopping", {"kappa": 1.0}, 4)
    sch = Schedule(hi, delta_potential(1, 4), 5.0)
    traj = propagate(sch, hi.ground_state, StepControl(1e-3, 1000))
    oracle = brute_force_propagator(sch, hi.ground_state, 1e-5)
    assert norm(traj.final - oracle) <= 1e-6


def test_oracle_commuting_family_closed_form():
    # diag(0..N-1) and diag(P) commute, so each amplitude just picks up
    # exp(-i * integral of ((1 - t/T) x + (t/T) P(x)) dt) = exp(-i T (x + P(x)) / 2)
    dim, T = 6, 3.0
    hi = build_hi("diagonal", {}, dim)
    p = Potential([0.5, -1.0, 2.0, 0.0, 3.5, -2.0])
    psi = _random_state(4, dim)
    x = np.arange(dim)
    expected = np.exp(-1j * T * (x + p.values) / 2) * psi.amplitudes
    sch = Schedule(hi, p, T)
    np.testing.assert_allclose(brute_force_propagator(sch, psi, T / 300).amplitudes, expected, atol=1e-12)
    np.testing.assert_allclose(propagate(sch, psi, StepControl(T / 37)).final.amplitudes, expected, atol=1e-12)


def test_step_control_validation():
    hi = build_hi("hopping", {}, 4)
    sch = Schedule(hi, delta_potential(1, 4), 1.0)
    for ctl in (StepControl(0.2), StepControl(-0.01), StepControl(0.01, 0), StepControl(0.01, 1, 0.0)):
        with pytest.raises(StepControlError):
            propagate(sch, hi.ground_state, ctl)
    with pytest.raises(NormalizationError):
        propagate(sch, State([1.0, 1.0, 0, 0]), StepControl(0.01))
    with pytest.raises(StepControlError):
        brute_force_propagator(sch, hi.ground_state, 0.02)


def test_reference_two_sites():
    hi = build_hi("hopping", {"kappa": 1.0}, 2)
    ref = propagate_reference(Schedule(hi, delta_potential(1, 2), 4.0, "reference"), StepControl(0.01, 10))
    assert norm(phase_align(ref.final, hi.ground_state) - hi.ground_state) <= 1e-8


def test_reference_phase_two_sites():
    # integral over [0, 2] of (1 - t/2) * lambda_min with lambda_min = -1 is -1, so the phase is +1 rad
    hi = build_hi("hopping", {"kappa": 1.0}, 2)
    assert reference_phase(-1.0, 2.0, 2.0) == 1.0
    ref = propagate_reference(Schedule(hi, delta_potential(0, 2), 2.0, "reference"), StepControl(0.01, 10))
    assert ref.diagnostics["measured_phase"][-1] == pytest.approx(1.0, abs=1e-9)
    assert np.angle(inner(hi.ground_state, ref.final)) == pytest.approx(1.0, abs=1e-9)


def test_reference_with_zero_ground_energy_accrues_no_phase():
    hi = build_hi("seeded-random-hermitian", {}, 6, seed=9)
    assert abs(hi.ground_energy) < 1e-12
    ref = propagate_reference(Schedule(hi, delta_potential(2, 6), 7.0, "reference"), StepControl(0.05, 5))
    for s in ref.states:
        assert norm(s - hi.ground_state) <= 1e-9


def test_reference_requires_reference_variant():
    hi = build_hi("hopping", {}, 3)
    with pytest.raises(ValueError):
        propagate_reference(Schedule(hi, delta_potential(0, 3), 1.0), StepControl(0.01))


def test_step_halving_is_second_order():
    hi = build_hi("hopping", {"kappa": 1.0}, 4)
    sch = Schedule(hi, delta_potential(1, 4), 5.0)
    finals = [propagate(sch, hi.ground_state, StepControl(dt, 10**6)).final for dt in (0.05, 0.025, 0.0125)]
    d1, d2 = norm(finals[0] - finals[1]), norm(finals[1] - finals[2])
    assert 3.5 <= d1 / d2 <= 4.5


@given(st.sampled_from([k.value for k in HiKind]), st.integers(0, 2**32 - 1), st.floats(-3, 3))
@settings(max_examples=15, deadline=None)
def test_constant_shift_is_a_global_phase(kind, seed, c):
    dim = 6
    hi = build_hi(kind, {}, dim, seed=seed)
    x_min = seed % dim
    p = delta_potential(x_min, dim)
    ctl = StepControl(0.02, 50)
    a = propagate(Schedule(hi, p, 2.0), hi.ground_state, ctl).final
    b = propagate(Schedule(hi, shift_potential(p, c), 2.0), hi.ground_state, ctl).final
    assert np.max(np.abs(a.probabilities() - b.probabilities())) <= 1e-10


@given(st.sampled_from([k.value for k in HiKind]), st.integers(0, 2**32 - 1), st.integers(2, 8))
@settings(max_examples=8, deadline=None)
def test_oracle_equivalence_random(kind, seed, dim):
    rng = np.random.default_rng(seed)
    hi = build_hi(kind, {}, dim, seed=seed)
    T = float(rng.uniform(0.5, 2.0))
    sch = Schedule(hi, delta_potential(int(rng.integers(dim)), dim), T)
    dt = T / 1000
    traj = propagate(sch, hi.ground_state, StepControl(dt, 10**6))
    oracle = brute_force_propagator(sch, hi.ground_state, dt / 100)
    assert norm(traj.final - oracle) <= 1e-6
    assert traj.norm_drift <= 1e-9

"""Time-dependent Schroedinger propagation with exponential-midpoint steps.

Each step applies ``exp(-i H(t + dt/2) dt)`` built from the eigendecomposition
of the midpoint Hamiltonian, so every step is unitary up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .eigen import GroundState, eigh, ground_state_of  # noqa: F401  (re-exported)
from .errors import NormalizationError, ReferenceDriftError, StepControlError
from .hamiltonian import Schedule, Variant, coefficients, interpolate
from .states import NORMALIZATION_TOL, State, inner, norm, phase_align

NORM_DRIFT_TOL = 1e-9


@dataclass(frozen=True)
class StepControl:
    base_step: float
    sample_stride: int = 1
    tolerance: float = 1e-9

    def validate(self, total_time: float) -> None:
        problems = []
        if not self.base_step > 0:
            problems.append(f"base_step must be positive, got {self.base_step}")
        elif self.base_step > total_time / 10 * (1 + 1e-12):
            problems.append(f"base_step {self.base_step} exceeds T/10 = {total_time / 10}")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            problems.append(f"sample_stride must be an integer >= 1, got {self.sample_stride}")
        if not self.tolerance > 0:
            problems.append(f"tolerance must be positive, got {self.tolerance}")
        if problems:
            raise StepControlError("; ".join(problems))

    def steps_for(self, total_time: float) -> int:
        return max(1, math.ceil(total_time / self.base_step - 1e-9))


@dataclass(frozen=True, eq=False)
class Trajectory:
    schedule: Schedule
    times: np.ndarray
    states: tuple
    norm_drift: float
    step_count: int
    control: StepControl
    diagnostics: dict = field(default_factory=dict)

    @property
    def final(self) -> State:
        return self.states[-1]

    @property
    def initial(self) -> State:
        return self.states[0]

    @property
    def valid(self) -> bool:
        return self.norm_drift <= NORM_DRIFT_TOL

    def __len__(self) -> int:
        return len(self.states)


def _check_initial(initial: State, sch: Schedule) -> None:
    if initial.dim != sch.dim:
        raise ValueError(f"initial state has dim {initial.dim}, schedule has dim {sch.dim}")
    err = abs(norm(initial) ** 2 - 1.0)
    if err > NORMALIZATION_TOL:
        raise NormalizationError(f"initial state is not normalized (| |psi|^2 - 1 | = {err:.2e})")


def propagate(sch: Schedule, initial: State, ctl: StepControl) -> Trajectory:
    """Integrate d/dt psi = -i H(t) psi from psi(0) = ``initial`` over [0, T].

    The step count is ``ceil(T / base_step)`` with the step shrunk to land on
    T exactly. Every ``sample_stride``-th state is stored, plus the final one.
    """
    T = sch.total_time
    ctl.validate(T)
    _check_initial(initial, sch)

    n = ctl.steps_for(T)
    h = T / n
    stride = int(ctl.sample_stride)
    psi = initial.amplitudes.copy()

    if sch.variant is Variant.REFERENCE:
        # (1 - t/T) H_I shares H_I's eigenvectors; only the eigenvalues rescale
        w_i, v_i = sch.initial.spectrum
        v_i_h = v_i.conj().T

    times = [0.0]
    states = [initial]
    drift = abs(norm(initial) - 1.0)
    prev_norm = norm(initial)
    for k in range(n):
        t_mid = (k + 0.5) * h
        if sch.variant is Variant.REFERENCE:
            a, _ = coefficients(sch, t_mid)
            psi = v_i @ (np.exp(-1j * (a * h) * w_i) * (v_i_h @ psi))
        else:
            w, v = eigh(interpolate(sch, t_mid))
            psi = v @ (np.exp(-1j * h * w) * (v.conj().T @ psi))
        cur_norm = float(np.linalg.norm(psi))
        if abs(cur_norm - prev_norm) > ctl.tolerance:
            raise NormalizationError(
                f"step {k} changed the norm by {abs(cur_norm - prev_norm):.2e} "
                f"(tolerance {ctl.tolerance:.1e})"
            )
        prev_norm = cur_norm
        drift = max(drift, abs(cur_norm - 1.0))
        if (k + 1) % stride == 0 or k == n - 1:
            times.append(T if k == n - 1 else (k + 1) * h)
            states.append(State(psi))

    return Trajectory(
        schedule=sch,
        times=np.array(times),
        states=tuple(states),
        norm_drift=drift,
        step_count=n,
        control=ctl,
    )


def reference_phase(lam: float, t: float, T: float) -> float:
    """Phase accumulated by an eigenvector of (1 - t/T) H_I: -lam (t - t^2 / 2T)."""
    return -lam * (t - t * t / (2.0 * T))


def propagate_reference(sch: Schedule, ctl: StepControl) -> Trajectory:
    """Evolve g_I under (1 - t/T) H_I and check it only picks up the analytic phase.

    ``diagnostics`` carries the unwrapped measured phase per sample, the
    analytic phase, and the worst ray/phase errors.
    """
    if sch.variant is not Variant.REFERENCE:
        raise ValueError("propagate_reference needs a schedule with variant='reference'")
    hi = sch.initial
    g_i = hi.ground_state
    traj = propagate(sch, g_i, ctl)

    T = sch.total_time
    analytic = np.array([reference_phase(hi.ground_energy, t, T) for t in traj.times])
    wrapped = np.array([np.angle(inner(g_i, s)) for s in traj.states])
    measured = np.unwrap(wrapped)
    ray_err = max(norm(phase_align(s, g_i) - g_i) for s in traj.states)
    phase_err = float(np.max(np.abs(np.angle(np.exp(1j * (wrapped - analytic))))))

    if ray_err > 10 * ctl.tolerance:
        raise ReferenceDriftError(f"reference state left the g_I ray by {ray_err:.2e}")
    if phase_err > 10 * ctl.tolerance:
        raise ReferenceDriftError(f"reference phase off the analytic value by {phase_err:.2e}")

    traj.diagnostics.update(
        measured_phase=measured,
        analytic_phase=analytic,
        max_ray_error=ray_err,
        max_phase_error=phase_err,
    )
    return traj


def brute_force_propagator(sch: Schedule, initial: State, dt: float, batch: int = 4096) -> State:
    """Test oracle: left product of ``scipy.linalg.expm`` step unitaries.

    Uses no eigendecomposition. Meant for small dimensions (<= 16).
    """
    T = sch.total_time
    if not 0 < dt <= T / 100 * (1 + 1e-12):
        raise StepControlError(f"oracle step {dt} must be in (0, T/100]")
    n = max(1, math.ceil(T / dt - 1e-9))
    h = T / n
    hi = np.asarray(sch.initial.matrix, dtype=complex)
    hp = np.diag(sch.potential.values).astype(complex)
    psi = initial.amplitudes.copy()
    for start in range(0, n, batch):
        ks = np.arange(start, min(start + batch, n))
        s = (ks + 0.5) * h / T
        a = 1.0 - s
        b = s if sch.variant is Variant.FULL else np.zeros_like(s)
        stack = a[:, None, None] * hi + b[:, None, None] * hp
        psi = _ordered_product(expm(-1j * h * stack)) @ psi
    return State(psi)


def _ordered_product(stack: np.ndarray) -> np.ndarray:
    """U[m-1] @ ... @ U[1] @ U[0] by pairwise reduction."""
    while stack.shape[0] > 1:
        if stack.shape[0] % 2:
            tail = stack[-1:]
            stack = np.concatenate([stack[1:-1:2] @ stack[0:-1:2], tail])
        else:
            stack = stack[1::2] @ stack[0::2]
    return stack[0]

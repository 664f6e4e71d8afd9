"""Deviation bound, pointwise derivative check, success probability, gaps, classical scan."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigen import ground_state_of
from .errors import DimensionError
from .evolve import Trajectory
from .hamiltonian import InitialHamiltonian, Potential, Schedule, Variant, apply_hp, delta_minimizer, interpolate
from .states import State, inner, make_basis_state, norm, phase_align

BOUND_SLACK = 1e-6
MIN_GRONWALL_SAMPLES = 20
HP_CONSTANCY_TOL = 1e-8


@dataclass(frozen=True)
class BoundReport:
    """Comparison of ||g(T) - g_0(T)|| with T * ||H_P g_I||.

    ``deviation`` and ``satisfied`` are None until trajectories are supplied.
    ``aligned_deviation`` is informational only; the bound is about the raw
    difference.
    """

    hp_gi_norm: float
    bound: float
    total_time: float
    overlap: float | None = None
    deviation: float | None = None
    aligned_deviation: float | None = None
    slack: float = BOUND_SLACK

    @property
    def satisfied(self) -> bool | None:
        if self.deviation is None:
            return None
        return self.deviation <= self.bound + self.slack


def deviation_bound(p: Potential, hi: InitialHamiltonian, T: float) -> BoundReport:
    if p.dim != hi.dim:
        raise DimensionError(f"dimension mismatch: potential {p.dim}, H_I {hi.dim}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    hp_gi = norm(apply_hp(p, hi.ground_state))
    x_min = delta_minimizer(p)
    overlap = None
    if x_min is not None:
        overlap = abs(inner(make_basis_state(x_min, p.dim), hi.ground_state))
    return BoundReport(hp_gi_norm=hp_gi, bound=float(T) * hp_gi, total_time=float(T), overlap=overlap)


def _check_aligned(full: Trajectory, ref: Trajectory) -> None:
    a, b = full.schedule, ref.schedule
    problems = []
    if a.dim != b.dim:
        problems.append(f"dims {a.dim} != {b.dim}")
    if a.total_time != b.total_time:
        problems.append(f"total times {a.total_time} != {b.total_time}")
    if a.initial is not b.initial and not np.array_equal(a.initial.matrix, b.initial.matrix):
        problems.append("different H_I")
    if full.times.shape != ref.times.shape or not np.allclose(full.times, ref.times, rtol=0, atol=1e-12):
        problems.append("sample times differ")
    if problems:
        raise ValueError("trajectories are not aligned: " + ", ".join(problems))


def deviation(full: Trajectory, ref: Trajectory) -> float:
    """||g(T) - g_0(T)|| with no phase alignment."""
    _check_aligned(full, ref)
    return norm(full.final - ref.final)


def aligned_deviation(full: Trajectory, ref: Trajectory) -> float:
    _check_aligned(full, ref)
    try:
        return norm(phase_align(full.final, ref.final) - ref.final)
    except ValueError:
        return norm(full.final - ref.final)


def bound_report(full: Trajectory, ref: Trajectory, p: Potential, slack: float = BOUND_SLACK) -> BoundReport:
    base = deviation_bound(p, full.schedule.initial, full.schedule.total_time)
    return BoundReport(
        hp_gi_norm=base.hp_gi_norm,
        bound=base.bound,
        total_time=base.total_time,
        overlap=base.overlap,
        deviation=deviation(full, ref),
        aligned_deviation=aligned_deviation(full, ref),
        slack=slack,
    )


@dataclass(frozen=True, eq=False)
class GronwallReport:
    """Per interior sample: central-difference d/dt ||g - g_0|| against its bounds.

    ``exact_derivative`` is s * Im<delta|H_P g_0> / ||delta|| with s = t/T,
    the instantaneous derivative evaluated from the stored states; its gap to
    the central difference measures the finite-difference error.
    ``sharp_bound`` keeps the factor t/T that ``bound`` drops.
    """

    times: np.ndarray
    fd_derivative: np.ndarray
    exact_derivative: np.ndarray
    bound: np.ndarray
    sharp_bound: np.ndarray
    hp_norm_spread: float

    @property
    def max_violation(self) -> float:
        return float(max(0.0, np.max(self.fd_derivative - self.bound)))

    @property
    def max_sharp_violation(self) -> float:
        return float(max(0.0, np.max(self.fd_derivative - self.sharp_bound)))

    @property
    def fd_error(self) -> float:
        return float(np.nanmax(np.abs(self.fd_derivative - self.exact_derivative)))

    @property
    def hp_norm_constant(self) -> bool:
        return self.hp_norm_spread <= HP_CONSTANCY_TOL


def gronwall_check(full: Trajectory, ref: Trajectory, p: Potential) -> GronwallReport:
    _check_aligned(full, ref)
    if len(full) < MIN_GRONWALL_SAMPLES:
        raise ValueError(f"need at least {MIN_GRONWALL_SAMPLES} samples, got {len(full)}")
    T = full.schedule.total_time
    t = full.times
    deltas = [g - g0 for g, g0 in zip(full.states, ref.states)]
    hp_g0 = [apply_hp(p, g0) for g0 in ref.states]
    dist = np.array([norm(d) for d in deltas])
    hp_norms = np.array([norm(v) for v in hp_g0])

    fd = (dist[2:] - dist[:-2]) / (t[2:] - t[:-2])
    exact = np.full(fd.shape, np.nan)
    for i in range(1, len(t) - 1):
        if dist[i] > 0:
            exact[i - 1] = (t[i] / T) * inner(deltas[i], hp_g0[i]).imag / dist[i]

    inner_t = t[1:-1]
    return GronwallReport(
        times=inner_t,
        fd_derivative=fd,
        exact_derivative=exact,
        bound=hp_norms[1:-1],
        sharp_bound=(inner_t / T) * hp_norms[1:-1],
        hp_norm_spread=float(hp_norms.max() - hp_norms.min()),
    )


def success_probability(final: State, x_min: int) -> float:
    if not 0 <= x_min < final.dim:
        raise DimensionError(f"x_min={x_min} out of range for dim {final.dim}")
    return float(min(1.0, abs(final.amplitudes[x_min]) ** 2))


class SuccessChain(NamedTuple):
    """|<x|g(T)>| <= |<x|g_0(T)>| + dev <= |<x|g_I>| + T ||H_P g_I||."""

    success_amplitude: float
    reference_amplitude: float
    deviation: float
    overlap: float
    bound: float

    def holds(self, tol: float = 1e-9) -> bool:
        middle = self.reference_amplitude + self.deviation
        return (
            self.success_amplitude <= middle + tol
            and middle <= self.overlap + self.bound + BOUND_SLACK + tol
        )


def success_chain(full: Trajectory, ref: Trajectory, x_min: int, p: Potential) -> SuccessChain:
    rep = deviation_bound(p, full.schedule.initial, full.schedule.total_time)
    return SuccessChain(
        success_amplitude=abs(full.final.amplitudes[x_min]),
        reference_amplitude=abs(ref.final.amplitudes[x_min]),
        deviation=deviation(full, ref),
        overlap=abs(full.schedule.initial.ground_state.amplitudes[x_min]),
        bound=rep.bound,
    )


@dataclass(frozen=True, eq=False)
class GapProfile:
    times: np.ndarray
    gaps: np.ndarray
    min_gap: float
    argmin_time: float


def gap_profile(sch: Schedule, samples: int) -> GapProfile:
    """Gap between the two lowest levels of H(t) at ``samples`` equally spaced times."""
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    if sch.variant is not Variant.FULL:
        raise ValueError("gap_profile needs the full schedule")
    times = np.linspace(0.0, sch.total_time, samples)
    times[-1] = sch.total_time
    gaps = np.array([ground_state_of(interpolate(sch, t)).gap for t in times])
    k = int(np.argmin(gaps))
    return GapProfile(times=times, gaps=gaps, min_gap=float(gaps[k]), argmin_time=float(times[k]))


def classical_minimize(p: Potential, upper_bound: int):
    """Exhaustive scan of P over 0..upper_bound-1; lowest index wins ties."""
    if upper_bound <= 0:
        raise ValueError("upper_bound must be positive")
    if upper_bound > p.dim:
        raise DimensionError(f"upper_bound {upper_bound} exceeds dim {p.dim}")
    vals = p.values[:upper_bound]
    x_star = int(np.argmin(vals))
    return x_star, float(vals[x_star])

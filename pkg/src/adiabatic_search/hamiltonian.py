"""Problem potentials, initial Hamiltonians and the two interpolation schedules."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .eigen import check_hermitian, eigh, ground_state_of
from .errors import DimensionError
from .states import State, tail_mass

# weight above this fraction of the basis must stay below TRUNCATION_TOL
TAIL_FRACTION = 0.75
TRUNCATION_TOL = 1e-6


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class Potential:
    """Tabulated values P(0), ..., P(N-1); defines the diagonal H_P."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.size < 2:
            raise DimensionError(f"potential needs dim >= 2, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("potential values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        return self.values.size

    def matrix(self) -> np.ndarray:
        return np.diag(self.values)


def delta_potential(x_min: int, dim: int) -> Potential:
    """P(x) = -1 at ``x_min`` and 0 elsewhere."""
    if not 0 <= x_min < dim:
        raise DimensionError(f"x_min={x_min} out of range for dim {dim}")
    vals = np.zeros(dim)
    vals[x_min] = -1.0
    return Potential(vals, label=f"delta(x_min={x_min})")


def poly_potential(coefficients: Sequence[float], dim: int) -> Potential:
    """P(x) = sum_k c_k x**k on x = 0..dim-1, coefficients in ascending order."""
    coeffs = [float(c) for c in coefficients]
    if not coeffs:
        raise ValueError("polynomial potential needs at least one coefficient")
    vals = np.polynomial.polynomial.polyval(np.arange(dim, dtype=float), coeffs)
    return Potential(vals, label=f"poly({','.join(repr(c) for c in coeffs)})")


def shift_potential(p: Potential, c: float) -> Potential:
    label = f"{p.label}{c:+g}" if c else p.label
    return Potential(p.values + float(c), label=label)


def apply_hp(p: Potential, s: State) -> State:
    if p.dim != s.dim:
        raise DimensionError(f"dimension mismatch: potential {p.dim}, state {s.dim}")
    return State(p.values * s.amplitudes)


def delta_minimizer(p: Potential):
    """Return x_min if ``p`` is a -1/0 delta potential, else None."""
    (neg,) = np.nonzero(p.values)
    if neg.size == 1 and p.values[neg[0]] == -1.0:
        return int(neg[0])
    return None


class HiKind(str, Enum):
    HOPPING = "hopping"
    COHERENT = "coherent-like"
    DIAGONAL = "diagonal"
    RANDOM = "seeded-random-hermitian"


@dataclass(frozen=True, eq=False)
class InitialHamiltonian:
    matrix: np.ndarray
    ground_state: State
    ground_energy: float
    ground_gap: float
    kind: HiKind
    params: Mapping[str, float] = field(default_factory=dict)
    seed: int | None = None
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self):
        """Full eigendecomposition (w, V); reused by the reference evolution."""
        return eigh(self.matrix)

    def residual(self) -> float:
        v = self.ground_state.amplitudes
        return float(np.linalg.norm(self.matrix @ v - self.ground_energy * v))


def _hopping(dim, kappa):
    off = np.full(dim - 1, -kappa)
    return np.diag(off, 1) + np.diag(off, -1)


def _coherent_like(dim, alpha):
    # (a^dag - alpha)(a - alpha) with a|x> = sqrt(x)|x-1>, truncated to dim
    n = np.arange(dim, dtype=float)
    off = -alpha * np.sqrt(n[1:])
    return np.diag(n + alpha * alpha) + np.diag(off, 1) + np.diag(off, -1)


def _random_hermitian(dim, seed, scale):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    # a + a^dag is exactly Hermitian in floating point
    return (a + a.conj().T) * (scale / (2.0 * np.sqrt(dim)))


def build_hi(kind, params: Mapping[str, float] | None = None, dim: int = 2, seed: int = 0) -> InitialHamiltonian:
    """Build an initial Hamiltonian of the given kind and attach its ground eigenpair.

    Kinds and parameters:
      * ``hopping``: open tight-binding chain, off-diagonal ``-kappa`` (default 1).
      * ``coherent-like``: ``(a^dag - alpha)(a - alpha)``, real ``alpha`` (default 1).
      * ``diagonal``: ``diag(0, 1, 2, ...)``.
      * ``seeded-random-hermitian``: Gaussian Hermitian matrix drawn from ``seed``
        (optional ``scale``, default 1), shifted so its ground energy is 0.
    """
    try:
        kind = HiKind(kind)
    except ValueError:
        raise ValueError(f"unknown H_I kind {kind!r}; expected one of {[k.value for k in HiKind]}") from None
    params = dict(params or {})
    if dim < 2:
        raise DimensionError(f"dim must be >= 2, got {dim}")

    if kind is HiKind.HOPPING:
        kappa = float(params.setdefault("kappa", 1.0))
        if not kappa > 0:
            raise ValueError(f"hopping needs kappa > 0, got {kappa}")
        matrix = _hopping(dim, kappa)
    elif kind is HiKind.COHERENT:
        alpha = float(params.setdefault("alpha", 1.0))
        matrix = _coherent_like(dim, alpha)
    elif kind is HiKind.DIAGONAL:
        matrix = np.diag(np.arange(dim, dtype=float))
    else:
        scale = float(params.setdefault("scale", 1.0))
        if not scale > 0:
            raise ValueError(f"random Hermitian scale must be > 0, got {scale}")
        matrix = _random_hermitian(dim, seed, scale)
        lowest = ground_state_of(matrix).energy
        matrix = matrix - lowest * np.eye(dim)

    check_hermitian(matrix)
    gs = ground_state_of(matrix)
    hi = InitialHamiltonian(
        matrix=matrix,
        ground_state=gs.state,
        ground_energy=gs.energy,
        ground_gap=gs.gap,
        kind=kind,
        params=params,
        seed=seed if kind is HiKind.RANDOM else None,
        degenerate=gs.degenerate,
    )
    if kind is HiKind.COHERENT:
        cutoff = int(np.ceil(TAIL_FRACTION * dim))
        mass = tail_mass(gs.state, cutoff)
        if mass >= TRUNCATION_TOL:
            warnings.warn(
                f"coherent-like ground state has weight {mass:.2e} above x={cutoff}; "
                f"dim={dim} is too small for alpha={params['alpha']}",
                TruncationWarning,
                stacklevel=2,
            )
    return hi


class Variant(str, Enum):
    FULL = "full"
    REFERENCE = "reference"


@dataclass(frozen=True, eq=False)
class Schedule:
    """H(t) = (1 - t/T) H_I + (t/T) H_P (full) or (1 - t/T) H_I (reference)."""

    initial: InitialHamiltonian
    potential: Potential
    total_time: float
    variant: Variant = Variant.FULL

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        T = float(self.total_time)
        if not (0.0 < T < np.inf):
            raise ValueError(f"total_time must be positive and finite, got {self.total_time}")
        object.__setattr__(self, "total_time", T)
        if self.initial.dim != self.potential.dim:
            raise DimensionError(
                f"dimension mismatch: H_I is {self.initial.dim}, potential is {self.potential.dim}"
            )

    @property
    def dim(self) -> int:
        return self.initial.dim

    def reference(self) -> Schedule:
        return Schedule(self.initial, self.potential, self.total_time, Variant.REFERENCE)

    def with_potential(self, potential: Potential) -> Schedule:
        return Schedule(self.initial, potential, self.total_time, self.variant)


def interpolate(sch: Schedule, t: float) -> np.ndarray:
    T = sch.total_time
    if not 0.0 <= t <= T:
        raise ValueError(f"t={t} outside [0, {T}]")
    s = t / T
    out = (1.0 - s) * sch.initial.matrix
    if sch.variant is Variant.FULL:
        out = out + np.diag(s * sch.potential.values)
    return out


def coefficients(sch: Schedule, t: float):
    """Scalar weights (a, b) with H(t) = a H_I + b H_P."""
    s = t / sch.total_time
    return 1.0 - s, (s if sch.variant is Variant.FULL else 0.0)


"""State vectors on a truncated number basis |0>, ..., |N-1>."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PhaseError

NORMALIZATION_TOL = 1e-12
EVOLVED_NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class State:
    """Immutable vector of complex amplitudes over the number basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 2:
            raise DimensionError(f"state dimension must be >= 2, got {amps.size}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def normalized(self) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= NORMALIZATION_TOL

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __add__(self, other: State) -> State:
        _check_dims(self, other)
        return State(self.amplitudes + other.amplitudes)

    def __sub__(self, other: State) -> State:
        _check_dims(self, other)
        return State(self.amplitudes - other.amplitudes)

    def __mul__(self, scalar: complex) -> State:
        return State(scalar * self.amplitudes)

    __rmul__ = __mul__

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"State(dim={self.dim}, amplitudes={np.array2string(self.amplitudes, threshold=8)})"


def _check_dims(a: State, b: State) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} != {b.dim}")


def make_basis_state(x: int, dim: int) -> State:
    """Return |x> in a basis of size ``dim``."""
    if not 0 <= x < dim:
        raise DimensionError(f"basis index {x} out of range for dim {dim}")
    amps = np.zeros(dim, dtype=complex)
    amps[x] = 1.0
    return State(amps)


def inner(a: State, b: State) -> complex:
    """<a|b>, conjugating the first argument."""
    _check_dims(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def norm(a: State) -> float:
    return float(np.linalg.norm(a.amplitudes))


def phase_align(a: State, b: State) -> State:
    """Multiply ``a`` by the global phase that makes <result|b> real and nonnegative.

    This phase also minimizes ||e^{i theta} a - b|| over theta.
    """
    overlap = inner(a, b)
    if abs(overlap) == 0.0:
        raise PhaseError("states are orthogonal; relative phase is undefined")
    # <e^{it} a | b> = e^{-it} <a|b> is real positive when e^{it} = <a|b>/|<a|b>|
    return State(a.amplitudes * (overlap / abs(overlap)))


def tail_mass(a: State, cutoff: int) -> float:
    """Probability weight on basis states |x> with x >= cutoff."""
    if not 0 <= cutoff <= a.dim:
        raise DimensionError(f"cutoff {cutoff} out of range for dim {a.dim}")
    return float(np.sum(np.abs(a.amplitudes[cutoff:]) ** 2))

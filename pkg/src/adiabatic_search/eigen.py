"""Dense Hermitian eigensolver helpers.

Real symmetric tridiagonal matrices (hopping chains, the truncated
coherent-like operator, and every schedule built from them) are routed
through LAPACK's tridiagonal solver; everything else goes to ``numpy.linalg.eigh``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import HermitianError
from .states import State

HERMITIAN_TOL = 1e-12
DEGENERACY_TOL = 1e-12

_RESCALE_AT = 1e100


class GroundState(NamedTuple):
    energy: float
    state: State
    gap: float
    degenerate: bool


def hermiticity_error(matrix: np.ndarray) -> float:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise HermitianError(f"expected a square matrix, got shape {m.shape}")
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    err = hermiticity_error(matrix)
    if err > tol:
        raise HermitianError(f"matrix is not Hermitian (max |H - H^dag| = {err:.3e})")


def tridiagonal_bands(matrix: np.ndarray):
    """Return (diagonal, off_diagonal) if ``matrix`` is real symmetric tridiagonal, else None."""
    m = np.asarray(matrix)
    if np.iscomplexobj(m):
        if np.any(m.imag != 0):
            return None
        m = m.real
    n = m.shape[0]
    d = np.diag(m).copy()
    e = np.diag(m, 1).copy()
    if not np.array_equal(e, np.diag(m, -1)):
        return None
    if n > 2 and (np.any(np.triu(m, 2)) or np.any(np.tril(m, -2))):
        return None
    return d, e


def eigh(matrix: np.ndarray):
    """Full eigendecomposition ``(w, V)`` with ascending eigenvalues."""
    bands = tridiagonal_bands(matrix)
    if bands is not None:
        d, e = bands
        if not np.any(e):
            order = np.argsort(d, kind="stable")
            return d[order], np.eye(d.size)[:, order]
        return eigh_tridiagonal(d, e)
    return np.linalg.eigh(matrix)


def _lowest_two(matrix: np.ndarray, bands):
    if bands is not None:
        d, e = bands
        if not np.any(e):
            order = np.argsort(d, kind="stable")[:2]
            return d[order], np.eye(d.size)[:, order]
        return eigh_tridiagonal(d, e, select="i", select_range=(0, 1))
    return np.linalg.eigh(matrix)


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate ``vec`` so its largest-magnitude entry is real positive (lowest index on ties)."""
    mags = np.abs(vec)
    k = int(np.flatnonzero(mags >= mags.max() * (1 - 1e-12))[0])
    out = vec * (np.conj(vec[k]) / mags[k])
    out[k] = mags[k]
    return out


def _recurrence_vector(d, e, lam, twist):
    """Eigenvector of a tridiagonal matrix by forward/backward three-term recurrence.

    Forward from the top row down to ``twist``, backward from the bottom row
    up to ``twist``, then joined. Each run goes in the direction in which the
    wanted solution grows, so tiny tail components keep their relative accuracy.
    """
    n = d.size
    fwd = np.zeros(twist + 1)
    fwd[0] = 1.0
    if twist >= 1:
        fwd[1] = (lam - d[0]) * fwd[0] / e[0]
    for x in range(1, twist):
        fwd[x + 1] = ((lam - d[x]) * fwd[x] - e[x - 1] * fwd[x - 1]) / e[x]
        if abs(fwd[x + 1]) > _RESCALE_AT:
            fwd[: x + 2] /= _RESCALE_AT

    bwd = np.zeros(n)
    bwd[n - 1] = 1.0
    if twist <= n - 2:
        bwd[n - 2] = (lam - d[n - 1]) * bwd[n - 1] / e[n - 2]
    for x in range(n - 2, twist, -1):
        bwd[x - 1] = ((lam - d[x]) * bwd[x] - e[x] * bwd[x + 1]) / e[x - 1]
        if abs(bwd[x - 1]) > _RESCALE_AT:
            bwd[x - 1 :] /= _RESCALE_AT

    if fwd[twist] == 0.0 or bwd[twist] == 0.0:
        return None
    if not (np.all(np.isfinite(fwd)) and np.all(np.isfinite(bwd))):
        return None
    vec = np.empty(n)
    vec[: twist + 1] = fwd / fwd[twist]
    vec[twist + 1 :] = bwd[twist + 1 :] / bwd[twist]
    return vec / np.linalg.norm(vec)


def _residual(matrix, lam, vec):
    return float(np.linalg.norm(matrix @ vec - lam * vec))


def ground_state_of(matrix: np.ndarray) -> GroundState:
    """Lowest eigenpair of a Hermitian matrix together with the gap to the next level.

    For irreducible real tridiagonal input the eigenvector is recomputed by a
    two-sided recurrence, which resolves amplitudes far below machine epsilon
    relative to the peak (decaying tails of localized ground states). The
    recomputed vector is kept only if it passes the same residual test.
    """
    m = np.asarray(matrix)
    check_hermitian(m)
    bands = tridiagonal_bands(m)
    w, v = _lowest_two(m, bands)
    energy = float(w[0])
    gap = float(w[1] - w[0]) if w.size > 1 else 0.0
    degenerate = gap < DEGENERACY_TOL
    if degenerate:
        gap = 0.0
    vec = np.asarray(v[:, 0], dtype=complex)

    if bands is not None and not degenerate and np.all(bands[1] != 0) and m.shape[0] > 2:
        d, e = bands
        base = vec.real
        twist = int(np.argmax(np.abs(base)))
        polished = _recurrence_vector(d, e, energy, twist)
        if polished is not None:
            polished = polished * np.sign(polished[twist] * base[twist])
            scale = max(float(np.abs(m).sum(axis=1).max()), 1.0)
            if (
                np.linalg.norm(polished - base) <= 1e-8
                and _residual(m.real, energy, polished) <= 1e-10 * scale
            ):
                vec = polished.astype(complex)

    vec = fix_phase(vec)
    return GroundState(energy, State(vec), gap, degenerate)

"""Dense linear algebra on a truncated number basis.

States are one-dimensional complex ndarrays indexed by occupation number
(entry n is the amplitude on |n>); operators are dense square complex
ndarrays with entry (m, n) = <m|O|n>.  hbar = 1 throughout, and every
function is pure.

Truncating at level N corrupts operator identities only near the edge of
the matrix: the ladder commutator picks up -N in its last diagonal entry,
and products of quadrature operators are wrong within two rows of the
boundary.  Callers keep state amplitudes negligible there, so the
corruption never reaches working precision.
"""

from __future__ import annotations

import numpy as np

# |norm - 1| allowed when taking an expectation value; states built from a
# 1e-12 Poisson tail sit far inside this.
NORM_TOL = 1e-10


def _require_finite(arr: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")


def ladder_matrices(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation matrices on the (n_max + 1)-level basis.

    a|n> = sqrt(n)|n-1> puts sqrt(n) on the first superdiagonal of the
    annihilation matrix; the creation matrix is its conjugate transpose.
    """
    if n_max < 0:
        raise ValueError(f"truncation level must be >= 0, got {n_max}")
    a = np.diag(np.sqrt(np.arange(1.0, n_max + 1.0)), 1).astype(complex)
    return a, a.conj().T


def number_operator(n_max: int) -> np.ndarray:
    """diag(0, 1, ..., n_max)."""
    return np.diag(np.arange(n_max + 1.0)).astype(complex)


def position_momentum(mass: float, freq: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Position (a + a†)/sqrt(2 m w) and momentum -i sqrt(m w / 2) (a - a†).

    Both are Hermitian by construction.
    """
    if mass <= 0.0:
        raise ValueError(f"mass must be positive, got {mass}")
    if freq <= 0.0:
        raise ValueError(f"frequency must be positive, got {freq}")
    a, ad = ladder_matrices(n_max)
    pos = (a + ad) / np.sqrt(2.0 * mass * freq)
    mom = -1j * np.sqrt(mass * freq / 2.0) * (a - ad)
    return pos, mom


def basis_state(n_max: int, n: int) -> np.ndarray:
    """Unit vector |n> on the (n_max + 1)-level basis."""
    if not 0 <= n <= n_max:
        raise ValueError(f"occupation {n} outside [0, {n_max}]")
    state = np.zeros(n_max + 1, dtype=complex)
    state[n] = 1.0
    return state


def expectation(state: np.ndarray, op: np.ndarray) -> complex:
    """<state|op|state> for a unit-norm state.

    Raises on dimension mismatch, non-finite input, or a state norm more
    than NORM_TOL away from one (the symptom of an undersized truncation).
    For Hermitian op the imaginary part of the result is pure roundoff,
    below 1e-10 in magnitude.
    """
    state = np.asarray(state, dtype=complex)
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {op.shape}")
    if state.ndim != 1 or state.shape[0] != op.shape[0]:
        raise ValueError(
            f"dimension mismatch: state {state.shape} vs operator {op.shape}"
        )
    _require_finite(state, "state")
    _require_finite(op, "operator")
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
    return complex(np.vdot(state, op @ state))


def normalize(state: np.ndarray) -> tuple[np.ndarray, float]:
    """Scale to unit norm; returns (unit state, original Euclidean norm)."""
    state = np.asarray(state, dtype=complex)
    _require_finite(state, "state")
    norm = float(np.linalg.norm(state))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return state / norm, norm

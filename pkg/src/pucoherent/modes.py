"""Linear canonical map between the fourth-order oscillator's phase space
(z, p_z, q, p_q) and the decoupled normal-mode pair (X, P, x, p).

With s = sqrt(big^2 - small^2) the forward map is

    X = (p_z + big^2 q) / (big s),     P = big (p_q + small^2 z) / s,
    x = (p_q + big^2 z) / s,           p = (p_z + small^2 q) / s.

It takes the constrained Hamiltonian

    H = [p_q^2 + 2 q p_z + (big^2 + small^2) q^2 - big^2 small^2 z^2] / 2

to (P^2 + big^2 X^2)/2 - (p^2 + small^2 x^2)/2: one ordinary oscillator
minus one ghost.  Inverting the four linear equations gives

    z  = (x - P/big) / s,              p_z = (big^2 p - big small^2 X) / s,
    q  = (big X - p) / s,              p_q = (big P - small^2 x) / s.

`misprinted_inverse_matrix` is a deliberately miswired variant of the
inverse (capital X swapped for lowercase x in the p_z row, the wrong
frequency factor in the p_q row).  It is kept as a test target: the
symplectic and round-trip checks must flag it with an O(1) residual,
which proves those checks have teeth.

The degenerate point big == small makes s vanish and the map singular;
PuoParams rejects it at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Block pairing (coordinate, momentum) x 2, same ordering on both sides of
# the map: (z, p_z, q, p_q) in, (X, P, x, p) out.
SYMPLECTIC_FORM = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class PuoParams:
    """The frequency pair, restricted to the non-degenerate band ordering."""

    big_freq: float
    small_freq: float

    def __post_init__(self) -> None:
        ok = (
            math.isfinite(self.big_freq)
            and math.isfinite(self.small_freq)
            and self.big_freq > self.small_freq > 0.0
        )
        if not ok:
            raise ValueError(
                "requires Omega > omega > 0, got "
                f"Omega={self.big_freq}, omega={self.small_freq}"
            )

    @property
    def split(self) -> float:
        """sqrt(big^2 - small^2), the scale normalizing the mode map."""
        return math.sqrt(self.big_freq**2 - self.small_freq**2)


@dataclass(frozen=True)
class PuoPhasePoint:
    """Phase-space point of the fourth-order oscillator."""

    z: float
    p_z: float
    q: float
    p_q: float

    def __post_init__(self) -> None:
        for name in ("z", "p_z", "q", "p_q"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.z, self.p_z, self.q, self.p_q])


@dataclass(frozen=True)
class ModePhasePoint:
    """Phase-space point of the decoupled normal modes."""

    X: float
    P: float
    x: float
    p: float

    def __post_init__(self) -> None:
        for name in ("X", "P", "x", "p"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.X, self.P, self.x, self.p])


def forward_matrix(params: PuoParams) -> np.ndarray:
    """Constant Jacobian of the map (z, p_z, q, p_q) -> (X, P, x, p)."""
    big, small, s = params.big_freq, params.small_freq, params.split
    return np.array(
        [
            [0.0, 1.0 / (big * s), big / s, 0.0],
            [big * small**2 / s, 0.0, 0.0, big / s],
            [big**2 / s, 0.0, 0.0, 1.0 / s],
            [0.0, 1.0 / s, small**2 / s, 0.0],
        ]
    )


def inverse_matrix(params: PuoParams) -> np.ndarray:
    """Constant Jacobian of the map (X, P, x, p) -> (z, p_z, q, p_q)."""
    big, small, s = params.big_freq, params.small_freq, params.split
    return np.array(
        [
            [0.0, -1.0 / (big * s), 1.0 / s, 0.0],
            [-big * small**2 / s, 0.0, 0.0, big**2 / s],
            [big / s, 0.0, 0.0, -1.0 / s],
            [0.0, big / s, -(small**2) / s, 0.0],
        ]
    )


def misprinted_inverse_matrix(params: PuoParams) -> np.ndarray:
    """Known-wrong inverse kept for detector tests; never use for physics.

    Differs from `inverse_matrix` in the p_z row (couples to x instead of
    X) and the p_q row (small-frequency factor on P instead of big).
    """
    big, small, s = params.big_freq, params.small_freq, params.split
    return np.array(
        [
            [0.0, -1.0 / (big * s), 1.0 / s, 0.0],
            [0.0, 0.0, -big * small**2 / s, big**2 / s],
            [big / s, 0.0, 0.0, -1.0 / s],
            [0.0, small / s, -(small**2) / s, 0.0],
        ]
    )


def forward(params: PuoParams, pt: PuoPhasePoint) -> ModePhasePoint:
    """Map a fourth-order-oscillator point to normal-mode coordinates."""
    vec = forward_matrix(params) @ pt.as_array()
    return ModePhasePoint(X=vec[0], P=vec[1], x=vec[2], p=vec[3])


def inverse(params: PuoParams, pt: ModePhasePoint) -> PuoPhasePoint:
    """Map a normal-mode point back to fourth-order-oscillator coordinates."""
    vec = inverse_matrix(params) @ pt.as_array()
    return PuoPhasePoint(z=vec[0], p_z=vec[1], q=vec[2], p_q=vec[3])


def symplectic_residual_of(matrix: np.ndarray) -> float:
    """max |T' S T - S| for a candidate linear canonical map T."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (4, 4):
        raise ValueError(f"expected a 4x4 map, got shape {matrix.shape}")
    defect = matrix.T @ SYMPLECTIC_FORM @ matrix - SYMPLECTIC_FORM
    return float(np.max(np.abs(defect)))


def symplectic_residual(params: PuoParams) -> float:
    """Symplectic defect of the forward map; zero up to roundoff."""
    return symplectic_residual_of(forward_matrix(params))


def hamiltonian_puo(params: PuoParams, pt: PuoPhasePoint) -> float:
    """Constrained Hamiltonian in (z, p_z, q, p_q) variables."""
    big_sq = params.big_freq**2
    small_sq = params.small_freq**2
    return 0.5 * (
        pt.p_q**2
        + 2.0 * pt.q * pt.p_z
        + (big_sq + small_sq) * pt.q**2
        - big_sq * small_sq * pt.z**2
    )


def hamiltonian_modes(params: PuoParams, pt: ModePhasePoint) -> float:
    """Decoupled Hamiltonian: ordinary oscillator minus ghost."""
    return 0.5 * (pt.P**2 + params.big_freq**2 * pt.X**2) - 0.5 * (
        pt.p**2 + params.small_freq**2 * pt.x**2
    )

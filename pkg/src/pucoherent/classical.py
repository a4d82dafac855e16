"""Classical side of the fourth-order oscillator

    z'''' + (big^2 + small^2) z'' + big^2 small^2 z = 0,

whose general solution superposes oscillations at the two frequencies.
This module provides the closed two-frequency solution, a fixed-step
fourth-order Runge-Kutta integrator for the equivalent first-order system,
finite-difference stencils for checking differential identities, and the
bridge verifying that the quantum mean position follows a classical
trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import puo
from .modes import PuoParams
from .puo import PuoStateLabel

# Centered stencils: 5-point second derivative and 7-point fourth
# derivative, both O(h^4).  The fourth-derivative stencil divides float
# noise by h^4, so it needs a ~10x coarser default step than the
# second-derivative one to stay at ~1e-7 relative accuracy.
_STENCIL_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_STENCIL_D4 = np.array([-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0]) / 6.0
D2_STEP_SCALE = 1e-3
D4_STEP_SCALE = 1e-2


@dataclass(frozen=True)
class ClassicalInit:
    """Value and first three time derivatives at t = 0."""

    z0: float
    zdot0: float
    zddot0: float
    zdddot0: float

    def __post_init__(self) -> None:
        for name in ("z0", "zdot0", "zddot0", "zdddot0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class Trajectory:
    """Uniform-step trajectory of z and its first three derivatives."""

    times: np.ndarray
    z: np.ndarray
    zdot: np.ndarray
    zddot: np.ndarray
    zdddot: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.times)
        for name in ("z", "zdot", "zddot", "zdddot"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length differs from times")
        if n < 2 or np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing with >= 2 points")


def analytic_solution(
    params: PuoParams,
    amp_big: float,
    phase_big: float,
    amp_small: float,
    phase_small: float,
    t,
):
    """amp_big sin(big t + phase_big) + amp_small sin(small t + phase_small).

    Accepts scalar or array t.
    """
    return amp_big * np.sin(params.big_freq * t + phase_big) + amp_small * np.sin(
        params.small_freq * t + phase_small
    )


def integrate(
    params: PuoParams, init: ClassicalInit, t_end: float, dt: float
) -> Trajectory:
    """Classic 4-stage Runge-Kutta on u' = A u, u = (z, z', z'', z''').

    Fixed step for determinism; global error O(dt^4).  Rejects steps
    coarser than a tenth of the fast period scale.
    """
    if t_end <= 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt > 0.1 / params.big_freq:
        raise ValueError(
            f"step {dt} too large: need dt <= {0.1 / params.big_freq} "
            f"to resolve frequency {params.big_freq}"
        )
    big_sq = params.big_freq**2
    small_sq = params.small_freq**2
    a_mat = np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-big_sq * small_sq, 0.0, -(big_sq + small_sq), 0.0],
        ]
    )
    n_steps = max(1, int(round(t_end / dt)))
    out = np.empty((n_steps + 1, 4))
    u = np.array([init.z0, init.zdot0, init.zddot0, init.zdddot0])
    out[0] = u
    for k in range(n_steps):
        k1 = a_mat @ u
        k2 = a_mat @ (u + 0.5 * dt * k1)
        k3 = a_mat @ (u + 0.5 * dt * k2)
        k4 = a_mat @ (u + dt * k3)
        u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = u
    if not np.all(np.isfinite(out)):
        raise ArithmeticError("non-finite state encountered during integration")
    times = dt * np.arange(n_steps + 1)
    return Trajectory(
        times=times, z=out[:, 0], zdot=out[:, 1], zddot=out[:, 2], zdddot=out[:, 3]
    )


def init_from_label(params: PuoParams, label: PuoStateLabel) -> ClassicalInit:
    """Initial data whose trajectory should track the quantum mean position.

    Differentiates the two-sine form with amplitudes sqrt(2J/big)/s and
    sqrt(2j/small)/s and initial phases taken at the label's own time.
    """
    s = params.split
    amp_big = math.sqrt(2.0 * label.J / params.big_freq) / s
    amp_small = math.sqrt(2.0 * label.j / params.small_freq) / s
    phase_big, phase_small = puo.phases(params, label)
    big, small = params.big_freq, params.small_freq
    return ClassicalInit(
        z0=amp_big * math.sin(phase_big) + amp_small * math.sin(phase_small),
        zdot0=amp_big * big * math.cos(phase_big)
        + amp_small * small * math.cos(phase_small),
        zddot0=-amp_big * big**2 * math.sin(phase_big)
        - amp_small * small**2 * math.sin(phase_small),
        zdddot0=-amp_big * big**3 * math.cos(phase_big)
        - amp_small * small**3 * math.cos(phase_small),
    )


def match_expectation(
    params: PuoParams, label: PuoStateLabel, t_end: float, dt: float
) -> float:
    """max |z_classical(t) - <z>(t)| over the integration grid.

    The integrator starts from `init_from_label`, the expectation comes
    from the closed-form report, and the two should agree to integrator
    accuracy: the mean position is an exact classical solution.
    """
    traj = integrate(params, init_from_label(params, label), t_end, dt)
    worst = 0.0
    for k, tau in enumerate(traj.times):
        mean_z = puo.closed_moments(
            params, replace(label, t=label.t + float(tau))
        ).mean_z
        worst = max(worst, abs(float(traj.z[k]) - mean_z))
    return worst


def second_derivative(f: Callable[[float], float], t: float, h: float) -> float:
    """5-point centered second derivative, O(h^4)."""
    offsets = np.arange(-2.0, 3.0)
    values = np.array([f(t + k * h) for k in offsets])
    return float(_STENCIL_D2 @ values) / h**2


def fourth_derivative(f: Callable[[float], float], t: float, h: float) -> float:
    """7-point centered fourth derivative, O(h^4)."""
    offsets = np.arange(-3.0, 4.0)
    values = np.array([f(t + k * h) for k in offsets])
    return float(_STENCIL_D4 @ values) / h**4


def equation_residual(
    params: PuoParams,
    f: Callable[[float], float],
    t: float,
    h2: float | None = None,
    h4: float | None = None,
) -> float:
    """Relative residual of z'''' + (big^2 + small^2) z'' + big^2 small^2 z.

    Derivatives come from the centered stencils; the residual is scaled by
    the largest of the three terms, so a solution of the equation scores
    ~1e-7 (stencil floor) regardless of amplitude.
    """
    if h2 is None:
        h2 = D2_STEP_SCALE / params.big_freq
    if h4 is None:
        h4 = D4_STEP_SCALE / params.big_freq
    big_sq = params.big_freq**2
    small_sq = params.small_freq**2
    term4 = fourth_derivative(f, t, h4)
    term2 = (big_sq + small_sq) * second_derivative(f, t, h2)
    term0 = big_sq * small_sq * f(t)
    scale = max(abs(term4), abs(term2), abs(term0), 1e-30)
    return abs(term4 + term2 + term0) / scale

"""Coherent states for a single oscillator, ordinary or ghost.

An OscillatorSpec with sign +1 is the usual oscillator with spectrum
freq*(n + 1/2); sign -1 is its ghost mirror with spectrum -freq*(n + 1/2):
the same positive-norm number states, energies running downward.  Both
admit coherent states labelled by a non-negative intensity ("strength",
which sets the mean excitation) and a phase that advances linearly in
time.  In the number basis the two cases collapse to the same Poisson
superposition

    amp(n) = exp(-|alpha|^2 / 2) * alpha^n / sqrt(n!),

differing only in the annihilation-operator eigenvalue:

    sign +1:  alpha = sqrt(strength) * exp(-i * phase)
    sign -1:  alpha = -i * sqrt(strength) * exp(+i * phase)

The opposite sense of phase rotation is what makes the label convention
phase = phase0 + freq * t consistent with Schroedinger evolution for both
signs: multiplying amplitude n by exp(-i * E_n * t) with
E_n = sign * freq * (n + 1/2) shifts the phase label by freq * t, up to
one global phase.

First moments trace the classical orbit, with the ghost's mean position
and momentum running a quarter turn out of phase with the ordinary
oscillator's.  Dispersions are label-independent -- 1/(2 m freq) in
position, m freq / 2 in momentum -- so every such state saturates the
uncertainty bound 1/4 and keeps it for all time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# Above this intensity the Poisson series needs levels past n ~ 170 where
# plain factorials overflow doubles; the log-space recurrence below would
# cope, but nothing in this project needs such states.
STRENGTH_CAP = 50.0

DEFAULT_TAIL_TOL = 1e-12


class TruncationError(ValueError):
    """Requested truncation cannot hold the Poisson tail below tolerance."""


@dataclass(frozen=True)
class OscillatorSpec:
    """One oscillator: mass, angular frequency (hbar = 1), energy sign."""

    mass: float
    freq: float
    sign: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mass) and self.mass > 0.0):
            raise ValueError(f"mass must be positive and finite, got {self.mass}")
        if not (math.isfinite(self.freq) and self.freq > 0.0):
            raise ValueError(f"frequency must be positive and finite, got {self.freq}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class GcsLabel:
    """Coherent-state label: intensity >= 0 and a phase in radians."""

    strength: float
    phase: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.strength) and 0.0 <= self.strength <= STRENGTH_CAP):
            raise ValueError(
                f"strength must lie in [0, {STRENGTH_CAP}], got {self.strength}"
            )
        if not math.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase}")


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of position/momentum plus derived numbers."""

    mean_pos: float
    mean_mom: float
    mean_pos_sq: float
    mean_mom_sq: float
    var_pos: float
    var_mom: float
    uncertainty_product: float
    energy: float


def coherent_parameter(spec: OscillatorSpec, label: GcsLabel) -> complex:
    """Annihilation-operator eigenvalue alpha for the labelled state."""
    root = math.sqrt(label.strength)
    if spec.sign > 0:
        return root * cmath.exp(-1j * label.phase)
    return -1j * root * cmath.exp(1j * label.phase)


def truncation_for(strength: float, tail_tol: float) -> int:
    """Smallest N whose Poisson(strength) tail mass above N is <= tail_tol.

    The tail equals the squared-norm deficit of the state truncated at N,
    so this is the rule that sizes the basis.  Computed by the stable pmf
    recurrence term(n+1) = term(n) * strength / (n + 1), summing the
    suffix from the far end so no cancellation against 1 occurs.
    """
    if not (math.isfinite(strength) and strength >= 0.0):
        raise ValueError(f"strength must be >= 0, got {strength}")
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail tolerance must be in (0, 1), got {tail_tol}")
    if strength == 0.0:
        return 0
    if strength > 700.0:
        raise ValueError(f"strength {strength} out of supported range")
    terms = [math.exp(-strength)]
    n = 0
    while True:
        ratio = strength / (n + 1)
        terms.append(terms[-1] * ratio)
        n += 1
        if n > strength and ratio <= 0.5 and terms[-1] <= tail_tol * 1e-6:
            break
    # past the stopping point the terms fall at least geometrically with
    # ratio <= 1/2, so everything dropped is below the last kept term
    suffix = terms[-1]
    for k in range(len(terms) - 1, -1, -1):
        suffix += terms[k]
        if suffix > tail_tol:
            return k
    return 0


def build_state(
    spec: OscillatorSpec,
    label: GcsLabel,
    n_max: int,
    *,
    tail_tol: float = DEFAULT_TAIL_TOL,
    enforce_tail: bool = True,
) -> np.ndarray:
    """Number-basis amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!).

    Raises TruncationError when n_max cannot hold the Poisson tail below
    tail_tol; pass enforce_tail=False to build a deliberately short state.
    Moduli are assembled in log space (iterative log-factorial recurrence),
    so nothing overflows even for n well past 170.
    """
    if n_max < 0:
        raise ValueError(f"truncation level must be >= 0, got {n_max}")
    if enforce_tail:
        needed = truncation_for(label.strength, tail_tol)
        if n_max < needed:
            raise TruncationError(
                f"truncation {n_max} too small for strength {label.strength}: "
                f"need >= {needed} to push the Poisson tail below {tail_tol}"
            )
    if label.strength == 0.0:
        amps = np.zeros(n_max + 1, dtype=complex)
        amps[0] = 1.0
        return amps
    n = np.arange(n_max + 1)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1.0, n_max + 1.0)))))
    log_mod = (
        -0.5 * label.strength
        + 0.5 * n * math.log(label.strength)
        - 0.5 * log_fact
    )
    theta = cmath.phase(coherent_parameter(spec, label))
    return np.exp(log_mod) * np.exp(1j * theta * n)


def first_moments(spec: OscillatorSpec, label: GcsLabel) -> tuple[float, float]:
    """(mean position, mean momentum).

    sign +1: sqrt(2 strength / (m freq)) cos(phase), -sqrt(2 m freq strength) sin(phase)
    sign -1: sqrt(2 strength / (m freq)) sin(phase), -sqrt(2 m freq strength) cos(phase)
    """
    mf = spec.mass * spec.freq
    amp_pos = math.sqrt(2.0 * label.strength / mf)
    amp_mom = math.sqrt(2.0 * mf * label.strength)
    if spec.sign > 0:
        return amp_pos * math.cos(label.phase), -amp_mom * math.sin(label.phase)
    return amp_pos * math.sin(label.phase), -amp_mom * math.cos(label.phase)


def gcs_energy(spec: OscillatorSpec, label: GcsLabel) -> float:
    """Mean energy sign * freq * (1 + 2 strength) / 2."""
    return spec.sign * spec.freq * (1.0 + 2.0 * label.strength) / 2.0


def second_moments_and_dispersions(spec: OscillatorSpec, label: GcsLabel) -> MomentSet:
    """Closed-form second moments, dispersions, uncertainty product, energy.

    The second moments carry the label; the variances do not:
    var_pos = 1/(2 m freq) and var_mom = m freq / 2 for every label, so the
    uncertainty product is exactly 1/4.
    """
    mf = spec.mass * spec.freq
    st = label.strength
    sin_sq = math.sin(label.phase) ** 2
    cos_sq = math.cos(label.phase) ** 2
    if spec.sign > 0:
        mean_pos_sq = (1.0 + 4.0 * st * cos_sq) / (2.0 * mf)
        mean_mom_sq = mf * (1.0 + 4.0 * st * sin_sq) / 2.0
    else:
        mean_pos_sq = (1.0 + 4.0 * st * sin_sq) / (2.0 * mf)
        mean_mom_sq = mf * (1.0 + 4.0 * st * cos_sq) / 2.0
    mean_pos, mean_mom = first_moments(spec, label)
    return MomentSet(
        mean_pos=mean_pos,
        mean_mom=mean_mom,
        mean_pos_sq=mean_pos_sq,
        mean_mom_sq=mean_mom_sq,
        var_pos=1.0 / (2.0 * mf),
        var_mom=mf / 2.0,
        uncertainty_product=0.25,
        energy=gcs_energy(spec, label),
    )

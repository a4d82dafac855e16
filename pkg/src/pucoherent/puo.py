"""Coherent states of the fourth-order oscillator as a product of one
ordinary-oscillator state (frequency big, intensity J, phase Gamma) and one
ghost state (frequency small, intensity j, phase gamma), with all moments
of the physical variables z and p_z.

Every report is produced twice:

* `closed_moments` evaluates the closed formulas.  With s^2 = big^2 -
  small^2 and running phases Gamma = Gamma0 + big*t, gamma = gamma0 +
  small*t (unit masses),

      <z>    = [sqrt(2J/big) sin Gamma + sqrt(2j/small) sin gamma] / s
      <q>    = <dz/dt> = [sqrt(2 small j) cos gamma + sqrt(2 big J) cos Gamma] / s
      <p_z>  = -[big^2 sqrt(2 small j) cos gamma + small^2 sqrt(2 big J) cos Gamma] / s
      <z^2>  = [ (1/small + 1/big)/2
                 + 2 (sqrt(j/small) sin gamma + sqrt(J/big) sin Gamma)^2 ] / s^2
      <p_z^2> = [ big small (small^3 + big^3)/2
                 + 2 (small^2 sqrt(big J) cos Gamma
                      + big^2 sqrt(small j) cos gamma)^2 ] / s^2

  The label terms cancel in the variances, leaving the time-independent

      var z   = 1 / (2 big small (big - small))
      var p_z = big small (small^2 + big^2 - small big) / (2 (big - small))

  whose product (small^2 + big^2 - small big) / (4 (big - small)^2) always
  exceeds the canonical 1/4.  The energy big(1+2J)/2 - small(1+2j)/2 is
  positive whenever J = j.

* `numeric_moments` rebuilds the same numbers by brute force: truncated
  number-basis states for each mode, dense operator expectations, then the
  inverse mode map applied by linearity.  Cross-mode covariances factorize
  because the state is a product.  This is the oracle the closed formulas
  are verified against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import fock, gcs, modes
from .gcs import DEFAULT_TAIL_TOL, GcsLabel, MomentSet, OscillatorSpec
from .modes import ModePhasePoint, PuoParams

# Quadrature operators squared reach two levels past any occupation, so two
# guard rows on top of the tail rule keep the retained block's action exact.
TRUNCATION_PAD = 2


@dataclass(frozen=True)
class PuoStateLabel:
    """Product-state label: intensities J, j, initial phases, and a time."""

    J: float
    Gamma0: float
    j: float
    gamma0: float
    t: float = 0.0

    def __post_init__(self) -> None:
        for name in ("J", "j"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= gcs.STRENGTH_CAP):
                raise ValueError(
                    f"{name} must lie in [0, {gcs.STRENGTH_CAP}], got {value}"
                )
        for name in ("Gamma0", "gamma0", "t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class MomentReport:
    """Moments, dispersions, uncertainty product, energy, constraint check."""

    mean_z: float
    mean_q: float
    mean_pz: float
    mean_zdot: float
    mean_z_sq: float
    mean_pz_sq: float
    var_z: float
    var_pz: float
    uncertainty_product: float
    energy: float
    constraint_residual: float

    FIELDS = (
        "mean_z",
        "mean_q",
        "mean_pz",
        "mean_zdot",
        "mean_z_sq",
        "mean_pz_sq",
        "var_z",
        "var_pz",
        "uncertainty_product",
        "energy",
        "constraint_residual",
    )


class ProductAsymptotics(NamedTuple):
    exact: float
    leading: float
    gap: float


def phases(params: PuoParams, label: PuoStateLabel) -> tuple[float, float]:
    """Running phases (Gamma, gamma) at the label's time."""
    return (
        label.Gamma0 + params.big_freq * label.t,
        label.gamma0 + params.small_freq * label.t,
    )


def closed_moments(params: PuoParams, label: PuoStateLabel) -> MomentReport:
    """Evaluate every closed formula; the constraint residual is 0 here."""
    big, small, s = params.big_freq, params.small_freq, params.split
    s_sq = big**2 - small**2
    big_phase, small_phase = phases(params, label)
    mean_z = (
        math.sqrt(2.0 * label.J / big) * math.sin(big_phase)
        + math.sqrt(2.0 * label.j / small) * math.sin(small_phase)
    ) / s
    mean_q = (
        math.sqrt(2.0 * small * label.j) * math.cos(small_phase)
        + math.sqrt(2.0 * big * label.J) * math.cos(big_phase)
    ) / s
    mean_pz = (
        -(
            big**2 * math.sqrt(2.0 * small * label.j) * math.cos(small_phase)
            + small**2 * math.sqrt(2.0 * big * label.J) * math.cos(big_phase)
        )
        / s
    )
    mean_z_sq = (
        0.5 * (1.0 / small + 1.0 / big)
        + 2.0
        * (
            math.sqrt(label.j / small) * math.sin(small_phase)
            + math.sqrt(label.J / big) * math.sin(big_phase)
        )
        ** 2
    ) / s_sq
    mean_pz_sq = (
        0.5 * big * small * (small**3 + big**3)
        + 2.0
        * (
            small**2 * math.sqrt(big * label.J) * math.cos(big_phase)
            + big**2 * math.sqrt(small * label.j) * math.cos(small_phase)
        )
        ** 2
    ) / s_sq
    var_z = 1.0 / (2.0 * big * small * (big - small))
    var_pz = big * small * (small**2 + big**2 - small * big) / (2.0 * (big - small))
    product = (small**2 + big**2 - small * big) / (4.0 * (big - small) ** 2)
    energy = 0.5 * big * (1.0 + 2.0 * label.J) - 0.5 * small * (1.0 + 2.0 * label.j)
    return MomentReport(
        mean_z=mean_z,
        mean_q=mean_q,
        mean_pz=mean_pz,
        mean_zdot=mean_q,
        mean_z_sq=mean_z_sq,
        mean_pz_sq=mean_pz_sq,
        var_z=var_z,
        var_pz=var_pz,
        uncertainty_product=product,
        energy=energy,
        constraint_residual=0.0,
    )


def auto_truncation(label: PuoStateLabel, tail_tol: float = DEFAULT_TAIL_TOL) -> int:
    """Truncation holding both modes' Poisson tails below tail_tol."""
    return gcs.truncation_for(max(label.J, label.j), tail_tol) + TRUNCATION_PAD


def mode_moments_numeric(
    spec: OscillatorSpec,
    label: GcsLabel,
    n_max: int | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> MomentSet:
    """Single-mode moments by dense expectation values, no closed formulas."""
    if n_max is None:
        n_max = gcs.truncation_for(label.strength, tail_tol) + TRUNCATION_PAD
    state = gcs.build_state(spec, label, n_max, tail_tol=tail_tol)
    pos, mom = fock.position_momentum(spec.mass, spec.freq, n_max)
    mean_pos = fock.expectation(state, pos).real
    mean_mom = fock.expectation(state, mom).real
    mean_pos_sq = fock.expectation(state, pos @ pos).real
    mean_mom_sq = fock.expectation(state, mom @ mom).real
    var_pos = mean_pos_sq - mean_pos**2
    var_mom = mean_mom_sq - mean_mom**2
    energy = spec.sign * (
        mean_mom_sq / (2.0 * spec.mass)
        + spec.mass * spec.freq**2 * mean_pos_sq / 2.0
    )
    return MomentSet(
        mean_pos=mean_pos,
        mean_mom=mean_mom,
        mean_pos_sq=mean_pos_sq,
        mean_mom_sq=mean_mom_sq,
        var_pos=var_pos,
        var_mom=var_mom,
        uncertainty_product=var_pos * var_mom,
        energy=energy,
    )


def numeric_moments(
    params: PuoParams,
    label: PuoStateLabel,
    n_max: int | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> MomentReport:
    """Brute-force report from truncated number-basis expectation values.

    The energy is evaluated through both Hamiltonian forms -- mode
    difference and the (z, p_z, q, p_q) quadratic form -- and the two must
    agree; a mismatch means the truncation or the map is broken, so it
    raises instead of returning quietly.
    """
    if n_max is None:
        n_max = auto_truncation(label, tail_tol)
    big, small, s = params.big_freq, params.small_freq, params.split
    s_sq = big**2 - small**2
    big_phase, small_phase = phases(params, label)
    bm = mode_moments_numeric(
        OscillatorSpec(mass=1.0, freq=big, sign=+1),
        GcsLabel(strength=label.J, phase=big_phase),
        n_max,
        tail_tol,
    )
    sm = mode_moments_numeric(
        OscillatorSpec(mass=1.0, freq=small, sign=-1),
        GcsLabel(strength=label.j, phase=small_phase),
        n_max,
        tail_tol,
    )

    mean_z = (sm.mean_pos - bm.mean_mom / big) / s
    mean_pz = (big**2 * sm.mean_mom - big * small**2 * bm.mean_pos) / s
    mean_zdot = (big * bm.mean_pos - sm.mean_mom) / s
    # <q> through the inverse-map row; same linear combination as mean_zdot
    # but routed through the matrix, so the residual genuinely ties the
    # velocity relation to the map
    mode_mean = ModePhasePoint(
        X=bm.mean_pos, P=bm.mean_mom, x=sm.mean_pos, p=sm.mean_mom
    )
    mean_q = modes.inverse(params, mode_mean).q
    constraint_residual = abs(mean_zdot - mean_q)

    # product state: cross-mode covariances factorize
    mean_z_sq = (
        sm.mean_pos_sq
        + bm.mean_mom_sq / big**2
        - 2.0 * sm.mean_pos * bm.mean_mom / big
    ) / s_sq
    mean_pz_sq = (
        big**4 * sm.mean_mom_sq
        + big**2 * small**4 * bm.mean_pos_sq
        - 2.0 * big**3 * small**2 * sm.mean_mom * bm.mean_pos
    ) / s_sq
    var_z = mean_z_sq - mean_z**2
    var_pz = mean_pz_sq - mean_pz**2

    energy = bm.energy + sm.energy
    energy_alt = _energy_quadratic_form(params, bm, sm)
    if abs(energy_alt - energy) > 1e-8 * max(1.0, abs(energy)):
        raise ArithmeticError(
            f"energy cross-check failed: {energy} (mode form) vs "
            f"{energy_alt} (quadratic form)"
        )

    return MomentReport(
        mean_z=mean_z,
        mean_q=mean_q,
        mean_pz=mean_pz,
        mean_zdot=mean_zdot,
        mean_z_sq=mean_z_sq,
        mean_pz_sq=mean_pz_sq,
        var_z=var_z,
        var_pz=var_pz,
        uncertainty_product=var_z * var_pz,
        energy=energy,
        constraint_residual=constraint_residual,
    )


def _energy_quadratic_form(params: PuoParams, bm: MomentSet, sm: MomentSet) -> float:
    """<H> through the (z, p_z, q, p_q) quadratic form, by factorization.

    Every cross term pairs operators from different modes, which commute,
    so no ordering question arises.
    """
    big, small = params.big_freq, params.small_freq
    s_sq = big**2 - small**2
    mean_q_pz = (
        big**3 * bm.mean_pos * sm.mean_mom
        - big**2 * small**2 * bm.mean_pos_sq
        - big**2 * sm.mean_mom_sq
        + big * small**2 * bm.mean_pos * sm.mean_mom
    ) / s_sq
    mean_pq_sq = (
        big**2 * bm.mean_mom_sq
        + small**4 * sm.mean_pos_sq
        - 2.0 * big * small**2 * bm.mean_mom * sm.mean_pos
    ) / s_sq
    mean_q_sq = (
        big**2 * bm.mean_pos_sq
        + sm.mean_mom_sq
        - 2.0 * big * bm.mean_pos * sm.mean_mom
    ) / s_sq
    mean_z_sq = (
        sm.mean_pos_sq
        + bm.mean_mom_sq / big**2
        - 2.0 * sm.mean_pos * bm.mean_mom / big
    ) / s_sq
    return 0.5 * (
        mean_pq_sq
        + 2.0 * mean_q_pz
        + (big**2 + small**2) * mean_q_sq
        - big**2 * small**2 * mean_z_sq
    )


def constraint_residual(
    params: PuoParams, label: PuoStateLabel, n_max: int | None = None
) -> float:
    """|<dz/dt> - <q>| from numeric single-mode moments."""
    return numeric_moments(params, label, n_max).constraint_residual


def asymptotic_product(params: PuoParams) -> ProductAsymptotics:
    """Exact uncertainty product, its wide-band limit 1/4 (1 + small/big),
    and the gap between them (the gap falls off as (small/big)^2)."""
    big, small = params.big_freq, params.small_freq
    exact = (small**2 + big**2 - small * big) / (4.0 * (big - small) ** 2)
    leading = 0.25 * (1.0 + small / big)
    return ProductAsymptotics(exact=exact, leading=leading, gap=abs(exact - leading))


def energy_positivity(params: PuoParams, strength: float) -> tuple[float, bool]:
    """Energy at equal intensities J = j = strength, and its sign.

    (big - small)(1 + 2 strength)/2 is positive for every strength >= 0
    because the band ordering big > small is enforced by PuoParams.
    """
    if not (math.isfinite(strength) and strength >= 0.0):
        raise ValueError(f"strength must be >= 0, got {strength}")
    energy = 0.5 * (params.big_freq - params.small_freq) * (1.0 + 2.0 * strength)
    return energy, energy > 0.0

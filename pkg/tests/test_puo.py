"""Product-state moments of the fourth-order oscillator: closed formulas
against the dense number-basis oracle, constraint, asymptotics, energy."""

import math
from dataclasses import replace

import numpy as np
import pytest

from pucoherent import classical, fock, gcs, modes, puo

P21 = modes.PuoParams(big_freq=2.0, small_freq=1.0)
SQRT3 = math.sqrt(3.0)

REL = 1e-8
ABS = 1e-10


def margin(closed, numeric):
    return abs(closed - numeric) / max(REL * max(abs(closed), abs(numeric)), ABS)


def vacuum_label():
    return puo.PuoStateLabel(J=0.0, Gamma0=0.0, j=0.0, gamma0=0.0)


# --------------------------------------------------------- closed values


def test_label_validation():
    with pytest.raises(ValueError):
        puo.PuoStateLabel(J=-1.0, Gamma0=0.0, j=0.0, gamma0=0.0)
    with pytest.raises(ValueError):
        puo.PuoStateLabel(J=0.0, Gamma0=math.nan, j=0.0, gamma0=0.0)


def test_closed_vacuum_spot_values():
    report = puo.closed_moments(P21, vacuum_label())
    assert report.var_z == 0.25
    assert report.var_pz == 3.0
    assert report.uncertainty_product == 0.75
    assert report.energy == 0.5
    assert report.mean_z == 0.0
    assert report.constraint_residual == 0.0


def test_closed_mean_z_spot():
    label = puo.PuoStateLabel(J=0.5, Gamma0=math.pi / 2.0, j=0.5, gamma0=math.pi / 2.0)
    mean_z = puo.closed_moments(P21, label).mean_z
    assert mean_z == pytest.approx((math.sqrt(0.5) + 1.0) / SQRT3, rel=1e-14)
    assert mean_z == pytest.approx(0.9855985596534887, abs=1e-12)


def test_closed_mean_pz_spot():
    label = puo.PuoStateLabel(J=0.5, Gamma0=0.0, j=0.5, gamma0=0.0)
    mean_pz = puo.closed_moments(P21, label).mean_pz
    assert mean_pz == pytest.approx(-(4.0 + math.sqrt(2.0)) / SQRT3, rel=1e-14)
    assert mean_pz == pytest.approx(-3.125897657686229, abs=1e-12)


def test_closed_variance_identity():
    label = puo.PuoStateLabel(J=1.7, Gamma0=0.4, j=0.9, gamma0=2.2, t=0.8)
    report = puo.closed_moments(P21, label)
    assert report.mean_z_sq - report.mean_z**2 == pytest.approx(
        report.var_z, rel=1e-10
    )
    assert report.mean_pz_sq - report.mean_pz**2 == pytest.approx(
        report.var_pz, rel=1e-10
    )
    assert report.var_z * report.var_pz == pytest.approx(
        report.uncertainty_product, rel=1e-12
    )
    assert report.mean_q == report.mean_zdot


# ----------------------------------------------------- numeric vs closed


def test_numeric_matches_closed_field_by_field():
    for ratio in (1.1, 2.0, 5.0):
        params = modes.PuoParams(big_freq=ratio, small_freq=1.0)
        for label in (
            vacuum_label(),
            puo.PuoStateLabel(J=0.5, Gamma0=0.0, j=0.5, gamma0=0.0),
            puo.PuoStateLabel(J=2.0, Gamma0=0.7, j=0.5, gamma0=2.1, t=1.3),
            puo.PuoStateLabel(J=0.0, Gamma0=0.0, j=2.0, gamma0=math.pi, t=3.0),
        ):
            closed = puo.closed_moments(params, label)
            numeric = puo.numeric_moments(params, label)
            for field in puo.MomentReport.FIELDS:
                if field == "constraint_residual":
                    continue
                c, n = getattr(closed, field), getattr(numeric, field)
                assert margin(c, n) <= 1.0, f"{field} ratio={ratio}: {c} vs {n}"


def test_numeric_vacuum():
    report = puo.numeric_moments(P21, vacuum_label())
    assert report.mean_z == 0.0
    assert report.var_z == pytest.approx(0.25, rel=1e-12)


def test_numeric_dispersions_time_invariant():
    label = puo.PuoStateLabel(J=1.0, Gamma0=0.0, j=1.0, gamma0=0.0)
    reports = [
        puo.numeric_moments(P21, replace(label, t=t)) for t in (0.0, 0.7, 1.4, 2.1)
    ]
    var_z = [r.var_z for r in reports]
    var_pz = [r.var_pz for r in reports]
    assert max(var_z) - min(var_z) <= 1e-8 * max(var_z)
    assert max(var_pz) - min(var_pz) <= 1e-8 * max(var_pz)


def test_numeric_respects_explicit_truncation():
    label = puo.PuoStateLabel(J=2.0, Gamma0=0.0, j=0.0, gamma0=0.0)
    with pytest.raises(gcs.TruncationError):
        puo.numeric_moments(P21, label, n_max=3)


def test_tensor_product_factorization_spot_check():
    # the full Kronecker route must agree with the factorized second moments
    n_max = 12
    label = puo.PuoStateLabel(J=0.5, Gamma0=0.4, j=0.5, gamma0=1.3)
    big_phase, small_phase = puo.phases(P21, label)
    big_state = gcs.build_state(
        gcs.OscillatorSpec(1.0, 2.0, +1), gcs.GcsLabel(0.5, big_phase), n_max
    )
    small_state = gcs.build_state(
        gcs.OscillatorSpec(1.0, 1.0, -1), gcs.GcsLabel(0.5, small_phase), n_max
    )
    state = np.kron(big_state, small_state)
    eye = np.eye(n_max + 1, dtype=complex)
    pos_b, mom_b = fock.position_momentum(1.0, 2.0, n_max)
    pos_s, mom_s = fock.position_momentum(1.0, 1.0, n_max)
    op_P = np.kron(mom_b, eye)
    op_X = np.kron(pos_b, eye)
    op_x = np.kron(eye, pos_s)
    op_p = np.kron(eye, mom_s)
    s = P21.split
    op_z = (op_x - op_P / 2.0) / s
    op_pz = (4.0 * op_p - 2.0 * op_X) / s
    report = puo.numeric_moments(P21, label, n_max=n_max)
    z_sq = fock.expectation(state, op_z @ op_z).real
    pz_sq = fock.expectation(state, op_pz @ op_pz).real
    assert abs(z_sq - report.mean_z_sq) <= 1e-10
    assert abs(pz_sq - report.mean_pz_sq) <= 1e-10
    op_h = 0.5 * (op_P @ op_P + 4.0 * op_X @ op_X) - 0.5 * (
        op_p @ op_p + op_x @ op_x
    )
    assert abs(fock.expectation(state, op_h).real - report.energy) <= 1e-10


# ------------------------------------------------------------ constraint


def test_constraint_residual_spot():
    label = puo.PuoStateLabel(J=0.5, Gamma0=0.0, j=0.5, gamma0=0.0)
    assert puo.constraint_residual(P21, label) <= 1e-10


def test_constraint_residual_vacuum():
    assert puo.constraint_residual(P21, vacuum_label()) <= 1e-15


def test_constraint_residual_grid():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        label = puo.PuoStateLabel(
            J=float(rng.uniform(0.0, 2.0)),
            Gamma0=float(rng.uniform(-math.pi, math.pi)),
            j=float(rng.uniform(0.0, 2.0)),
            gamma0=float(rng.uniform(-math.pi, math.pi)),
            t=float(rng.uniform(0.0, 3.0)),
        )
        worst = max(worst, puo.constraint_residual(P21, label))
    assert worst <= 1e-9


# ----------------------------------------------------------- asymptotics


def test_asymptotic_product_ratio_100():
    asym = puo.asymptotic_product(modes.PuoParams(big_freq=100.0, small_freq=1.0))
    assert asym.exact == pytest.approx(9901.0 / 39204.0, rel=1e-15)
    assert asym.exact == pytest.approx(0.2525508, abs=1e-6)
    assert asym.leading == 0.2525
    assert asym.gap == pytest.approx(5.076e-5, abs=1e-7)


def test_asymptotic_gap_quadratic_falloff():
    asym = puo.asymptotic_product(modes.PuoParams(big_freq=1000.0, small_freq=1.0))
    assert asym.gap <= 2.0 * (1.0 / 1000.0) ** 2


def test_asymptotic_product_ratio_2():
    asym = puo.asymptotic_product(P21)
    assert asym.exact == 0.75


def test_product_decreases_toward_quarter():
    ratios = [2.0, 5.0, 20.0, 100.0, 1000.0]
    values = [
        puo.asymptotic_product(modes.PuoParams(r, 1.0)).exact for r in ratios
    ]
    assert values == sorted(values, reverse=True)
    assert all(v > 0.25 for v in values)


# ------------------------------------------------------------- positivity


def test_energy_positivity_examples():
    energy, positive = puo.energy_positivity(P21, 0.5)
    assert energy == pytest.approx(1.0, rel=1e-15) and positive
    energy, positive = puo.energy_positivity(P21, 0.0)
    assert energy == 0.5 and positive
    energy, positive = puo.energy_positivity(
        modes.PuoParams(big_freq=1.01, small_freq=1.0), 10.0
    )
    assert energy == pytest.approx(0.105, rel=1e-12) and positive


def test_energy_positivity_rejects_negative_strength():
    with pytest.raises(ValueError):
        puo.energy_positivity(P21, -0.5)


def test_uncertainty_product_strictly_above_quarter():
    for big, small in ((1.001, 1.0), (2.0, 1.0), (50.0, 0.2), (1000.0, 1.0)):
        asym = puo.asymptotic_product(modes.PuoParams(big, small))
        assert asym.exact > 0.25


# ----------------------------------------------- classical correspondence


def test_closed_mean_z_solves_fourth_order_equation():
    label = puo.PuoStateLabel(J=0.5, Gamma0=0.0, j=0.5, gamma0=0.0)

    def mean_z(t):
        return puo.closed_moments(P21, replace(label, t=t)).mean_z

    for t in (0.5, 1.7, 3.3):
        assert classical.equation_residual(P21, mean_z, t) <= 1e-5

"""Self-verification suites: every structural identity the library relies
on, runnable as one deterministic batch.

Each check reports its worst observed residual against the bound it must
satisfy.  Checks comparing closed formulas against the brute-force
number-basis route use a tolerance-normalized margin (relative 1e-8 with a
1e-10 absolute floor near zeros); those carry tolerance 1.0 and the suffix
"margin".  Randomized point checks use a fixed seed so repeated runs are
byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable

import numpy as np

from . import classical, fock, gcs, modes, puo

REL_TOL = 1e-8
ABS_TOL = 1e-10
SEED = 20130521


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    worst: float
    tolerance: float
    passed: bool


def _margin(closed: float, numeric: float) -> float:
    """Deviation over its allowance; <= 1 means within tolerance."""
    allowed = max(REL_TOL * max(abs(closed), abs(numeric)), ABS_TOL)
    return abs(closed - numeric) / allowed


def _check(suite: str, name: str, worst: float, tolerance: float) -> CheckResult:
    return CheckResult(
        suite=suite, name=name, worst=worst, tolerance=tolerance,
        passed=worst <= tolerance,
    )


@dataclass(frozen=True)
class Grid:
    ratios: tuple[float, ...]
    map_ratios: tuple[float, ...]
    strengths: tuple[float, ...]
    phases: tuple[float, ...]
    times: tuple[float, ...]
    sweep_times: tuple[float, ...]
    n_random_points: int


FULL_GRID = Grid(
    ratios=(1.1, 2.0, 5.0, 20.0),
    map_ratios=(1.01, 1.1, 2.0, 5.0, 20.0, 100.0, 1000.0),
    strengths=(0.0, 0.5, 2.0),
    phases=(0.0, math.pi / 4.0, math.pi / 2.0, math.pi),
    times=(0.0, 1.0, 3.0),
    sweep_times=tuple(np.linspace(0.0, 10.0, 21)),
    n_random_points=25,
)

SMALL_GRID = Grid(
    ratios=(2.0, 5.0),
    map_ratios=(1.01, 2.0, 1000.0),
    strengths=(0.0, 0.5),
    phases=(0.0, math.pi / 2.0),
    times=(0.0, 1.0),
    sweep_times=tuple(np.linspace(0.0, 10.0, 6)),
    n_random_points=8,
)


def _params_for(ratio: float) -> modes.PuoParams:
    return modes.PuoParams(big_freq=ratio, small_freq=1.0)


def _labels(grid: Grid) -> Iterable[puo.PuoStateLabel]:
    for big_strength in grid.strengths:
        for small_strength in grid.strengths:
            for big_phase in grid.phases:
                for small_phase in grid.phases:
                    for t in grid.times:
                        yield puo.PuoStateLabel(
                            J=big_strength,
                            Gamma0=big_phase,
                            j=small_strength,
                            gamma0=small_phase,
                            t=t,
                        )


def suite_fock(grid: Grid) -> list[CheckResult]:
    levels = (0, 1, 2, 5, 40)
    worst_adjoint = 0.0
    worst_comm_off = 0.0
    worst_comm_diag = 0.0
    for n_max in levels:
        a, ad = fock.ladder_matrices(n_max)
        worst_adjoint = max(worst_adjoint, float(np.max(np.abs(ad - a.conj().T))))
        comm = a @ ad - ad @ a
        expected = np.eye(n_max + 1, dtype=complex)
        expected[n_max, n_max] = -float(n_max)
        off = comm - np.diag(np.diag(comm))
        worst_comm_off = max(worst_comm_off, float(np.max(np.abs(off))))
        diag_dev = np.max(np.abs(np.diag(comm) - np.diag(expected)))
        # sqrt(n)^2 re-rounds, so the diagonal is exact only to a few ulps of n
        worst_comm_diag = max(
            worst_comm_diag, float(diag_dev) / (32.0 * np.finfo(float).eps * (n_max + 1))
        )

    worst_imag = 0.0
    rng = np.random.default_rng(SEED)
    for n_max in (5, 20):
        pos, mom = fock.position_momentum(1.0, 2.0, n_max)
        for _ in range(grid.n_random_points):
            raw = rng.normal(size=n_max + 1) + 1j * rng.normal(size=n_max + 1)
            state, _ = fock.normalize(raw)
            for op in (pos, mom, pos @ pos, mom @ mom):
                worst_imag = max(worst_imag, abs(fock.expectation(state, op).imag))

    worst_ortho = 0.0
    n_max = 6
    for m in range(n_max + 1):
        for n in range(n_max + 1):
            overlap = np.vdot(fock.basis_state(n_max, m), fock.basis_state(n_max, n))
            worst_ortho = max(worst_ortho, abs(overlap - (1.0 if m == n else 0.0)))

    return [
        _check("fock", "ladder_adjoint_exact", worst_adjoint, 0.0),
        _check("fock", "commutator_offdiagonal_exact", worst_comm_off, 0.0),
        _check("fock", "commutator_diagonal_ulp", worst_comm_diag, 1.0),
        _check("fock", "hermitian_expectation_real", worst_imag, 1e-10),
        _check("fock", "basis_orthonormal_exact", worst_ortho, 0.0),
    ]


def suite_gcs(grid: Grid) -> list[CheckResult]:
    checks: list[CheckResult] = []
    specs = [
        gcs.OscillatorSpec(mass=m, freq=f, sign=sign)
        for sign in (+1, -1)
        for m in (1.0, 2.5)
        for f in (1.0, 2.0)
    ]
    strengths = tuple(grid.strengths) + (4.0,)

    worst_margin = 0.0
    worst_alpha = 0.0
    for spec in specs:
        for strength in strengths:
            for phase in grid.phases:
                label = gcs.GcsLabel(strength=strength, phase=phase)
                closed = gcs.second_moments_and_dispersions(spec, label)
                numeric = puo.mode_moments_numeric(spec, label)
                for field in (
                    "mean_pos", "mean_mom", "mean_pos_sq", "mean_mom_sq",
                    "var_pos", "var_mom", "uncertainty_product", "energy",
                ):
                    worst_margin = max(
                        worst_margin,
                        _margin(getattr(closed, field), getattr(numeric, field)),
                    )
                n_max = gcs.truncation_for(strength, 1e-12) + 2
                state = gcs.build_state(spec, label, n_max)
                a, _ = fock.ladder_matrices(n_max)
                alpha = gcs.coherent_parameter(spec, label)
                worst_alpha = max(
                    worst_alpha, abs(fock.expectation(state, a) - alpha)
                )
    checks.append(_check("gcs", "closed_vs_fock_margin", worst_margin, 1.0))
    checks.append(_check("gcs", "annihilation_eigenvalue", worst_alpha, 1e-10))

    worst_const_closed = 0.0
    worst_const_numeric = 0.0
    for spec in specs[:4]:
        base = gcs.second_moments_and_dispersions(
            spec, gcs.GcsLabel(strength=0.0, phase=0.0)
        )
        for strength in strengths:
            for phase in grid.phases:
                label = gcs.GcsLabel(strength=strength, phase=phase)
                closed = gcs.second_moments_and_dispersions(spec, label)
                worst_const_closed = max(
                    worst_const_closed,
                    abs(closed.var_pos - base.var_pos),
                    abs(closed.var_mom - base.var_mom),
                    abs(closed.uncertainty_product - base.uncertainty_product),
                )
                numeric = puo.mode_moments_numeric(spec, label)
                worst_const_numeric = max(
                    worst_const_numeric,
                    abs(numeric.var_pos - base.var_pos) / base.var_pos,
                    abs(numeric.var_mom - base.var_mom) / base.var_mom,
                    abs(numeric.uncertainty_product - 0.25) / 0.25,
                )
    checks.append(
        _check("gcs", "dispersion_constant_closed_exact", worst_const_closed, 0.0)
    )
    checks.append(
        _check("gcs", "dispersion_constant_numeric", worst_const_numeric, 1e-8)
    )

    worst_overlap = 0.0
    for sign in (+1, -1):
        spec = gcs.OscillatorSpec(mass=1.0, freq=1.7, sign=sign)
        for strength in (0.5, 2.0):
            for t in (0.4, 2.0):
                n_max = gcs.truncation_for(strength, 1e-12) + 2
                start = gcs.build_state(spec, gcs.GcsLabel(strength, 0.3), n_max)
                energies = sign * spec.freq * (np.arange(n_max + 1) + 0.5)
                evolved = start * np.exp(-1j * energies * t)
                shifted = gcs.build_state(
                    spec, gcs.GcsLabel(strength, 0.3 + spec.freq * t), n_max
                )
                overlap = abs(np.vdot(shifted, evolved))
                worst_overlap = max(worst_overlap, abs(overlap - 1.0))
    checks.append(
        _check("gcs", "phase_shift_is_time_evolution", worst_overlap, 1e-10)
    )

    worst_turn = 0.0
    for strength in strengths:
        for phase in grid.phases:
            ghost = gcs.first_moments(
                gcs.OscillatorSpec(1.0, 1.3, -1), gcs.GcsLabel(strength, phase)
            )
            normal = gcs.first_moments(
                gcs.OscillatorSpec(1.0, 1.3, +1),
                gcs.GcsLabel(strength, math.pi / 2.0 - phase),
            )
            worst_turn = max(
                worst_turn, abs(ghost[0] - normal[0]), abs(ghost[1] - normal[1])
            )
    checks.append(_check("gcs", "ghost_normal_quarter_turn", worst_turn, 1e-12))

    worst_ehrenfest = 0.0
    for sign in (+1, -1):
        for freq in (1.0, 2.0):
            spec = gcs.OscillatorSpec(mass=1.0, freq=freq, sign=sign)

            def mean_pos(t: float, spec=spec, freq=freq) -> float:
                return gcs.first_moments(
                    spec, gcs.GcsLabel(1.5, 0.7 + freq * t)
                )[0]

            h = classical.D2_STEP_SCALE / freq
            for t in (0.0, 0.9, 2.3):
                accel = classical.second_derivative(mean_pos, t, h)
                target = -(freq**2) * mean_pos(t)
                scale = max(abs(target), freq**2 * 1e-3)
                worst_ehrenfest = max(worst_ehrenfest, abs(accel - target) / scale)
    checks.append(_check("gcs", "ehrenfest_second_derivative", worst_ehrenfest, 1e-6))
    return checks


def suite_modes(
    grid: Grid,
    inverse_matrix_fn: Callable[[modes.PuoParams], np.ndarray] | None = None,
) -> list[CheckResult]:
    if inverse_matrix_fn is None:
        inverse_matrix_fn = modes.inverse_matrix
    rng = np.random.default_rng(SEED)
    worst_round = 0.0
    worst_symp = 0.0
    worst_energy = 0.0
    worst_linear = 0.0
    worst_detect = 0.0
    for ratio in grid.map_ratios:
        params = _params_for(ratio)
        fwd = modes.forward_matrix(params)
        inv = inverse_matrix_fn(params)
        worst_round = max(
            worst_round,
            float(np.max(np.abs(inv @ fwd - np.eye(4)))),
            float(np.max(np.abs(fwd @ inv - np.eye(4)))),
        )
        worst_symp = max(
            worst_symp,
            modes.symplectic_residual(params),
            modes.symplectic_residual_of(inv),
        )
        worst_detect = max(
            worst_detect,
            1.0
            if modes.symplectic_residual_of(modes.misprinted_inverse_matrix(params))
            < 0.1
            else 0.0,
        )
        for _ in range(grid.n_random_points):
            pt = modes.PuoPhasePoint(*rng.uniform(-2.0, 2.0, 4))
            h_puo = modes.hamiltonian_puo(params, pt)
            h_modes = modes.hamiltonian_modes(params, modes.forward(params, pt))
            # scale by the cancelling term magnitude, not the small result
            term_scale = params.big_freq**2 * float(np.max(np.abs(pt.as_array()))) ** 2
            worst_energy = max(
                worst_energy,
                abs(h_puo - h_modes)
                / max(abs(h_puo), abs(h_modes), term_scale, 1.0),
            )
            u = rng.uniform(-2.0, 2.0, 4)
            v = rng.uniform(-2.0, 2.0, 4)
            a_coef, b_coef = rng.uniform(-3.0, 3.0, 2)
            lin_dev = fwd @ (a_coef * u + b_coef * v) - (
                a_coef * (fwd @ u) + b_coef * (fwd @ v)
            )
            scale = max(1.0, float(np.max(np.abs(fwd @ u))), float(np.max(np.abs(fwd @ v))))
            worst_linear = max(worst_linear, float(np.max(np.abs(lin_dev))) / scale)
    return [
        _check("modes", "round_trip_identity", worst_round, 1e-12),
        _check("modes", "symplectic_residual", worst_symp, 1e-12),
        _check("modes", "hamiltonian_equivalence", worst_energy, 1e-12),
        _check("modes", "linearity", worst_linear, 1e-13),
        _check("modes", "misprint_detected", worst_detect, 0.0),
    ]


def suite_puo(grid: Grid) -> list[CheckResult]:
    worst_margin = 0.0
    worst_constraint = 0.0
    worst_positivity = 0.0
    worst_product_floor = 0.0
    for ratio in grid.ratios:
        params = _params_for(ratio)
        for label in _labels(grid):
            closed = puo.closed_moments(params, label)
            numeric = puo.numeric_moments(params, label)
            for field in puo.MomentReport.FIELDS:
                if field == "constraint_residual":
                    continue
                worst_margin = max(
                    worst_margin,
                    _margin(getattr(closed, field), getattr(numeric, field)),
                )
            worst_constraint = max(worst_constraint, numeric.constraint_residual)
        for strength in grid.strengths:
            energy, positive = puo.energy_positivity(params, strength)
            worst_positivity = max(worst_positivity, 0.0 if positive else 1.0)
        floor_gap = puo.asymptotic_product(params).exact - 0.25
        worst_product_floor = max(worst_product_floor, 0.0 if floor_gap > 0.0 else 1.0)

    worst_sweep = 0.0
    sweep_label = puo.PuoStateLabel(J=1.0, Gamma0=0.3, j=1.0, gamma0=1.1)
    for ratio in grid.ratios[:2]:
        params = _params_for(ratio)
        reports = [
            puo.numeric_moments(params, replace(sweep_label, t=t))
            for t in grid.sweep_times
        ]
        for field in ("var_z", "var_pz", "uncertainty_product"):
            values = [getattr(r, field) for r in reports]
            spread = (max(values) - min(values)) / max(abs(v) for v in values)
            worst_sweep = max(worst_sweep, spread)

    worst_residual = 0.0
    eq_label = puo.PuoStateLabel(J=0.5, Gamma0=0.0, j=0.5, gamma0=0.0)
    for ratio in grid.ratios[:2]:
        params = _params_for(ratio)

        def mean_z(t: float, params=params) -> float:
            return puo.closed_moments(params, replace(eq_label, t=t)).mean_z

        for t in (0.5, 1.7, 3.3):
            worst_residual = max(
                worst_residual, classical.equation_residual(params, mean_z, t)
            )

    return [
        _check("puo", "closed_vs_numeric_margin", worst_margin, 1.0),
        _check("puo", "constraint_residual", worst_constraint, 1e-9),
        _check("puo", "dispersions_time_invariant", worst_sweep, 1e-8),
        _check("puo", "energy_positive_equal_intensities", worst_positivity, 0.0),
        _check("puo", "product_exceeds_quarter", worst_product_floor, 0.0),
        _check("puo", "mean_z_solves_equation", worst_residual, 1e-5),
    ]


def suite_classical(grid: Grid) -> list[CheckResult]:
    params = modes.PuoParams(big_freq=2.0, small_freq=1.0)

    worst_analytic = 0.0
    def two_tone(t: float) -> float:
        return classical.analytic_solution(params, 1.0, 0.2, 0.8, 1.1, t)
    for t in (0.4, 1.9, 4.2, 8.8):
        worst_analytic = max(
            worst_analytic, classical.equation_residual(params, two_tone, t)
        )

    init = classical.ClassicalInit(
        z0=two_tone(0.0),
        zdot0=1.0 * 2.0 * math.cos(0.2) + 0.8 * 1.0 * math.cos(1.1),
        zddot0=-1.0 * 4.0 * math.sin(0.2) - 0.8 * 1.0 * math.sin(1.1),
        zdddot0=-1.0 * 8.0 * math.cos(0.2) - 0.8 * 1.0 * math.cos(1.1),
    )
    traj = classical.integrate(params, init, 10.0, 1e-3)
    exact = classical.analytic_solution(params, 1.0, 0.2, 0.8, 1.1, traj.times)
    worst_rk4 = float(np.max(np.abs(traj.z - exact)))

    errors = []
    for dt in (0.04, 0.02):
        tr = classical.integrate(params, init, 10.0, dt)
        ex = classical.analytic_solution(params, 1.0, 0.2, 0.8, 1.1, tr.times)
        errors.append(float(np.max(np.abs(tr.z - ex))))
    order = math.log2(errors[0] / errors[1])
    order_shortfall = max(0.0, 3.8 - order)

    worst_match = 0.0
    for label in (
        puo.PuoStateLabel(J=0.5, Gamma0=0.0, j=0.5, gamma0=0.0),
        puo.PuoStateLabel(J=0.5, Gamma0=math.pi / 3.0, j=0.5, gamma0=0.0),
        puo.PuoStateLabel(J=0.0, Gamma0=0.0, j=0.0, gamma0=0.0),
    ):
        worst_match = max(
            worst_match, classical.match_expectation(params, label, 10.0, 1e-3)
        )

    return [
        _check("classical", "analytic_solution_residual", worst_analytic, 1e-5),
        _check("classical", "rk4_matches_analytic", worst_rk4, 1e-8),
        _check("classical", "rk4_order_at_least_3.8", order_shortfall, 0.0),
        _check("classical", "mean_z_correspondence", worst_match, 1e-6),
    ]


def run_all(
    grid_name: str = "full",
    inverse_matrix_fn: Callable[[modes.PuoParams], np.ndarray] | None = None,
) -> list[CheckResult]:
    """All suites on the named grid; optionally swap the inverse-map builder
    (used by tests to prove the harness flags a defective map)."""
    grid = {"full": FULL_GRID, "small": SMALL_GRID}.get(grid_name)
    if grid is None:
        raise ValueError(f"unknown grid {grid_name!r}: expected 'full' or 'small'")
    results: list[CheckResult] = []
    results.extend(suite_fock(grid))
    results.extend(suite_gcs(grid))
    results.extend(suite_modes(grid, inverse_matrix_fn))
    results.extend(suite_puo(grid))
    results.extend(suite_classical(grid))
    return results

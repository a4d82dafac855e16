"""Truncated number-basis linear algebra: ladder/quadrature matrices,
expectation values, normalization."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pucoherent import fock, gcs


def test_ladder_rows_n2():
    a, ad = fock.ladder_matrices(2)
    expected = np.array(
        [[0.0, 1.0, 0.0], [0.0, 0.0, math.sqrt(2.0)], [0.0, 0.0, 0.0]],
        dtype=complex,
    )
    assert np.array_equal(a, expected)
    assert np.array_equal(ad, expected.conj().T)


def test_ladder_n0_is_zero():
    a, ad = fock.ladder_matrices(0)
    assert a.shape == (1, 1) and ad.shape == (1, 1)
    assert a[0, 0] == 0.0 and ad[0, 0] == 0.0


def test_ladder_rejects_negative_level():
    with pytest.raises(ValueError):
        fock.ladder_matrices(-1)


@given(n_max=st.integers(min_value=0, max_value=60))
def test_creation_is_exact_adjoint(n_max):
    a, ad = fock.ladder_matrices(n_max)
    assert np.array_equal(ad, a.conj().T)


@pytest.mark.parametrize("n_max", [1, 2, 5, 30, 80])
def test_commutator_identity_except_corner(n_max):
    a, ad = fock.ladder_matrices(n_max)
    comm = a @ ad - ad @ a
    # off the diagonal every entry is a product of zeros: exactly zero
    off = comm - np.diag(np.diag(comm))
    assert np.max(np.abs(off)) == 0.0
    # sqrt(n)^2 re-rounds, so the diagonal is only a-few-ulps exact
    expected = np.ones(n_max + 1)
    expected[n_max] = -float(n_max)
    dev = np.max(np.abs(np.diag(comm).real - expected))
    assert dev <= 32.0 * np.finfo(float).eps * (n_max + 1), f"N={n_max}: dev={dev}"


def test_commutator_corner_value_n5():
    a, ad = fock.ladder_matrices(5)
    comm = a @ ad - ad @ a
    assert comm[5, 5].real == pytest.approx(-5.0, abs=1e-13)


def test_position_entries_unit_params():
    pos, _ = fock.position_momentum(1.0, 1.0, 1)
    assert pos[0, 1] == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)
    assert pos[1, 0] == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)
    assert pos[0, 0] == 0.0 and pos[1, 1] == 0.0


@given(
    mass=st.floats(min_value=0.1, max_value=10.0),
    freq=st.floats(min_value=0.1, max_value=10.0),
    n_max=st.integers(min_value=0, max_value=25),
)
def test_quadratures_hermitian(mass, freq, n_max):
    pos, mom = fock.position_momentum(mass, freq, n_max)
    assert np.array_equal(pos, pos.conj().T)
    assert np.max(np.abs(mom - mom.conj().T)) == 0.0


def test_position_momentum_rejects_bad_params():
    with pytest.raises(ValueError):
        fock.position_momentum(0.0, 1.0, 3)
    with pytest.raises(ValueError):
        fock.position_momentum(1.0, -2.0, 3)


def test_canonical_commutator_leading_block():
    pos, mom = fock.position_momentum(1.0, 2.0, 10)
    comm = pos @ mom - mom @ pos
    block = comm[:10, :10]
    assert np.max(np.abs(block - 1j * np.eye(10))) < 1e-14


def test_expectation_number_eigenstates():
    a, ad = fock.ladder_matrices(6)
    number = ad @ a
    assert fock.expectation(fock.basis_state(6, 0), number) == 0.0
    assert fock.expectation(fock.basis_state(6, 1), number).real == pytest.approx(1.0)


def test_expectation_coherent_eigenvalue():
    # alpha = 0.5 means intensity 0.25 at phase 0
    spec = gcs.OscillatorSpec(mass=1.0, freq=1.0, sign=+1)
    n_max = gcs.truncation_for(0.25, 1e-12) + 2
    state = gcs.build_state(spec, gcs.GcsLabel(0.25, 0.0), n_max)
    a, _ = fock.ladder_matrices(n_max)
    value = fock.expectation(state, a)
    assert abs(value - 0.5) < 1e-10
    # independent route: <a> = sum_n conj(c_n) c_{n+1} sqrt(n+1)
    direct = sum(
        state[n].conjugate() * state[n + 1] * math.sqrt(n + 1.0)
        for n in range(n_max)
    )
    assert abs(value - direct) < 1e-14


def test_expectation_rejects_mismatch_and_bad_norm():
    a, _ = fock.ladder_matrices(4)
    with pytest.raises(ValueError, match="mismatch"):
        fock.expectation(fock.basis_state(3, 0), a)
    with pytest.raises(ValueError, match="norm"):
        fock.expectation(2.0 * fock.basis_state(4, 0), a)


def test_expectation_rejects_nonfinite():
    a, _ = fock.ladder_matrices(2)
    bad = fock.basis_state(2, 0)
    bad[1] = np.nan
    with pytest.raises(ValueError, match="finite"):
        fock.expectation(bad, a)


@given(
    st.lists(
        st.tuples(
            st.floats(min_value=-5.0, max_value=5.0),
            st.floats(min_value=-5.0, max_value=5.0),
        ),
        min_size=1,
        max_size=12,
    )
)
def test_hermitian_expectation_is_real(parts):
    raw = np.array([complex(re, im) for re, im in parts])
    if np.linalg.norm(raw) < 1e-6:
        raw[0] += 1.0
    state, _ = fock.normalize(raw)
    pos, mom = fock.position_momentum(1.0, 1.5, len(raw) - 1)
    for op in (pos, mom, pos @ pos, mom @ mom):
        assert abs(fock.expectation(state, op).imag) <= 1e-10


def test_basis_orthonormality_exact():
    n_max = 7
    for m in range(n_max + 1):
        for n in range(n_max + 1):
            overlap = np.vdot(fock.basis_state(n_max, m), fock.basis_state(n_max, n))
            assert overlap == (1.0 if m == n else 0.0)


def test_normalize_three_four_five():
    state, norm = fock.normalize(np.array([3.0, 4.0]))
    assert norm == 5.0
    assert np.allclose(state, [0.6, 0.8], atol=1e-16)


def test_normalize_unit_vector_unchanged():
    e2 = fock.basis_state(4, 2)
    state, norm = fock.normalize(e2)
    assert norm == 1.0
    assert np.array_equal(state, e2)


def test_normalize_zero_raises():
    with pytest.raises(ValueError, match="zero"):
        fock.normalize(np.zeros(3, dtype=complex))


def test_normalize_coherent_series_norm_is_sqrt_e():
    # unnormalized intensity-1 series: norm^2 -> sum 1/n! = e
    amps = np.array([1.0 / math.sqrt(math.factorial(n)) for n in range(41)])
    _, norm = fock.normalize(amps)
    assert norm**2 == pytest.approx(math.e, abs=1e-12)

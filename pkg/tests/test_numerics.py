import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deit_lab.errors import NumericalError, ValidationError
from deit_lab.numerics import eig_general, eig_hermitian, integrate_schrodinger, is_hermitian


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


def test_pauli_y():
    vals, vecs = eig_hermitian(np.array([[0, -1j], [1j, 0]]))
    assert np.allclose(vals, [-1, 1])
    assert np.allclose(vecs.conj().T @ vecs, np.eye(2))


def test_phase_convention_first_component_real_positive():
    rng = np.random.default_rng(3)
    _, vecs = eig_hermitian(random_hermitian(rng, 6))
    for k in range(6):
        col = vecs[:, k]
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(first.imag) < 1e-14 and first.real > 0


def test_rejects_non_hermitian_with_asymmetry_in_message():
    with pytest.raises(ValidationError, match="max"):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_rejects_bad_shape():
    with pytest.raises(ValidationError):
        eig_hermitian(np.zeros((2, 3)))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10_000))
def test_hermitian_residual_and_orthonormality(n, seed):
    m = random_hermitian(np.random.default_rng(seed), n)
    vals, vecs = eig_hermitian(m)
    assert np.all(np.diff(vals) >= -1e-12)
    assert np.allclose(vecs.conj().T @ vecs, np.eye(n), atol=1e-12)
    assert np.linalg.norm(m @ vecs - vecs * vals) <= 1e-10 * max(1, np.linalg.norm(m, 2))


def test_general_ordering_and_residual():
    rng = np.random.default_rng(5)
    m = random_hermitian(rng, 5) - 1j * np.diag(rng.uniform(0, 1, 5))
    vals, vecs = eig_general(m)
    assert np.all(np.diff(vals.real) >= -1e-12)
    assert np.all(vals.imag <= 1e-12)
    assert np.allclose(m @ vecs, vecs * vals, atol=1e-10)
    assert np.allclose(np.linalg.norm(vecs, axis=0), 1)


def test_general_ties_broken_by_imaginary_part():
    vals, _ = eig_general(np.diag([1 + 2j, 1 - 1j, 0]))
    assert np.allclose(vals, [0, 1 - 1j, 1 + 2j])


def test_general_rejects_nan():
    with pytest.raises(ValidationError):
        eig_general(np.array([[np.nan, 0], [0, 1]]))


def test_is_hermitian():
    assert is_hermitian(np.eye(3))
    assert not is_hermitian(np.array([[0, 1], [2, 0]]))


def test_two_level_rabi_oscillation():
    om = 1.3
    h = np.array([[0, om], [om, 0]])
    t = np.linspace(0, 5, 51)
    psi = integrate_schrodinger(h, [1, 0], t)
    assert np.allclose(np.abs(psi[:, 1]) ** 2, np.sin(om * t) ** 2, atol=1e-8)


def test_matches_matrix_exponential():
    from scipy.linalg import expm

    rng = np.random.default_rng(11)
    h = random_hermitian(rng, 4)
    psi0 = np.array([1, 0, 0, 0], dtype=complex)
    out = integrate_schrodinger(h, psi0, [0.0, 0.7])
    assert np.allclose(out[-1], expm(-1j * h * 0.7) @ psi0, atol=1e-8)


def test_time_dependent_hamiltonian():
    # h(t) = f(t) sigma_x integrates to a rotation by int f
    f = lambda t: 0.5 + 0.2 * t  # noqa: E731
    t = np.linspace(0, 2, 5)
    out = integrate_schrodinger(lambda s: f(s) * np.array([[0, 1], [1, 0]]), [1, 0], t)
    area = 0.5 * t + 0.1 * t**2
    assert np.allclose(np.abs(out[:, 0]), np.abs(np.cos(area)), atol=1e-8)


def test_grid_must_increase():
    with pytest.raises(ValidationError):
        integrate_schrodinger(np.eye(2), [1, 0], [0, 1, 1])


def test_integration_failure_reports_time():
    def h(t):
        return np.array([[np.inf if t > 0.5 else 1.0, 0], [0, 0]])

    with pytest.raises(NumericalError, match="t = "):
        integrate_schrodinger(h, [1, 0], [0, 2.0])

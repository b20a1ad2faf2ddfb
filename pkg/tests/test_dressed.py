import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deit_lab import dressed as dr
from deit_lab import eit


def test_matrix_entries():
    h = dr.dressed_hamiltonian5(4, 9, 1.5, 2.0 / 3, 12.0)
    assert np.allclose(h, h.T)
    assert h[0, 3] == 12 and h[2, 4] == -12
    assert h[1, 3] == 3 and h[1, 4] == -2


def test_no_photons_spectrum():
    s = dr.dressed_spectrum(0, 0, 0.4, 0.7, 2.0)
    assert np.allclose(s.eigenvalues, [-2, -2, 0, 2, 2])
    assert not s.closed_form


def test_pythagorean_example():
    s = dr.dressed_spectrum(1, 1, 3.0, 4.0, 12.0)
    assert np.allclose(s.eigenvalues, [-13, -12, 0, 12, 13])
    num = np.linalg.eigvalsh(dr.dressed_hamiltonian5(1, 1, 3.0, 4.0, 12.0))
    assert np.allclose(num, s.eigenvalues, atol=1e-12)


def test_single_mode_lambda_dark_state():
    s = dr.dressed_spectrum(1, 0, 0.5, 0.9, 1.0)
    n = 1 / math.sqrt(1 + 0.25)
    assert np.allclose(s.dark, [-0.5 * n, n, 0, 0, 0])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.floats(0.01, 3), st.floats(0.01, 3), st.floats(0.05, 3))
def test_closed_form_eigenpairs(na, nb, ga, gb, od):
    s = dr.dressed_spectrum(na, nb, ga, gb, od)
    h = dr.dressed_hamiltonian5(na, nb, ga, gb, od)
    v = s.eigenvectors
    assert np.allclose(v.T @ v, np.eye(5), atol=1e-12)
    assert np.max(np.abs(h @ v - v * s.eigenvalues)) <= 1e-10 * s.Omega
    assert abs(s.eigenvalues.sum()) < 1e-12 * s.Omega
    assert np.max(np.abs(s.dark[3:])) < 1e-12
    assert s.dark[1] > 0


def test_amplitude_dynamics_no_a_photons():
    tr = dr.amplitude_dynamics(0, 1, 0.1, 0.1, 1.0, 0.5, np.linspace(0, 50, 101))
    assert np.max(np.abs(tr.column("A5"))) == 0


def test_amplitude_dynamics_steady_a5_and_norm():
    a = b = 0.1 / math.sqrt(2)
    t = np.linspace(0, 400, 4001)
    tr = dr.amplitude_dynamics(1, 1, a, b, 1.0, 0.5, t)
    closed = a * b / (math.sqrt(1 + 0.01) * 0.5)
    assert abs(abs(tr.steady.A5) / closed - 1) < 0.05
    assert np.max(np.abs(np.linalg.norm(tr.amplitudes, axis=1) - 1)) < 1e-8
    dev = np.max(np.abs(1 - np.abs(tr.column("A0")) ** 2))
    assert dev <= 4 * (0.1 / math.sqrt(1.01)) ** 2


def test_amplitude_symmetry_with_ramp():
    a = b = 0.1 / math.sqrt(2)
    t = np.linspace(0, 600, 6001)
    tr = dr.amplitude_dynamics(1, 1, a, b, 1.0, 0.5, t, ramp_time=200)
    late = t >= 200
    a1p, a1m = tr.column("A1_plus")[late], tr.column("A1_minus")[late]
    a2p, a2m = tr.column("A2_plus")[late], tr.column("A2_minus")[late]
    assert np.max(np.abs(a1p - a1m)) < 0.05 * np.max(np.abs(a1p))
    assert np.max(np.abs(a2p - a2m)) < 0.05 * np.max(np.abs(a2p))
    st_ = dr.steady_amplitudes(1, 1, a, b, 1.0, 0.5)
    assert abs(tr.steady.A1_plus / st_.A1_plus - 1) < 0.05


def test_amplitude_generator_hermitian():
    m = dr.amplitude_matrix(2, 1, 0.05, 0.08, 1.0, 0.7)
    assert np.allclose(m, m.T)


def _exact_sector(a, b, od, delta):
    h = np.zeros((6, 6))
    h[:5, :5] = dr.dressed_hamiltonian5(1, 1, a, b, od)
    h[5, 5] = 2 * delta
    h[0, 5] = h[5, 0] = b
    h[2, 5] = h[5, 2] = a
    w, v = np.linalg.eigh(h)
    k = np.argmax(np.abs(v[1]))
    x = v[:, k] * np.sign(v[1, k])
    return x[[0, 1, 2, 3, 5, 4]]


@pytest.mark.parametrize("a,b,delta", [(0.05, 0.07, 0.5), (0.02, 0.1, 1.0), (0.1, 0.03, 2.0)])
def test_bare_coefficients_match_exact_eigenvector(a, b, delta):
    bc = dr.bare_coefficients(1, 1, a, b, 1.0, delta)
    exact = _exact_sector(a, b, 1.0, delta)
    # beta4, beta5 are second order small; compare relative to their size
    for k in (1, 2, 3, 4):
        assert abs(bc.beta[k] - exact[k]) <= 0.02 * abs(exact[k]) + 1e-12
    assert abs(bc.beta5 - a * b / (math.sqrt(1 + a * a + b * b) * delta)) < 1e-14


def test_bare_coefficient_magnitudes_and_bound():
    a, b = 0.04, 0.06
    om = math.sqrt(1 + a * a + b * b)
    bc = dr.bare_coefficients(1, 1, a, b, 1.0, 0.8)
    assert abs(abs(bc.beta2) - 1 / om) < 1e-3
    assert abs(abs(bc.beta3) - b / om) < 1e-3
    assert abs(bc.beta2) ** 2 + abs(bc.beta3) ** 2 <= 1


def test_dressed_polarizability():
    p = eit.MediumParams(gamma=1e-3, Delta=0.8, Omega_d=1.0)
    assert dr.bare_coefficients(1, 0, 0.05, 0.05, 1.0, 0.8, p).alpha_a == 0
    ad = dr.bare_coefficients(1, 1, 0.03, 0.05, 1.0, 0.8, p).alpha_a
    asc = eit.polarizability(p, 0.05)
    assert abs(ad / asc - 1) < 0.05

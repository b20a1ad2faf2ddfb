import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deit_lab import fockspace as fs
from deit_lab.errors import TruncationWarning, ValidationError


def test_default_cutoff_rule():
    assert fs.default_cutoff(0) == 10
    assert fs.default_cutoff(2) == math.ceil(4 + 12 + 10)


def test_coherent_poisson_statistics():
    alpha = 1.7 - 0.4j
    psi = fs.coherent_state(alpha, 40)
    n = np.arange(41)
    poisson = np.exp(-abs(alpha) ** 2) * abs(alpha) ** (2 * n) / np.array([math.factorial(k) for k in n], dtype=float)
    assert np.allclose(psi.photon_distribution(0), poisson / poisson.sum(), atol=1e-14)
    assert abs(fs.expectation(psi, "n") - abs(alpha) ** 2) < 1e-10


def test_coherent_truncation_flag_and_warning():
    with pytest.warns(TruncationWarning):
        psi = fs.coherent_state(3.0, 5)
    assert psi.lossy
    assert psi.truncation_weight > 1e-6
    assert abs(psi.norm() - 1) < 1e-14


def test_coherent_quadratures():
    alpha = 0.8 + 0.3j
    psi = fs.coherent_state(alpha, 30)
    assert abs(fs.expectation(psi, "x") - math.sqrt(2) * alpha.real) < 1e-10
    assert abs(fs.expectation(psi, "p") - math.sqrt(2) * alpha.imag) < 1e-10
    var_x = fs.expectation(psi, "x2") - fs.expectation(psi, "x") ** 2
    assert abs(var_x - 0.5) < 1e-10


def test_overlap_of_coherent_states():
    a, b = 0.9, -0.5 + 0.2j
    ov = fs.overlap(fs.coherent_state(a, 40), fs.coherent_state(b, 40))
    expected = np.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + np.conj(a) * b)
    assert abs(ov - expected) < 1e-12


def test_overlap_cutoff_mismatch():
    with pytest.raises(ValidationError):
        fs.overlap(fs.coherent_state(0.1, 10), fs.coherent_state(0.1, 11))


def test_tensor_budget_and_mode_limit():
    s = fs.coherent_state(0.0, 10)
    with pytest.raises(ValidationError):
        fs.tensor([s, s, s, s])
    big = fs.basis_state([0], [100])
    with pytest.raises(ValidationError):
        fs.tensor([big, big, big])


def test_basis_state_bounds():
    with pytest.raises(ValidationError):
        fs.basis_state([3], [2])


def test_partial_trace_product_state():
    a = fs.coherent_state(0.6, 15)
    b = fs.coherent_state(-0.4j, 12)
    joint = fs.tensor([a, b])
    red = fs.partial_trace(joint, [1])
    assert np.allclose(red.matrix, np.outer(b.vector, b.vector.conj()), atol=1e-14)
    red_rho = fs.partial_trace(joint.to_density(), [0])
    assert np.allclose(red_rho.matrix, np.outer(a.vector, a.vector.conj()), atol=1e-14)


def test_partial_trace_preserves_mode_order_three_modes():
    s = [fs.basis_state([k], [3]) for k in (1, 2, 3)]
    joint = fs.tensor(s)
    red = fs.partial_trace(joint, [2, 0])
    assert red.cutoffs == (3, 3)
    k = np.zeros(16)
    k[1 * 4 + 3] = 1
    assert np.allclose(red.matrix, np.outer(k, k))


def test_partial_trace_empty_keep():
    with pytest.raises(ValidationError):
        fs.partial_trace(fs.coherent_state(0.1, 5), [])


def test_entropy_of_bell_like_state():
    amps = np.zeros((2, 2), dtype=complex)
    amps[1, 0] = amps[0, 1] = 1 / math.sqrt(2)
    psi = fs.MultiModeState((1, 1), amps)
    assert abs(fs.von_neumann_entropy(fs.partial_trace(psi, [0])) - math.log(2)) < 1e-12


def test_two_mode_moments_of_product_coherent_state():
    psi = fs.tensor([fs.coherent_state(0.5, 25), fs.coherent_state(0.3j, 25)])
    mom = fs.quadrature_moments(psi)
    assert np.allclose(mom.covariance, 0.5 * np.eye(4), atol=1e-10)
    assert np.allclose(mom.means, [math.sqrt(2) * 0.5, 0, 0, math.sqrt(2) * 0.3], atol=1e-10)


def test_unknown_observable():
    with pytest.raises(ValidationError):
        fs.expectation(fs.coherent_state(0.1, 5), "q")


def test_density_check_passes_for_valid_state():
    fs.coherent_state(0.7, 20).to_density().check()


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_coherent_norm_and_mean(re, im):
    alpha = complex(re, im)
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationWarning)
        psi = fs.coherent_state(alpha)
    assert abs(psi.norm() - 1) < 1e-12
    assert abs(fs.expectation(psi, "n") - abs(alpha) ** 2) < 1e-5

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deit_lab import eit
from deit_lab.errors import NumericalError, ValidationError

TWO_PI = 2 * math.pi


def params(**kw):
    base = dict(gamma=TWO_PI * 5e3, Delta=TWO_PI * 1e6, Omega_d=TWO_PI * 1e6)
    base.update(kw)
    return eit.MediumParams(**base)


def test_medium_validation_and_regime_flag():
    with pytest.raises(ValidationError):
        eit.MediumParams(gamma=-1.0)
    assert params().weak_two_photon_absorption
    assert not params(gamma=TWO_PI * 2e5).weak_two_photon_absorption


def test_hamiltonian_dark_vector_when_probes_off():
    h = eit.hamiltonian6(0, 0, params())
    e2 = np.zeros(6)
    e2[1] = 1
    assert np.allclose(h @ e2, 0)


def test_hamiltonian_hermitian_without_decay():
    h = eit.hamiltonian6(0.1 + 0.2j, 0.3, params(), include_decay=False)
    assert np.allclose(h, h.conj().T)
    hd = eit.hamiltonian6(0.1, 0.3, params(), include_decay=True)
    g = params().gamma
    assert np.allclose(np.diag(hd).imag, [0, 0, 0, -g, -g, -g])


@pytest.mark.parametrize("signs", [(-1, 1, 1), (1, -1, 1), (1, 1, -1), (-1, -1, -1)])
def test_spectrum_sign_invariance(signs):
    p = params()
    oa, ob = 0.1 * p.Omega_d, 0.07 * p.Omega_d
    ref = np.sort_complex(np.linalg.eigvals(eit.hamiltonian6(oa, ob, p)))
    h = eit.hamiltonian6(signs[0] * oa, signs[1] * ob, p)
    if signs[2] < 0:
        # flipping Omega_d on both its transitions
        h = h.copy()
        for i, j in ((3, 0), (5, 2)):
            h[i, j] *= -1
            h[j, i] *= -1
    got = np.sort_complex(np.linalg.eigvals(h))
    assert np.allclose(got, ref, atol=1e-6 * p.Omega_d)


def test_lambda_zero_probe():
    exact, weak = eit.lambda_branch(0.0, 0.05 * TWO_PI * 1e6, params(), include_decay=False)
    assert abs(exact) < 1e-30 and weak == 0


def test_lambda_agrees_with_weak_field_at_two_percent():
    p = params(gamma=1e-9)
    om = 0.02 * p.Omega_d
    exact, weak = eit.lambda_branch(om, om, p, include_decay=False)
    assert abs(exact / weak - 1) < 0.01


def test_lambda_with_decay_defaults_within_five_percent():
    p = eit.MediumParams()
    om = 0.03 * p.Omega_d
    exact, weak = eit.lambda_branch(om, om, p)
    assert abs(exact / weak - 1) < 0.05


def test_lambda_weak_field_window_scan():
    p = params(gamma=1e-9)
    for r in np.linspace(0.005, 0.03, 6):
        e, w = eit.lambda_branch(r * p.Omega_d, r * p.Omega_d, p, include_decay=False)
        assert abs(e / w - 1) <= 0.01


def test_lambda_ambiguity_raises():
    p = params(Delta=1e-3, gamma=1e-9)
    with pytest.raises(NumericalError, match="ambiguous"):
        eit.lambda_branch(3 * p.Omega_d, 3 * p.Omega_d, p, include_decay=False)


def test_polarizability_examples():
    p = params()
    assert eit.polarizability(p, 0.0) == 0
    a = eit.polarizability(p.with_(Delta=10 * p.gamma), 0.01 * p.Omega_d)
    assert a.imag >= 0
    assert abs(abs(a.imag / a.real) - 0.1) < 1e-12


def test_polarizability_lossless_limit():
    # gamma -> 0 at fixed N sigma0 gamma
    p = params()
    nsg = p.N_density * p.sigma0() * p.gamma
    for g in (1e2, 1e-2, 1e-6):
        q = p.with_(gamma=g)
        a = eit.polarizability(q, 0.01 * p.Omega_d)
        assert abs(a.imag / a.real) <= g / p.Delta * 1.0000001
        assert abs(q.N_density * q.sigma0() * q.gamma - nsg) / nsg < 1e-12


def test_polarizability_cross_not_self():
    p = params()
    a1 = eit.polarizability(p, 0.01 * p.Omega_d)
    a2 = eit.polarizability(p, 0.02 * p.Omega_d)
    assert abs(a2 / a1 - 4) < 1e-10


def test_propagation_constant_scalings():
    p = eit.MediumParams()
    c1 = eit.propagation_constants(p)
    c2 = eit.propagation_constants(p.with_(Omega_d=2 * p.Omega_d))
    assert abs(c2.v_group / c1.v_group - 4) < 1e-12
    assert abs(c2.chi / c1.chi - 0.25) < 1e-12
    assert c1.chi < 0
    assert c1.v_group > 0 and c1.alpha_a.imag >= 0


def test_propagation_constants_default_scale():
    c = eit.propagation_constants(eit.MediumParams())
    assert 1e-7 <= c.pi_time <= 1e-5
    assert c.v_group < 1e-5 * eit.C_LIGHT
    assert c.self_phase_ratio < 1


@settings(max_examples=20, deadline=None)
@given(st.floats(0.005, 0.03), st.floats(0.005, 0.03))
def test_lambda_real_negative_for_positive_detuning(ra, rb):
    p = params(gamma=1e-9)
    e, _ = eit.lambda_branch(ra * p.Omega_d, rb * p.Omega_d, p, include_decay=False)
    assert e.real < 0

"""Dressed-state picture of the quantized double-N atom.

The fixed-photon-number sector is spanned by
``[|1,na-1,nb>, |2,na,nb>, |3,na,nb-1>, |4,na-1,nb>, |6,na,nb-1>]``.
In it the atom-field Hamiltonian has the closed-form spectrum
``{0, +-Omega, +-Omega_d}``; the zero mode is the dark state. Level |5> is
added perturbatively at energy ``2*Delta``, coupled to |1> by ``g_b sqrt(nb)``
and to |3> by ``g_a sqrt(na)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eit import MediumParams
from .errors import ValidationError
from .numerics import eig_hermitian, integrate_schrodinger

LABELS = ("1-", "2-", "0", "2+", "1+")
DEGENERATE_TOL = 1e-12


def _rabis(n_a: int, n_b: int, g_a: float, g_b: float) -> tuple[float, float]:
    if n_a < 0 or n_b < 0 or int(n_a) != n_a or int(n_b) != n_b:
        raise ValidationError(f"photon numbers must be non-negative integers, got {(n_a, n_b)}")
    return g_a * math.sqrt(n_a), g_b * math.sqrt(n_b)


def dressed_hamiltonian5(n_a: int, n_b: int, g_a: float, g_b: float, Omega_d: float) -> np.ndarray:
    """Real symmetric 5x5 sector Hamiltonian (units of the couplings)."""
    a, b = _rabis(n_a, n_b, g_a, g_b)
    h = np.zeros((5, 5))
    h[0, 3] = h[3, 0] = Omega_d
    h[1, 3] = h[3, 1] = a
    h[1, 4] = h[4, 1] = -b
    h[2, 4] = h[4, 2] = -Omega_d
    return h


@dataclass(frozen=True)
class DressedSpectrum:
    n_a: int
    n_b: int
    g_a: float
    g_b: float
    Omega_d: float
    Omega: float
    delta_small: float
    eigenvalues: np.ndarray  # ascending: -Omega, -Omega_d, 0, +Omega_d, +Omega
    eigenvectors: np.ndarray  # columns, same order
    closed_form: bool

    def vector(self, label: str) -> np.ndarray:
        return self.eigenvectors[:, LABELS.index(label)]

    @property
    def dark(self) -> np.ndarray:
        return self.vector("0")


def _closed_form(a: float, b: float, od: float) -> tuple[np.ndarray, np.ndarray]:
    delta = math.hypot(a, b)
    om = math.sqrt(od**2 + delta**2)
    dark = np.array([-a, od, -b, 0.0, 0.0]) / om
    u1 = np.array([od * a, delta**2, od * b]) / (delta * om)
    v1 = np.array([a, -b]) / delta
    u2 = np.array([b, 0.0, -a]) / delta
    v2 = np.array([b, a]) / delta
    s = 1 / math.sqrt(2)
    vecs = np.column_stack([
        s * np.concatenate([u1, -v1]),
        s * np.concatenate([u2, -v2]),
        dark,
        s * np.concatenate([u2, v2]),
        s * np.concatenate([u1, v1]),
    ])
    vals = np.array([-om, -od, 0.0, od, om])
    # |2> component real positive, else first non-zero component
    for k in range(5):
        col = vecs[:, k]
        ref = col[1] if abs(col[1]) > DEGENERATE_TOL else col[np.flatnonzero(np.abs(col) > DEGENERATE_TOL)[0]]
        vecs[:, k] = col * np.sign(ref)
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[:, order]


def dressed_spectrum(n_a: int, n_b: int, g_a: float, g_b: float, Omega_d: float) -> DressedSpectrum:
    """Closed-form eigensystem of :func:`dressed_hamiltonian5`.

    When no photons couple (``delta_small = 0``) the +-Omega and +-Omega_d
    pairs are degenerate and the numeric eigensolver picks the basis.
    """
    a, b = _rabis(n_a, n_b, g_a, g_b)
    if Omega_d <= 0:
        raise ValidationError("Omega_d must be positive")
    delta = math.hypot(a, b)
    om = math.sqrt(Omega_d**2 + delta**2)
    if delta > DEGENERATE_TOL * Omega_d:
        vals, vecs = _closed_form(a, b, Omega_d)
        closed = True
    else:
        vals, vecs = eig_hermitian(dressed_hamiltonian5(n_a, n_b, g_a, g_b, Omega_d))
        vals, vecs = vals.real, vecs.real
        closed = False
    return DressedSpectrum(int(n_a), int(n_b), g_a, g_b, Omega_d, om, delta, vals, vecs, closed)


@dataclass(frozen=True)
class PerturbativeAmplitudes:
    A0: complex
    A1_plus: complex
    A1_minus: complex
    A2_plus: complex
    A2_minus: complex
    A5: complex
    Delta: float


@dataclass(frozen=True)
class AmplitudeTrajectory:
    t: np.ndarray
    amplitudes: np.ndarray  # columns A0, A1-, A1+, A2-, A2+, A5
    steady: PerturbativeAmplitudes

    def column(self, name: str) -> np.ndarray:
        return self.amplitudes[:, _ODE_ORDER.index(name)]


_ODE_ORDER = ("A0", "A1_minus", "A1_plus", "A2_minus", "A2_plus", "A5")


def amplitude_matrix(n_a: int, n_b: int, g_a: float, g_b: float, Omega_d: float, Delta: float) -> np.ndarray:
    """Generator of the six-amplitude equations, order A0, A1-, A1+, A2-, A2+, A5.

    The A5 row is the Hermitian conjugate of the A5 column, so the A2 terms
    enter it as ``(A2- - A2+)``.
    """
    a, b = _rabis(n_a, n_b, g_a, g_b)
    delta = math.hypot(a, b)
    om = math.sqrt(Omega_d**2 + delta**2)
    m = np.zeros((6, 6))
    m[1, 1], m[2, 2], m[3, 3], m[4, 4], m[5, 5] = -om, om, -Omega_d, Omega_d, Delta
    col = np.zeros(6)
    col[0] = -a * b / om
    if delta > 0:
        c1 = a * b * Omega_d / (math.sqrt(2) * om * delta)
        c2 = b**2 / (math.sqrt(2) * delta)
        col[1:5] = [-c1, c1, c2, -c2]
    m[:5, 5] = col[:5]
    m[5, :5] = col[:5]
    return m


def amplitude_dynamics(n_a: int, n_b: int, g_a: float, g_b: float, Omega_d: float, Delta: float,
                       t_grid, ramp_time: float = 0.0, tol: float = 1e-10) -> AmplitudeTrajectory:
    """Integrate the six dressed amplitudes from ``A0 = 1``.

    With ``ramp_time > 0`` the couplings to |5> are switched on as
    ``sin^2(pi t / (2 ramp_time))``, which suppresses the transient
    oscillations a sudden start leaves behind. The quasi-steady values are
    the amplitudes divided by the phase of ``A0``, averaged over the part of
    the grid after the ramp (the last half if there is no ramp).
    """
    if Delta <= 0:
        raise ValidationError("Delta must be positive")
    t_grid = np.asarray(t_grid, dtype=float)
    m = amplitude_matrix(n_a, n_b, g_a, g_b, Omega_d, Delta)
    diag = np.diag(np.diag(m))
    off = m - diag
    if ramp_time > 0:
        def h(t):
            s = math.sin(0.5 * math.pi * min(t / ramp_time, 1.0)) ** 2
            return diag + s * off
    else:
        h = m
    psi0 = np.zeros(6, dtype=complex)
    psi0[0] = 1.0
    traj = integrate_schrodinger(h, psi0, t_grid, tol=tol)
    start = ramp_time if ramp_time > 0 else t_grid[0] + 0.5 * (t_grid[-1] - t_grid[0])
    sel = t_grid >= start
    if not np.any(sel):
        sel = np.zeros_like(t_grid, dtype=bool)
        sel[-1] = True
    ph = traj[sel, 0] / np.abs(traj[sel, 0])
    mean = (traj[sel] / ph[:, None]).mean(axis=0)
    steady = PerturbativeAmplitudes(
        A0=mean[0], A1_minus=mean[1], A1_plus=mean[2], A2_minus=mean[3], A2_plus=mean[4], A5=mean[5],
        Delta=Delta,
    )
    return AmplitudeTrajectory(t_grid, traj, steady)


def steady_amplitudes(n_a: int, n_b: int, g_a: float, g_b: float, Omega_d: float, Delta: float) -> PerturbativeAmplitudes:
    """Lowest-order closed-form amplitudes with ``A0 = 1``."""
    a, b = _rabis(n_a, n_b, g_a, g_b)
    delta = math.hypot(a, b)
    om = math.sqrt(Omega_d**2 + delta**2)
    a5 = a * b / (om * Delta)
    if delta == 0:
        return PerturbativeAmplitudes(1.0, 0.0, 0.0, 0.0, 0.0, a5, Delta)
    m = amplitude_matrix(n_a, n_b, g_a, g_b, Omega_d, Delta)
    amps = [-m[k, 5] * a5 / m[k, k] for k in range(1, 5)]
    return PerturbativeAmplitudes(1.0, amps[1], amps[0], amps[3], amps[2], a5, Delta)


@dataclass(frozen=True)
class BareCoefficients:
    beta: np.ndarray  # beta_1..beta_6 (index 0 -> |1>)
    alpha_a: complex | None

    @property
    def beta2(self) -> complex:
        return self.beta[1]

    @property
    def beta3(self) -> complex:
        return self.beta[2]

    @property
    def beta4(self) -> complex:
        return self.beta[3]

    @property
    def beta5(self) -> complex:
        return self.beta[4]


def level5_couplings(spec: DressedSpectrum) -> np.ndarray:
    """``<k|V|5>`` for each dressed state k, both |5> paths included."""
    a, b = _rabis(spec.n_a, spec.n_b, spec.g_a, spec.g_b)
    v5 = np.array([b, 0.0, a, 0.0, 0.0])
    return spec.eigenvectors.T @ v5


def bare_coefficients(n_a: int, n_b: int, g_a: float, g_b: float, Omega_d: float, Delta: float,
                      medium: MediumParams | None = None) -> BareCoefficients:
    """Bare-level amplitudes of the perturbed dark state and the implied polarizability.

    Level |5> sits at ``2*Delta``; first-order perturbation theory gives
    ``A5 = g_a sqrt(na) g_b sqrt(nb) / (Omega Delta)`` and the bright
    admixtures ``A_k = <k|V|5> A5 / (-E_k)``. These are rotated back to the
    bare basis. With ``medium`` given, the polarizability is
    ``-N sigma0 gamma (beta2* beta4 + beta3* beta5) / (g_a sqrt(na))``, using
    the medium's density, cross section and linewidth.
    """
    spec = dressed_spectrum(n_a, n_b, g_a, g_b, Omega_d)
    a, b = _rabis(n_a, n_b, g_a, g_b)
    v = level5_couplings(spec)
    a5 = -v[2] / (2 * Delta)
    amps = np.zeros(5, dtype=complex)
    amps[2] = 1.0
    for k in (0, 1, 3, 4):
        amps[k] = -v[k] * a5 / spec.eigenvalues[k]
    sector = spec.eigenvectors @ amps
    beta = np.zeros(6, dtype=complex)
    beta[0:3] = sector[0:3]
    beta[3] = sector[3]
    beta[5] = sector[4]
    beta[4] = a5
    alpha = None
    if medium is not None:
        if a == 0:
            alpha = 0.0 + 0.0j
        else:
            nsg = medium.N_density * medium.sigma0("a") * medium.gamma
            alpha = -nsg * (np.conj(beta[1]) * beta[3] + np.conj(beta[2]) * beta[4]) / a
    return BareCoefficients(beta, alpha)

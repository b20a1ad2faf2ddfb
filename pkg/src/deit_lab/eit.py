"""Semiclassical six-level double-EIT model.

Levels are numbered 1..6 as in the usual double-N scheme: |1>, |2>, |3> are
ground sublevels, |4>, |6> are excited levels reached by the probes from |2>
and |5> is the upper level reached by the spurious two-photon path. Matrices
use the zero-based order [|1>, ..., |6>] and are in units of rad/s (energies
divided by hbar).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants as sc

from .errors import NumericalError, ValidationError
from .numerics import eig_general

HBAR = sc.hbar
EPS0 = sc.epsilon_0
C_LIGHT = sc.c

RAMP_STEPS = 16
AMBIGUITY = 0.05


def _angular(wavelength: float) -> float:
    return 2 * math.pi * C_LIGHT / wavelength


@dataclass(frozen=True)
class MediumParams:
    """Medium and field parameters, all frequencies in rad/s, SI otherwise.

    Defaults describe a Pr:YSO-like crystal at 600 nm with a 100 um wide,
    1 mm long interaction region.
    """

    gamma: float = 5.0e4
    Delta: float = 1.0e6
    Delta_U: float = 1.1e7
    Delta_L: float = 1.0e7
    Omega_d: float = 1.0e6
    d24: float = 1.0e-32
    d26: float = 1.0e-32
    N_density: float = 1.0e21
    omega_a: float = field(default_factory=lambda: _angular(600e-9))
    omega_b: float = field(default_factory=lambda: _angular(600e-9))
    V: float = math.pi * (50e-6) ** 2 * 1e-3
    L: float = 1.0e-3

    def __post_init__(self):
        for name in ("gamma", "Delta", "Delta_U", "Delta_L", "Omega_d", "d24", "d26",
                     "N_density", "omega_a", "omega_b", "V", "L"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
                raise ValidationError(f"{name} must be a positive finite number, got {val!r}")

    @property
    def weak_two_photon_absorption(self) -> bool:
        return self.Delta >= 10 * self.gamma

    def with_(self, **kw) -> "MediumParams":
        return replace(self, **kw)

    def single_photon_rabi(self, mode: str = "a") -> float:
        """Vacuum Rabi frequency ``d sqrt(omega / (2 hbar eps0 V))``."""
        d, w = self._dipole(mode)
        return d * math.sqrt(w / (2 * HBAR * EPS0 * self.V))

    def sigma0(self, mode: str = "a") -> float:
        """Resonant absorption cross section ``|d|^2 omega / (2 eps0 c hbar gamma)``."""
        d, w = self._dipole(mode)
        return d**2 * w / (2 * EPS0 * C_LIGHT * HBAR * self.gamma)

    def _dipole(self, mode: str) -> tuple[float, float]:
        if mode == "a":
            return self.d24, self.omega_a
        if mode == "b":
            return self.d26, self.omega_b
        raise ValidationError(f"mode must be 'a' or 'b', got {mode!r}")


@dataclass(frozen=True)
class PropagationConstants:
    sigma0: float
    v_group: float
    chi: float
    alpha_a: complex
    alpha_b: complex
    pi_time: float
    self_phase_a: float
    self_phase_ratio: float
    weak_two_photon_absorption: bool


def hamiltonian6(omega_a_rabi: complex, omega_b_rabi: complex, p: MediumParams,
                 include_decay: bool = True) -> np.ndarray:
    """Six-level interaction Hamiltonian over [|1>..|6>], in rad/s.

    The two-photon level |5> sits at ``2*Delta`` in the static frame; this
    is what makes the weak-field branch reproduce
    ``2|Oa|^2|Ob|^2 / ((i gamma - Delta)|Od|^2)``.
    """
    h = np.zeros((6, 6), dtype=complex)

    def couple(upper, lower, val):
        h[upper - 1, lower - 1] += val
        h[lower - 1, upper - 1] += np.conj(val)

    couple(4, 1, p.Omega_d)
    couple(6, 3, p.Omega_d)
    couple(4, 2, omega_a_rabi)
    couple(5, 3, omega_a_rabi)
    couple(6, 2, omega_b_rabi)
    couple(5, 1, omega_b_rabi)
    h[4, 4] += 2 * p.Delta
    if include_decay:
        for k in (3, 4, 5):
            h[k, k] -= 1j * p.gamma
    return h


def weak_field_lambda(omega_a_rabi: complex, omega_b_rabi: complex, p: MediumParams) -> complex:
    """Weak-field branch energy in joules."""
    return (2 * HBAR * abs(omega_a_rabi) ** 2 * abs(omega_b_rabi) ** 2
            / ((1j * p.gamma - p.Delta) * p.Omega_d**2))


def lambda_branch(omega_a_rabi: complex, omega_b_rabi: complex, p: MediumParams,
                  include_decay: bool = True, steps: int = RAMP_STEPS) -> tuple[complex, complex]:
    """Eigenvalue adiabatically connected to |2>, with its weak-field estimate.

    The probe Rabi frequencies are ramped from zero in ``steps`` equal steps
    and the branch is followed by maximal eigenvector overlap.

    Returns:
        ``(lambda_exact, lambda_weakfield)``, both in joules.

    Raises:
        NumericalError: if at some step the two best overlaps are within 0.05.
    """
    steps = max(int(steps), 8)
    ref = np.zeros(6, dtype=complex)
    ref[1] = 1.0
    val = 0.0 + 0.0j
    for k, s in enumerate(np.linspace(0.0, 1.0, steps + 1)[1:], start=1):
        vals, vecs = eig_general(hamiltonian6(s * omega_a_rabi, s * omega_b_rabi, p, include_decay))
        ov = np.abs(ref.conj() @ vecs)
        order = np.argsort(ov)[::-1]
        best, second = ov[order[0]], ov[order[1]]
        if best - second < AMBIGUITY:
            raise NumericalError(
                f"branch tracking ambiguous at ramp step {k}/{steps}: overlaps "
                f"{best:.3f} and {second:.3f}, eigenvalues {vals[order[0]]:.4e} and {vals[order[1]]:.4e}"
            )
        ref = vecs[:, order[0]]
        val = vals[order[0]]
    return HBAR * complex(val), weak_field_lambda(omega_a_rabi, omega_b_rabi, p)


def polarizability(p: MediumParams, other_rabi: complex, mode: str = "a") -> complex:
    """Cross-phase polarizability of probe ``mode`` in 1/m.

    ``alpha_a = 2 N sigma0 gamma |Omega_b|^2 / ((Delta - i gamma) |Omega_d|^2)``
    where ``other_rabi`` is the Rabi frequency of the other probe. The
    imaginary part (absorption) is non-negative.
    """
    nsg = p.N_density * p.sigma0(mode) * p.gamma
    return 2 * nsg * abs(other_rabi) ** 2 / ((p.Delta - 1j * p.gamma) * p.Omega_d**2)


def chi_rate(p: MediumParams) -> float:
    """Continuous-wave cross-Kerr rate in rad/s."""
    num = p.N_density * p.omega_a * p.omega_b * p.d24**2 * p.d26**2
    den = 2 * HBAR**2 * EPS0**2 * (1j * p.gamma - p.Delta) * p.Omega_d**2 * p.V
    return float((num / den).real)


def propagation_constants(p: MediumParams, omega_a_rabi: complex | None = None,
                          omega_b_rabi: complex | None = None) -> PropagationConstants:
    """Group velocity, cross-Kerr rate and polarizabilities.

    Probe Rabi frequencies default to the single-photon values. The
    self-phase figure uses the cross-phase prefactor with the detuning
    replaced by ``Delta_U + Delta_L``; it is an order-of-magnitude estimate.
    """
    oa = p.single_photon_rabi("a") if omega_a_rabi is None else omega_a_rabi
    ob = p.single_photon_rabi("b") if omega_b_rabi is None else omega_b_rabi
    s0 = p.sigma0("a")
    v_group = p.Omega_d**2 / (p.N_density * s0 * p.gamma)
    chi = chi_rate(p)
    alpha_a = polarizability(p, ob, "a")
    alpha_b = polarizability(p, oa, "b")
    self_a = 2 * p.N_density * s0 * p.gamma * abs(oa) ** 2 / ((p.Delta_U + p.Delta_L) * p.Omega_d**2)
    ratio = self_a / abs(alpha_a) if alpha_a != 0 else math.inf
    return PropagationConstants(
        sigma0=s0,
        v_group=v_group,
        chi=chi,
        alpha_a=alpha_a,
        alpha_b=alpha_b,
        pi_time=math.pi / abs(chi),
        self_phase_a=self_a,
        self_phase_ratio=ratio,
        weak_two_photon_absorption=p.weak_two_photon_absorption,
    )

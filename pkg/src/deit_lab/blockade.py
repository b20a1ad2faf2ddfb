"""Bi-chromatic photon blockade with N atoms in a two-mode cavity.

States of the symmetric Dicke sector are labelled by the number of atoms in
each of the six levels plus the two photon numbers, ``((m1..m6), n_a, n_b)``.
The collective operator ``sum_k |i>_k<j|`` maps a symmetric state with
``m_j`` atoms in |j> and ``m_i`` in |i> to one with ``m_j - 1`` and
``m_i + 1``, with amplitude ``sqrt(m_j (m_i + 1))``.

Energies are in units of whatever ``Omega_d`` is given in (rad/s, or
Omega_d = 1 for the dimensionless figures).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import SymmetryWarning, ValidationError
from .fockspace import MultiModeState
from .numerics import eig_general, eig_hermitian, integrate_schrodinger
from .series import CurveSeries

MAX_ATOMS = 4
SYMMETRY_TOL = 0.10

Label = tuple[tuple[int, ...], int, int]

# (upper, lower, sign, photon): H contains sign*g |upper><lower| (photon annihilated) + h.c.
_TRANSITIONS = (
    (4, 1, +1, None, "Omega_d"),
    (6, 3, -1, None, "Omega_d"),
    (4, 2, +1, "a", "g_a"),
    (6, 2, -1, "b", "g_b"),
    (5, 3, +1, "a", "g_a"),
    (5, 1, +1, "b", "g_b"),
)


@dataclass(frozen=True)
class CavityParams:
    """Cavity QED parameters; the defaults are the fig5a job values with Omega_d = 1."""

    g_a: float = 0.3
    g_b: float = 0.3
    Omega_d: float = 1.0
    Delta: float = 0.1
    gamma: float = 0.01
    Gamma: float = 0.0
    delta: float = 0.0
    eps_pump: float = 0.1
    N_atoms: int = 1

    def __post_init__(self):
        for name in ("g_a", "g_b", "Omega_d", "Delta", "gamma", "Gamma", "eps_pump"):
            val = getattr(self, name)
            if not math.isfinite(val) or val < 0:
                raise ValidationError(f"{name} must be finite and non-negative, got {val!r}")
        if self.Omega_d <= 0:
            raise ValidationError("Omega_d must be positive")
        if not math.isfinite(self.delta):
            raise ValidationError("delta must be finite")
        if int(self.N_atoms) != self.N_atoms or not 1 <= self.N_atoms <= MAX_ATOMS:
            raise ValidationError(f"N_atoms must be an integer in [1, {MAX_ATOMS}], got {self.N_atoms!r}")

    def with_(self, **kw) -> "CavityParams":
        return replace(self, **kw)


def excitation_number(label: Label) -> int:
    m, na, nb = label
    return na + nb + m[0] + m[3] + m[2] + m[5] + 2 * m[4]


@dataclass(frozen=True)
class ManifoldModel:
    basis: tuple[Label, ...]
    excitation_number: int
    H: np.ndarray
    N_atoms: int

    def index(self, label: Label) -> int:
        return self.basis.index(label)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def state(self, levels: Sequence[int], n_a: int, n_b: int) -> int:
        return self.index((tuple(levels), n_a, n_b))


def ground_label(N: int, n_a: int, n_b: int) -> Label:
    return ((0, N, 0, 0, 0, 0), n_a, n_b)


def _neighbours(label: Label, p: CavityParams):
    m, na, nb = label
    for up, lo, sign, photon, coupling in _TRANSITIONS:
        g = sign * getattr(p, coupling)
        # absorption: lower -> upper, photon annihilated
        if m[lo - 1] > 0 and (photon is None or (na if photon == "a" else nb) > 0):
            mm = list(m)
            amp = g * math.sqrt(mm[lo - 1] * (mm[up - 1] + 1))
            mm[lo - 1] -= 1
            mm[up - 1] += 1
            a, b = na, nb
            if photon == "a":
                amp *= math.sqrt(a)
                a -= 1
            elif photon == "b":
                amp *= math.sqrt(b)
                b -= 1
            yield (tuple(mm), a, b), amp
        # emission: upper -> lower, photon created
        if m[up - 1] > 0:
            mm = list(m)
            amp = g * math.sqrt(mm[up - 1] * (mm[lo - 1] + 1))
            mm[up - 1] -= 1
            mm[lo - 1] += 1
            a, b = na, nb
            if photon == "a":
                a += 1
                amp *= math.sqrt(a)
            elif photon == "b":
                b += 1
                amp *= math.sqrt(b)
            yield (tuple(mm), a, b), amp


def build_manifold(p: CavityParams, excitations: int = 2, include_decay: bool = True,
                   photons: tuple[int, int] | None = None) -> ManifoldModel:
    """Closed manifold reached from ``|2...2> |n_a, n_b>`` by the atom-cavity Hamiltonian.

    ``photons`` defaults to (1, 1) for two excitations and (1, 0) for one.
    Diagonal: ``Delta`` per atom in |5>, ``delta`` per atom in |4> or |6>,
    and, with decay, ``-i gamma`` per excited atom and ``-i Gamma (n_a + n_b)``.
    """
    if excitations not in (0, 1, 2):
        raise ValidationError(f"excitations must be 0, 1 or 2, got {excitations!r}")
    N = int(p.N_atoms)
    if photons is None:
        photons = {0: (0, 0), 1: (1, 0), 2: (1, 1)}[excitations]
    na0, nb0 = (int(v) for v in photons)
    if na0 < 0 or nb0 < 0 or na0 + nb0 != excitations:
        raise ValidationError(f"seed photons {photons} do not carry {excitations} excitations")
    seed = ground_label(N, na0, nb0)
    basis = [seed]
    index = {seed: 0}
    edges = []
    i = 0
    while i < len(basis):
        for label, amp in _neighbours(basis[i], p):
            if label not in index:
                index[label] = len(basis)
                basis.append(label)
            edges.append((index[label], i, amp))
        i += 1
    n = len(basis)
    h = np.zeros((n, n), dtype=complex)
    for r, c, amp in edges:
        h[r, c] = amp
    for k, (m, na, nb) in enumerate(basis):
        d = p.Delta * m[4] + p.delta * (m[3] + m[5])
        if include_decay:
            d = d - 1j * p.gamma * (m[3] + m[4] + m[5]) - 1j * p.Gamma * (na + nb)
        h[k, k] = d
    return ManifoldModel(tuple(basis), excitations, h, N)


def manifold_spectrum(p: CavityParams, excitations: int = 2, include_decay: bool = True) -> np.ndarray:
    model = build_manifold(p, excitations, include_decay)
    if include_decay and (p.gamma > 0 or p.Gamma > 0):
        return eig_general(model.H)[0]
    return eig_hermitian(model.H)[0].astype(complex)


def blockade_gap(eigs: np.ndarray) -> float:
    return float(np.min(np.abs(np.real(eigs))))


def blockade_spectrum_scan(p: CavityParams, g_b_grid: Iterable[float], N_atoms: int | None = None,
                           delta: float | None = None, mapper: Callable = map) -> CurveSeries:
    """Doubly-excited spectrum versus ``g_b``.

    Columns: ``g_b``, ``gap`` (min |Re E|), then ``re_k`` and ``im_k`` for
    each eigenvalue, sorted by real part at every grid point.
    """
    kw = {}
    if N_atoms is not None:
        kw["N_atoms"] = N_atoms
    if delta is not None:
        kw["delta"] = delta
    base = p.with_(**kw)
    grid = np.asarray(list(g_b_grid), dtype=float)
    spectra = list(mapper(lambda g: manifold_spectrum(base.with_(g_b=float(g))), grid))
    dim = len(spectra[0])
    cols = ["g_b", "gap"] + [f"re_{k}" for k in range(dim)] + [f"im_{k}" for k in range(dim)]
    rows = [[g, blockade_gap(e), *np.real(e), *np.imag(e)] for g, e in zip(grid, spectra)]
    meta = {"N_atoms": base.N_atoms, "delta": base.delta}
    return CurveSeries(cols, np.array(rows), meta)


def _dicke_single(N: int, level: int, n_a: int, n_b: int) -> Label:
    m = [0] * 6
    m[1] = N - 1
    m[level - 1] = 1
    return (tuple(m), n_a, n_b)


def collective_dark_state(p: CavityParams, N_atoms: int | None = None) -> tuple[ManifoldModel, np.ndarray]:
    """``(Omega_d |2..2>|1> - sqrt(N) g_a |1_sym>|0>) / sqrt(Omega_d^2 + N g_a^2)``.

    ``|1_sym>`` is the normalised symmetric state with one atom in |1>.
    Returned as a vector over the decay-free singly excited (mode a) manifold.
    """
    N = p.N_atoms if N_atoms is None else int(N_atoms)
    q = p.with_(N_atoms=N)
    model = build_manifold(q, 1, include_decay=False, photons=(1, 0))
    v = np.zeros(model.dim, dtype=complex)
    v[model.index(ground_label(N, 1, 0))] = q.Omega_d
    v[model.index(_dicke_single(N, 1, 0, 0))] = -math.sqrt(N) * q.g_a
    return model, v / math.sqrt(q.Omega_d**2 + N * q.g_a**2)


def steady_population(rabi: float, detuning: float, gamma: float) -> float:
    """Two-level steady excited population ``(W^2/4) / (D^2 + W^2/2 + G^2/4)``.

    ``rabi`` is the full Rabi frequency W (twice the drive matrix element)
    and ``gamma`` the population decay rate G of the upper state.
    """
    if rabi <= 0:
        raise ValidationError("rabi must be positive")
    return (rabi**2 / 4) / (detuning**2 + rabi**2 / 2 + gamma**2 / 4)


def _raise(vec: np.ndarray, src: ManifoldModel, dst: ManifoldModel, mode: str) -> np.ndarray:
    """Apply a^dag or b^dag to ``vec`` and express it in ``dst``."""
    out = np.zeros(dst.dim, dtype=complex)
    pos = {lab: k for k, lab in enumerate(dst.basis)}
    for amp, (m, na, nb) in zip(vec, src.basis):
        if amp == 0:
            continue
        if mode == "a":
            lab, f = (m, na + 1, nb), math.sqrt(na + 1)
        else:
            lab, f = (m, na, nb + 1), math.sqrt(nb + 1)
        if lab in pos:
            out[pos[lab]] += amp * f
    return out


def _single_dark(p: CavityParams, mode: str) -> tuple[ManifoldModel, np.ndarray]:
    """Zero-energy eigenvector of the decay-free one-photon manifold of ``mode``."""
    model = build_manifold(p, 1, include_decay=False, photons=(1, 0) if mode == "a" else (0, 1))
    vals, vecs = eig_hermitian(model.H)
    k = int(np.argmin(np.abs(vals)))
    v = vecs[:, k]
    ref = v[model.index(ground_label(p.N_atoms, *((1, 0) if mode == "a" else (0, 1))))]
    if abs(ref) > 0:
        v = v * (abs(ref) / ref)
    return model, v


@dataclass(frozen=True)
class TransitionPopulations:
    sigma01: float
    sigma12: float
    rabi01: float
    rabi12: float
    delta_prime: float
    overlap12: float


def transition_populations(p: CavityParams) -> TransitionPopulations:
    """Steady populations of the first two blockade transitions under a weak pump.

    ``sigma01``: |2..2,0,0> to |D_a>, resonant. ``sigma12``: |D_a> with an
    extra b photon to the doubly excited eigenstate nearest zero energy
    (detuning Delta'). Rabi frequencies are ``2 eps |<up|a^dag|down>|`` and
    the linewidth is ``2 gamma``.
    """
    vac = build_manifold(p, 0, include_decay=False)
    ma, da = _single_dark(p, "a")
    v0 = np.zeros(vac.dim, dtype=complex)
    v0[0] = 1.0
    ov01 = abs(np.vdot(da, _raise(v0, vac, ma, "a")))
    m2 = build_manifold(p, 2, include_decay=False)
    vals, vecs = eig_hermitian(m2.H)
    k = int(np.argmin(np.abs(vals)))
    ov12 = abs(np.vdot(vecs[:, k], _raise(da, ma, m2, "b")))
    lw = 2 * p.gamma
    r01 = 2 * p.eps_pump * ov01
    r12 = 2 * p.eps_pump * ov12
    return TransitionPopulations(
        sigma01=steady_population(r01, 0.0, lw),
        sigma12=steady_population(r12, float(vals[k]), lw),
        rabi01=r01,
        rabi12=r12,
        delta_prime=float(vals[k]),
        overlap12=ov12,
    )


FIVE_LABELS = ("200", "D_a", "D_b", "D_ab", "D'_ab")


@dataclass(frozen=True)
class FiveLevelModel:
    H: np.ndarray
    energies: tuple[float, float]
    asymmetry: float
    labels: tuple[str, ...] = FIVE_LABELS


def effective_five_level(p: CavityParams, warn: bool = True) -> FiveLevelModel:
    """Pumped five-level model over {|200>, |D_a>, |D_b>, |D_ab>, |D'_ab>}.

    |D_ab> and |D'_ab> are the two decay-free doubly excited eigenstates
    closest to zero energy; their actual energies go on the diagonal. All
    couplings are ``eps <X|(a^dag + b^dag)|Y>`` evaluated on the exact
    vectors. A :class:`SymmetryWarning` is issued when the two energies
    differ in magnitude by more than 10%.
    """
    eps = p.eps_pump
    vac = build_manifold(p, 0, include_decay=False)
    ma, da = _single_dark(p, "a")
    mb, db = _single_dark(p, "b")
    m2 = build_manifold(p, 2, include_decay=False)
    vals, vecs = eig_hermitian(m2.H)
    order = np.argsort(np.abs(vals), kind="stable")[:2]
    order = order[np.argsort(vals[order])]
    e_lo, e_hi = float(vals[order[0]]), float(vals[order[1]])
    scale = max(abs(e_lo), abs(e_hi))
    asym = abs(abs(e_lo) - abs(e_hi)) / scale if scale > 0 else 0.0
    if warn and asym > SYMMETRY_TOL:
        warnings.warn(
            f"doubly excited splitting is asymmetric by {asym:.0%} "
            f"(energies {e_lo:.4f}, {e_hi:.4f})",
            SymmetryWarning,
            stacklevel=2,
        )
    v0 = np.zeros(vac.dim, dtype=complex)
    v0[0] = 1.0
    h = np.zeros((5, 5), dtype=complex)
    h[1, 0] = eps * np.vdot(da, _raise(v0, vac, ma, "a"))
    h[2, 0] = eps * np.vdot(db, _raise(v0, vac, mb, "b"))
    up_a = _raise(da, ma, m2, "b")
    up_b = _raise(db, mb, m2, "a")
    for row, k in ((3, order[0]), (4, order[1])):
        h[row, 1] = eps * np.vdot(vecs[:, k], up_a)
        h[row, 2] = eps * np.vdot(vecs[:, k], up_b)
    h = h + h.conj().T
    h[3, 3], h[4, 4] = e_lo, e_hi
    return FiveLevelModel(h, (e_lo, e_hi), asym)


@dataclass(frozen=True)
class FiveLevelResult:
    t: np.ndarray
    amplitudes: np.ndarray
    populations: np.ndarray
    reduced_populations: np.ndarray  # numeric, couplings to D_ab, D'_ab zeroed
    analytic_populations: np.ndarray  # closed-form three-level solution
    rabi_frequency: float
    omega_R: float
    model: FiveLevelModel

    @property
    def frequency_ratio(self) -> float:
        return self.rabi_frequency / self.omega_R


def _dominant_frequency(t: np.ndarray, y: np.ndarray) -> float:
    """Angular frequency of the strongest Fourier component of ``y`` (uniform grid)."""
    y = y - y.mean()
    n = len(y)
    pad = 16 * n
    spec = np.abs(np.fft.rfft(y * np.hanning(n), pad))
    freqs = np.fft.rfftfreq(pad, t[1] - t[0])
    k = int(np.argmax(spec[1:])) + 1
    if 1 <= k < len(spec) - 1:
        a, b, c = spec[k - 1], spec[k], spec[k + 1]
        shift = 0.5 * (a - c) / (a - 2 * b + c) if (a - 2 * b + c) != 0 else 0.0
    else:
        shift = 0.0
    return 2 * math.pi * (freqs[k] + shift * (freqs[1] - freqs[0]))


def five_level_dynamics(p: CavityParams, t_grid=None, warn: bool = True) -> FiveLevelResult:
    """Pumped dynamics of the effective five-level model from ``C_1 = 1``.

    The reported ``rabi_frequency`` is half the dominant angular frequency of
    ``|C_1|^2``; ``omega_R = Omega_d eps / sqrt(Omega_d^2 + g_a^2)``. The
    three-level reduction has ``C_1 = cos(W t)``, ``C_{2,3} = -i (O_{2,3}/W) sin(W t)``
    with ``W = sqrt(O_2^2 + O_3^2)``.
    """
    model = effective_five_level(p, warn=warn)
    h = model.H
    o2, o3 = abs(h[1, 0]), abs(h[2, 0])
    w = math.hypot(o2, o3)
    if t_grid is None:
        t_grid = np.linspace(0.0, 4 * math.pi / w, 2001)
    t_grid = np.asarray(t_grid, dtype=float)
    psi0 = np.zeros(5, dtype=complex)
    psi0[0] = 1.0
    amps = integrate_schrodinger(h, psi0, t_grid)
    red = h.copy()
    red[3:, :] = 0.0
    red[:, 3:] = 0.0
    amps_red = integrate_schrodinger(red, psi0, t_grid)
    wt = w * t_grid
    analytic = np.zeros((len(t_grid), 5))
    analytic[:, 0] = np.cos(wt) ** 2
    analytic[:, 1] = (o2 / w) ** 2 * np.sin(wt) ** 2
    analytic[:, 2] = (o3 / w) ** 2 * np.sin(wt) ** 2
    pops = np.abs(amps) ** 2
    freq = 0.5 * _dominant_frequency(t_grid, pops[:, 0]) if len(t_grid) > 8 else float("nan")
    omega_r = p.Omega_d * p.eps_pump / math.sqrt(p.Omega_d**2 + p.g_a**2)
    return FiveLevelResult(t_grid, amps, pops, np.abs(amps_red) ** 2, analytic, freq, omega_r, model)


@dataclass(frozen=True)
class ProjectionResult:
    state: MultiModeState
    probability: float
    cos_theta: tuple[float, float]
    other_probability: float  # atom found in |1> or |3>


def project_entangled_modes(p: CavityParams) -> ProjectionResult:
    """Cavity state after finding the atom in |2> from ``(|D_a> + |D_b>)/sqrt2``.

    The conditional two-mode state is ``~ cos(theta_a)|10> + cos(theta_b)|01>``
    with ``cos(theta_j) = Omega_d / sqrt(Omega_d^2 + g_j^2)``; the outcome
    probability is ``(cos^2 theta_a + cos^2 theta_b)/2``.
    """
    ca = p.Omega_d / math.hypot(p.Omega_d, p.g_a)
    cb = p.Omega_d / math.hypot(p.Omega_d, p.g_b)
    amps = np.zeros((2, 2), dtype=complex)
    amps[1, 0] = ca
    amps[0, 1] = cb
    nrm = math.hypot(ca, cb)
    state = MultiModeState((1, 1), amps / nrm)
    prob = 0.5 * (ca**2 + cb**2)
    return ProjectionResult(state, prob, (ca, cb), 0.5 * ((1 - ca**2) + (1 - cb**2)))

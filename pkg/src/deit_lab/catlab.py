"""Cat-state engineering with a cross-Kerr medium.

A cross-phase shift of pi entangles two coherent beams; mixing one of them
with a local oscillator and watching both outputs with threshold detectors
heralds an even or odd cat in the other. Splitting a cat on a beam splitter
gives the two-mode state whose Duan witness is computed here.

Quadratures are ``x = (a + a^dag)/sqrt2``, ``p = (a - a^dag)/(i sqrt2)`` so the
vacuum variance is 1/2 and separable states obey ``S >= 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fockspace as fs
from .errors import NumericalError, ValidationError
from .fockspace import DensityOperator, MultiModeState
from .stateops import beam_splitter, click_projection, cross_kerr, loss_channel

SEPARABLE_BOUND = 2.0
HERALD_OUTCOMES = ("D1", "D2", "none", "both")


@dataclass(frozen=True)
class CatJobParams:
    gamma_amp: float
    c: float = 1.0
    eta: float = 1.0
    cutoff: int | None = None

    def __post_init__(self):
        if not -1.0 <= self.c <= 1.0:
            raise ValidationError(f"c = {self.c} outside [-1, 1]")
        if not 0.0 <= self.eta <= 1.0:
            raise ValidationError(f"eta = {self.eta} outside [0, 1]")


@dataclass(frozen=True)
class DuanResult:
    S: float
    var_u: float
    var_v: float
    separable_bound: float = SEPARABLE_BOUND

    @property
    def inseparable(self) -> bool:
        return self.S <= self.separable_bound


def _cutoffs(cutoffs, n: int, amp: float) -> tuple[int, ...]:
    if cutoffs is None:
        return (fs.default_cutoff(amp),) * n
    if isinstance(cutoffs, int):
        return (cutoffs,) * n
    cut = tuple(int(c) for c in cutoffs)
    if len(cut) != n:
        raise ValidationError(f"expected {n} cutoffs, got {len(cut)}")
    return cut


def make_entangled_coherent(alpha: complex, gamma_amp: complex,
                            cutoffs: Sequence[int] | int | None = None) -> MultiModeState:
    """``exp(-i pi n_a n_b) |alpha>|gamma>``, normalised."""
    ca, cb = _cutoffs(cutoffs, 2, max(abs(alpha), abs(gamma_amp)))
    psi = fs.tensor([fs.coherent_state(alpha, ca), fs.coherent_state(gamma_amp, cb)])
    return cross_kerr(psi, (0, 1), math.pi).normalized()


def cat_state(gamma_amp: complex, parity: str = "even", cutoff: int | None = None) -> MultiModeState:
    """``|gamma> + |-gamma>`` (even) or ``|gamma> - |-gamma>`` (odd), normalised.

    Built from the raw coherent amplitudes with the wrong-parity layers set
    to exactly zero.
    """
    if parity not in ("even", "odd"):
        raise ValidationError(f"parity must be 'even' or 'odd', got {parity!r}")
    if cutoff is None:
        cutoff = fs.default_cutoff(gamma_amp)
    raw = fs.coherent_amplitudes(gamma_amp, int(cutoff))
    n = np.arange(raw.size)
    keep = (n % 2 == 0) if parity == "even" else (n % 2 == 1)
    amps = np.where(keep, raw, 0.0)
    nrm = float(np.linalg.norm(amps))
    if nrm == 0.0:
        raise ValidationError("odd cat with zero amplitude is the null vector")
    return MultiModeState((int(cutoff),), amps / nrm)


def herald_cat(psi_ab: MultiModeState, alpha_lo: complex, outcome: str,
               lo_cutoff: int | None = None) -> tuple[DensityOperator, float]:
    """Herald mode b by mixing mode a with a local oscillator.

    Mode a and the oscillator mode c meet on a 50:50 beam splitter; detector
    1 watches output a~, detector 2 watches c~. Outcomes: ``D1`` (1 clicks,
    2 silent, even cat), ``D2`` (2 clicks, 1 silent, odd cat), ``none``
    (both silent, retry) and ``both``.

    Returns:
        The conditional single-mode density operator of b and the outcome
        probability.
    """
    if outcome not in HERALD_OUTCOMES:
        raise ValidationError(f"outcome must be one of {HERALD_OUTCOMES}, got {outcome!r}")
    if psi_ab.num_modes != 2:
        raise ValidationError("herald_cat needs a two-mode state")
    cut_lo = psi_ab.cutoffs[0] if lo_cutoff is None else int(lo_cutoff)
    psi = fs.tensor([psi_ab, fs.coherent_state(alpha_lo, cut_lo)])
    psi = beam_splitter(psi, (0, 2))
    d1, d2 = {"D1": ("click", "no-click"), "D2": ("no-click", "click"),
              "none": ("no-click", "no-click"), "both": ("click", "click")}[outcome]
    psi, p2 = click_projection(psi, 2, d2)
    psi, p1 = click_projection(psi, 0, d1)
    return fs.partial_trace(psi, [1]), p1 * p2


def herald_probabilities(psi_ab: MultiModeState, alpha_lo: complex) -> dict[str, float]:
    """Probabilities of all four detector outcomes."""
    out = {}
    for name in HERALD_OUTCOMES:
        try:
            out[name] = herald_cat(psi_ab, alpha_lo, name)[1]
        except NumericalError:
            out[name] = 0.0
    return out


def fidelity(rho: DensityOperator, psi: MultiModeState) -> float:
    """``<psi|rho|psi>`` for a pure target."""
    if rho.cutoffs != psi.cutoffs:
        raise ValidationError("cutoff mismatch")
    v = psi.vector
    return float(np.real(v.conj() @ rho.matrix @ v))


def split_cat_density(gamma_amp: complex, c: float,
                      cutoffs: Sequence[int] | int | None = None) -> DensityOperator:
    """Two-mode state of a cat split on a beam splitter against vacuum.

    With ``s = gamma/sqrt2`` and kets ``|k1> = |s,-s>``, ``|k2> = |-s,s>``:
    ``rho ~ |k1><k1| + |k2><k2| + c (|k1><k2| + |k2><k1|)``, normalised by its
    trace. ``c = 1`` is the split even cat, ``c = 0`` the classical mixture.
    """
    if not -1.0 <= c <= 1.0:
        raise ValidationError(f"c = {c} outside [-1, 1]")
    s = gamma_amp / math.sqrt(2)
    cut = _cutoffs(cutoffs, 2, abs(s))
    plus = [fs.coherent_state(s, k) for k in cut]
    minus = [fs.coherent_state(-s, k) for k in cut]
    k1 = np.kron(plus[0].vector, minus[1].vector)
    k2 = np.kron(minus[0].vector, plus[1].vector)
    m = np.outer(k1, k1.conj()) + np.outer(k2, k2.conj())
    m = m + c * (np.outer(k1, k2.conj()) + np.outer(k2, k1.conj()))
    tr = np.trace(m).real
    if tr <= 0:
        raise NumericalError("split cat density has zero trace")
    return DensityOperator(cut, m / tr)


def duan_S(rho: fs.State, eta: float = 1.0, modes: Sequence[int] = (0, 1)) -> DuanResult:
    """Duan witness ``Var(x1 + x2) + Var(-p1 + p2)`` after detector loss.

    Each mode passes a loss channel of transmissivity ``eta`` first, which
    models inefficient homodyne detection.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"eta = {eta} outside [0, 1]")
    if isinstance(rho, MultiModeState):
        rho = rho.to_density()
    for m in modes:
        rho = loss_channel(rho, m, eta)
    mom = fs.quadrature_moments(rho, modes)
    var_u = mom.var("x1") + mom.var("x2") + 2 * mom.cov("x1", "x2")
    var_v = mom.var("p1") + mom.var("p2") - 2 * mom.cov("p1", "p2")
    return DuanResult(var_u + var_v, var_u, var_v)


def duan_curve(gammas: Sequence[float], c: float = 1.0, eta: float = 1.0,
               cutoff: int | None = None) -> np.ndarray:
    """S over a grid of real cat amplitudes."""
    out = np.empty(len(gammas))
    for k, g in enumerate(gammas):
        cut = cutoff if cutoff is not None else max(fs.default_cutoff(g / math.sqrt(2)), 20)
        out[k] = duan_S(split_cat_density(g, c, cut), eta).S
    return out

"""Quantum channels acting on truncated Fock states.

Cross-Kerr phase, 50:50 beam splitter, photon loss and threshold-detector
projections. Beam-splitter conventions follow the coherent-label law
``B|alpha>|beta> = |(alpha+beta)/sqrt2>|(-alpha+beta)/sqrt2>`` generated by
``exp(theta (a^dag c - a c^dag))`` with ``theta = pi/4``.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import NumericalError, TruncationWarning, ValidationError
from .fockspace import DensityOperator, MultiModeState, State, annihilation

EDGE_TOL = 1e-8


def _pair(state, modes: Sequence[int]) -> tuple[int, int]:
    i, j = (int(m) for m in modes)
    if i == j:
        raise ValidationError("modes must be distinct")
    for m in (i, j):
        if not 0 <= m < state.num_modes:
            raise ValidationError(f"mode {m} out of range")
    return i, j


def cross_kerr(state: MultiModeState, modes: Sequence[int], phi: float) -> MultiModeState:
    """Apply ``exp(-i phi n_i n_j)`` to the mode pair."""
    i, j = _pair(state, modes)
    ni = np.arange(state.dims[i])
    nj = np.arange(state.dims[j])
    phase = np.exp(-1j * phi * np.multiply.outer(ni, nj))
    shape = [1] * state.num_modes
    shape[i], shape[j] = state.dims[i], state.dims[j]
    if i > j:
        phase = phase.T
    return state.with_amplitudes(state.amplitudes * phase.reshape(shape))


@lru_cache(maxsize=16)
def bs_unitary(cutoff: int, theta: float = math.pi / 4) -> np.ndarray:
    """Two-mode beam-splitter matrix on ``(cutoff+1)**2`` amplitudes.

    Built by exponentiating ``theta (a^dag c - a c^dag)`` on the truncated
    space. It is exactly unitary there but differs from the infinite-space
    operator on states with weight near the cutoff.
    """
    a = annihilation(cutoff)
    eye = np.eye(cutoff + 1)
    a1 = np.kron(a, eye)
    a2 = np.kron(eye, a)
    gen = theta * (a1.conj().T @ a2 - a1 @ a2.conj().T)
    u = expm(gen)
    u.setflags(write=False)
    return u


def _apply_two_mode(amps: np.ndarray, u: np.ndarray, i: int, j: int) -> np.ndarray:
    moved = np.moveaxis(amps, [i, j], [0, 1])
    d0, d1 = moved.shape[0], moved.shape[1]
    flat = moved.reshape(d0 * d1, -1)
    out = (u @ flat).reshape(moved.shape)
    return np.moveaxis(out, [0, 1], [i, j])


def beam_splitter(state: MultiModeState, modes: Sequence[int], theta: float = math.pi / 4) -> MultiModeState:
    """Mix two modes on a beam splitter (50:50 by default).

    The first mode of ``modes`` plays the role of ``a`` (it picks up the
    minus sign on the second output). Emits a :class:`TruncationWarning` and
    flags the result when more than 1e-8 of the input weight sits within two
    quanta of either cutoff.
    """
    i, j = _pair(state, modes)
    if state.cutoffs[i] != state.cutoffs[j]:
        raise ValidationError("beam splitter needs equal cutoffs on both modes")
    cut = state.cutoffs[i]
    flags: tuple[str, ...] = ()
    edge = max(state.edge_weight(i), state.edge_weight(j))
    if edge > EDGE_TOL:
        flags = ("edge-weight",)
        warnings.warn(
            f"input weight {edge:.2e} within two quanta of cutoff {cut}; "
            "beam splitter is not faithful there",
            TruncationWarning,
            stacklevel=2,
        )
    u = bs_unitary(cut, float(theta))
    out = _apply_two_mode(state.amplitudes, u, i, j)
    return state.with_amplitudes(out, flags)


def _loss_kraus_coefficients(cutoff: int, eta: float) -> np.ndarray:
    """``K[k, n] = sqrt(C(n,k) eta^(n-k) (1-eta)^k)`` for the pure-loss channel."""
    n = np.arange(cutoff + 1)
    k = n[:, None]
    nn = n[None, :]
    valid = k <= nn
    with np.errstate(divide="ignore", invalid="ignore"):
        logc = gammaln(nn + 1) - gammaln(k + 1) - gammaln(np.maximum(nn - k, 0) + 1)
        log_eta = np.where(nn - k > 0, (nn - k) * np.log(eta) if eta > 0 else -np.inf, 0.0)
        log_loss = np.where(k > 0, k * np.log1p(-eta) if eta < 1 else -np.inf, 0.0)
        val = np.exp(0.5 * (logc + log_eta + log_loss))
    return np.where(valid, val, 0.0)


def loss_channel(rho: State, mode: int, eta: float) -> DensityOperator:
    """Photon loss: beam splitter of transmissivity ``eta`` with a vacuum ancilla.

    The ancilla is traced out analytically, giving the Kraus operators
    ``K_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|``, which are
    trace preserving on the truncated space.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"transmissivity {eta} outside [0, 1]")
    if isinstance(rho, MultiModeState):
        rho = rho.to_density()
    if not 0 <= mode < rho.num_modes:
        raise ValidationError(f"mode {mode} out of range")
    if eta == 1.0:
        return rho
    n = rho.num_modes
    cut = rho.cutoffs[mode]
    coef = _loss_kraus_coefficients(cut, eta)
    t = np.moveaxis(rho.tensor, [mode, n + mode], [0, 1])
    out = np.zeros_like(t)
    for k in range(cut + 1):
        c = coef[k, k:]
        if not np.any(c):
            continue
        block = t[k:, k:] * np.multiply.outer(c, c).reshape(c.size, c.size, *([1] * (t.ndim - 2)))
        out[: cut + 1 - k, : cut + 1 - k] += block
    out = np.moveaxis(out, [0, 1], [mode, n + mode])
    d = rho.matrix.shape[0]
    return DensityOperator(rho.cutoffs, out.reshape(d, d))


def click_projection(state: MultiModeState, mode: int, outcome: str) -> tuple[MultiModeState, float]:
    """Condition on a threshold detector watching ``mode``.

    ``outcome`` is ``"click"`` (projector ``1 - |0><0|``) or ``"no-click"``
    (projector ``|0><0|``). Returns the renormalised conditional state and
    the outcome probability.

    Raises:
        NumericalError: when the outcome has zero probability.
    """
    if outcome not in ("click", "no-click"):
        raise ValidationError(f"unknown detector outcome {outcome!r}")
    if not 0 <= mode < state.num_modes:
        raise ValidationError(f"mode {mode} out of range")
    amps = np.array(state.amplitudes)
    idx = [slice(None)] * state.num_modes
    idx[mode] = 0
    if outcome == "no-click":
        keep = np.zeros_like(amps)
        keep[tuple(idx)] = amps[tuple(idx)]
    else:
        keep = amps.copy()
        keep[tuple(idx)] = 0.0
    total = float(np.sum(np.abs(amps) ** 2))
    prob = float(np.sum(np.abs(keep) ** 2)) / total
    if prob <= 1e-300:
        raise NumericalError(f"cannot condition on {outcome!r}: outcome has zero probability")
    return state.with_amplitudes(keep / math.sqrt(prob * total)), prob

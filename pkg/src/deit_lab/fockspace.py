"""Truncated multimode Fock space: states, density operators and moments.

Conventions: mode ``k`` has occupations ``0..cutoffs[k]`` (inclusive), state
amplitudes are stored as a dense tensor indexed by the occupation tuple, and
quadratures are ``x = (a + a^dag)/sqrt(2)``, ``p = (a - a^dag)/(i sqrt(2))`` so
that the vacuum variance is 1/2.
"""

from __future__ import annotations

import math
import string
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.special import gammaln

from .errors import TruncationWarning, ValidationError

MAX_MODES = 3
DEFAULT_SIZE_BUDGET = 300_000
LOSSY_WEIGHT = 1e-6


def default_cutoff(alpha: complex) -> int:
    """Cutoff keeping the Poisson tail of ``|alpha>`` negligible."""
    r = abs(alpha)
    return int(math.ceil(r * r + 6 * r + 10))


@dataclass(frozen=True, eq=False)
class MultiModeState:
    """Pure state on a truncated multimode Fock space.

    ``truncation_weight`` records probability discarded when the state was
    built by truncating an infinite expansion (before renormalisation).
    """

    cutoffs: tuple[int, ...]
    amplitudes: np.ndarray
    truncation_weight: float = 0.0
    flags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        cut = tuple(int(c) for c in self.cutoffs)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if not 1 <= len(cut) <= MAX_MODES:
            raise ValidationError(f"between 1 and {MAX_MODES} modes supported, got {len(cut)}")
        if any(c < 0 for c in cut):
            raise ValidationError("cutoffs must be non-negative")
        shape = tuple(c + 1 for c in cut)
        if amps.shape != shape:
            amps = amps.reshape(shape)
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "cutoffs", cut)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_modes(self) -> int:
        return len(self.cutoffs)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c + 1 for c in self.cutoffs)

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.ravel()

    @property
    def lossy(self) -> bool:
        return self.truncation_weight > LOSSY_WEIGHT or "edge-weight" in self.flags

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "MultiModeState":
        n = self.norm()
        if n == 0:
            raise ValidationError("cannot normalise the null vector")
        return MultiModeState(self.cutoffs, self.amplitudes / n, self.truncation_weight, self.flags)

    def with_amplitudes(self, amps, flags: Iterable[str] = ()) -> "MultiModeState":
        merged = tuple(dict.fromkeys(self.flags + tuple(flags)))
        return MultiModeState(self.cutoffs, amps, self.truncation_weight, merged)

    def photon_distribution(self, mode: int) -> np.ndarray:
        _check_mode(self, mode)
        probs = np.abs(self.amplitudes) ** 2
        axes = tuple(k for k in range(self.num_modes) if k != mode)
        return probs.sum(axis=axes) if axes else probs

    def edge_weight(self, mode: int, width: int = 2) -> float:
        """Probability on the top ``width + 1`` occupations of ``mode``."""
        dist = self.photon_distribution(mode)
        return float(dist[max(0, len(dist) - width - 1):].sum())

    def to_density(self) -> "DensityOperator":
        v = self.vector
        return DensityOperator(self.cutoffs, np.outer(v, v.conj()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Density matrix on a truncated multimode Fock space (row-major tuples)."""

    cutoffs: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        cut = tuple(int(c) for c in self.cutoffs)
        if not 1 <= len(cut) <= MAX_MODES:
            raise ValidationError(f"between 1 and {MAX_MODES} modes supported, got {len(cut)}")
        dim = int(np.prod([c + 1 for c in cut]))
        mat = np.asarray(self.matrix, dtype=complex).reshape(dim, dim)
        if not np.all(np.isfinite(mat)):
            raise ValidationError("density matrix must be finite")
        mat.setflags(write=False)
        object.__setattr__(self, "cutoffs", cut)
        object.__setattr__(self, "matrix", mat)

    @property
    def num_modes(self) -> int:
        return len(self.cutoffs)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c + 1 for c in self.cutoffs)

    @property
    def tensor(self) -> np.ndarray:
        return self.matrix.reshape(self.dims + self.dims)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def purity(self) -> float:
        m = self.matrix
        return float(np.real(np.vdot(m.conj().T, m)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def normalized(self) -> "DensityOperator":
        tr = self.trace().real
        if tr <= 0:
            raise ValidationError("density operator has non-positive trace")
        return DensityOperator(self.cutoffs, self.matrix / tr)

    def check(self, herm_tol: float = 1e-10, trace_tol: float = 1e-10, eig_tol: float = 1e-8) -> None:
        """Raise ValidationError unless the operator is a physical state."""
        if self.hermiticity_error() > herm_tol:
            raise ValidationError(f"not Hermitian: {self.hermiticity_error():.2e}")
        if abs(self.trace() - 1) > trace_tol:
            raise ValidationError(f"trace {self.trace():.12g} differs from 1")
        lam = self.min_eigenvalue()
        if lam < -eig_tol:
            raise ValidationError(f"negative eigenvalue {lam:.3e}")


State = Union[MultiModeState, DensityOperator]


@dataclass(frozen=True)
class QuadratureMoments:
    """First and second quadrature moments of a mode pair.

    ``means`` and ``covariance`` are ordered ``(x1, p1, x2, p2)``; the
    covariance is symmetrised, ``(<AB + BA>)/2 - <A><B>``.
    """

    modes: tuple[int, int]
    means: np.ndarray
    covariance: np.ndarray

    def var(self, name: str) -> float:
        i = _MOMENT_INDEX[name]
        return float(self.covariance[i, i])

    def cov(self, a: str, b: str) -> float:
        return float(self.covariance[_MOMENT_INDEX[a], _MOMENT_INDEX[b]])


_MOMENT_INDEX = {"x1": 0, "p1": 1, "x2": 2, "p2": 3}


# -- single-mode operators ---------------------------------------------------


def annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)


def number_op(cutoff: int) -> np.ndarray:
    return np.diag(np.arange(cutoff + 1, dtype=float)).astype(complex)


def x_op(cutoff: int) -> np.ndarray:
    a = annihilation(cutoff)
    return (a + a.conj().T) / math.sqrt(2)


def p_op(cutoff: int) -> np.ndarray:
    a = annihilation(cutoff)
    return (a - a.conj().T) / (1j * math.sqrt(2))


_SINGLE_OPS = {"n": number_op, "x": x_op, "p": p_op}


# -- constructors -------------------------------------------------------------


def _check_cutoffs(cutoffs: Sequence[int]) -> tuple[int, ...]:
    cut = tuple(int(c) for c in cutoffs)
    if any(c < 0 for c in cut):
        raise ValidationError("cutoffs must be non-negative")
    return cut


def basis_state(occupations: Sequence[int], cutoffs: Sequence[int]) -> MultiModeState:
    """Fock basis state ``|n_1, ..., n_k>``."""
    cut = _check_cutoffs(cutoffs)
    occ = tuple(int(n) for n in occupations)
    if len(occ) != len(cut):
        raise ValidationError("occupations and cutoffs differ in length")
    for n, c in zip(occ, cut):
        if n < 0 or n > c:
            raise ValidationError(f"occupation {n} outside 0..{c}")
    amps = np.zeros(tuple(c + 1 for c in cut), dtype=complex)
    amps[occ] = 1.0
    return MultiModeState(cut, amps)


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Raw (unrenormalised) Fock amplitudes of ``|alpha>`` up to ``cutoff``."""
    n = np.arange(cutoff + 1)
    r = abs(alpha)
    if r == 0:
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = 1.0
        return out
    logmag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(logmag) * np.exp(1j * np.angle(alpha) * n)


def coherent_state(alpha: complex, cutoff: int | None = None) -> MultiModeState:
    """Single-mode coherent state, renormalised on the truncated space.

    The discarded Poisson tail is stored in ``truncation_weight``; a
    :class:`TruncationWarning` is emitted when it exceeds 1e-6.
    """
    if cutoff is None:
        cutoff = default_cutoff(alpha)
    cutoff = int(cutoff)
    if cutoff < 0:
        raise ValidationError("cutoff must be non-negative")
    raw = coherent_amplitudes(alpha, cutoff)
    kept = float(np.sum(np.abs(raw) ** 2))
    lost = max(0.0, 1.0 - kept)
    flags: tuple[str, ...] = ()
    if lost > LOSSY_WEIGHT:
        flags = ("truncation-lossy",)
        warnings.warn(
            f"coherent state alpha={alpha} loses weight {lost:.2e} at cutoff {cutoff}",
            TruncationWarning,
            stacklevel=2,
        )
    return MultiModeState((cutoff,), raw / math.sqrt(kept), lost, flags)


def tensor(states: Sequence[MultiModeState], size_budget: int = DEFAULT_SIZE_BUDGET) -> MultiModeState:
    """Tensor product, modes concatenated in order."""
    if not states:
        raise ValidationError("tensor of an empty list")
    cut = tuple(c for s in states for c in s.cutoffs)
    if len(cut) > MAX_MODES:
        raise ValidationError(f"at most {MAX_MODES} modes supported")
    size = int(np.prod([c + 1 for c in cut]))
    if size > size_budget:
        raise ValidationError(f"joint space of {size} amplitudes exceeds budget {size_budget}")
    amps = states[0].amplitudes
    for s in states[1:]:
        amps = np.multiply.outer(amps, s.amplitudes)
    lost = 1.0 - float(np.prod([1.0 - s.truncation_weight for s in states]))
    flags = tuple(dict.fromkeys(f for s in states for f in s.flags))
    return MultiModeState(cut, amps, lost, flags)


def overlap(a: MultiModeState, b: MultiModeState) -> complex:
    """Inner product ``<a|b>``."""
    if a.cutoffs != b.cutoffs:
        raise ValidationError(f"cutoff mismatch {a.cutoffs} vs {b.cutoffs}")
    return complex(np.vdot(a.vector, b.vector))


# -- operator application -----------------------------------------------------


def apply_single(op: np.ndarray, amps: np.ndarray, axis: int) -> np.ndarray:
    """Apply a single-mode operator to axis ``axis`` of an amplitude tensor."""
    out = np.tensordot(op, amps, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _check_mode(obj, mode: int) -> None:
    if not 0 <= mode < obj.num_modes:
        raise ValidationError(f"mode {mode} out of range for {obj.num_modes} modes")


def _reduced_matrix(obj: State, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on ``keep``, modes in the order given."""
    if isinstance(obj, MultiModeState):
        return _state_partial(obj, keep)
    return _density_partial(obj, keep)


def _state_partial(psi: MultiModeState, keep: Sequence[int]) -> np.ndarray:
    traced = [k for k in range(psi.num_modes) if k not in keep]
    amps = np.moveaxis(psi.amplitudes, list(keep) + traced, range(psi.num_modes))
    dk = int(np.prod([psi.dims[k] for k in keep]))
    m = amps.reshape(dk, -1)
    return m @ m.conj().T


def expectation(obj: State, observable: str, mode: int | Sequence[int] = 0) -> complex:
    """Expectation value of a named observable.

    Single-mode names: ``n``, ``x``, ``p``, ``x2``, ``p2``, ``xp`` (the last
    symmetrised). Two-mode names take a pair of modes: ``xx``, ``pp``,
    ``xp`` (``x`` on the first mode, ``p`` on the second).
    """
    modes = (mode,) if isinstance(mode, (int, np.integer)) else tuple(int(m) for m in mode)
    for m in modes:
        _check_mode(obj, m)
    if observable in ("xx", "pp") or (observable == "xp" and len(modes) == 2):
        if len(modes) != 2 or modes[0] == modes[1]:
            raise ValidationError(f"observable {observable!r} needs two distinct modes")
        ops = {"xx": ("x", "x"), "pp": ("p", "p"), "xp": ("x", "p")}[observable]
        c0, c1 = obj.cutoffs[modes[0]], obj.cutoffs[modes[1]]
        red = _reduced_matrix(obj, modes).reshape(c0 + 1, c1 + 1, c0 + 1, c1 + 1)
        a = _SINGLE_OPS[ops[0]](c0)
        b = _SINGLE_OPS[ops[1]](c1)
        return complex(np.einsum("ki,lj,ijkl->", a, b, red))
    if len(modes) != 1:
        raise ValidationError(f"observable {observable!r} takes a single mode")
    m = modes[0]
    cut = obj.cutoffs[m]
    if observable in _SINGLE_OPS:
        op = _SINGLE_OPS[observable](cut)
    elif observable == "x2":
        x = x_op(cut)
        op = x @ x
    elif observable == "p2":
        p = p_op(cut)
        op = p @ p
    elif observable == "xp":
        x, p = x_op(cut), p_op(cut)
        op = 0.5 * (x @ p + p @ x)
    else:
        raise ValidationError(f"unknown observable {observable!r}")
    red = _reduced_matrix(obj, (m,))
    return complex(np.trace(op @ red))


def quadrature_moments(rho: State, modes: Sequence[int] = (0, 1)) -> QuadratureMoments:
    """Means and symmetrised covariance of ``(x1, p1, x2, p2)``."""
    i, j = (int(m) for m in modes)
    if i == j:
        raise ValidationError("quadrature_moments needs two distinct modes")
    _check_mode(rho, i)
    _check_mode(rho, j)
    ci, cj = rho.cutoffs[i], rho.cutoffs[j]
    red = _reduced_matrix(rho, (i, j))
    t = red.reshape(ci + 1, cj + 1, ci + 1, cj + 1)
    ri = np.einsum("ajbj->ab", t)
    rj = np.einsum("iaib->ab", t)
    ops_i = [x_op(ci), p_op(ci)]
    ops_j = [x_op(cj), p_op(cj)]

    def single(ops, r):
        mean = np.array([np.trace(o @ r) for o in ops])
        sec = np.empty((2, 2), dtype=complex)
        for u in range(2):
            for v in range(2):
                sec[u, v] = np.trace(0.5 * (ops[u] @ ops[v] + ops[v] @ ops[u]) @ r)
        return mean, sec

    mi, si = single(ops_i, ri)
    mj, sj = single(ops_j, rj)
    cross = np.empty((2, 2), dtype=complex)
    for u in range(2):
        for v in range(2):
            cross[u, v] = np.einsum("ki,lj,ijkl->", ops_i[u], ops_j[v], t)
    means = np.concatenate([mi, mj])
    second = np.block([[si, cross], [cross.T, sj]])
    cov = second - np.outer(means, means)
    cov = np.real(0.5 * (cov + cov.T))
    return QuadratureMoments((i, j), np.real(means), cov)


def _density_partial(rho: DensityOperator, keep: Sequence[int]) -> np.ndarray:
    n = rho.num_modes
    letters = string.ascii_lowercase
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for k in range(n):
        if k not in keep:
            col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    red = np.einsum("".join(row) + "".join(col) + "->" + out, rho.tensor)
    d = int(np.prod([rho.dims[k] for k in keep]))
    return red.reshape(d, d)


def partial_trace(rho: State, keep: Sequence[int]) -> DensityOperator:
    """Reduced density operator on the modes in ``keep`` (kept in ascending order)."""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValidationError("keep must name at least one mode")
    for k in keep:
        _check_mode(rho, k)
    if len(keep) == rho.num_modes:
        return rho.to_density() if isinstance(rho, MultiModeState) else rho
    cut = tuple(rho.cutoffs[k] for k in keep)
    return DensityOperator(cut, _reduced_matrix(rho, keep))


def von_neumann_entropy(rho: State) -> float:
    """Entropy ``-Tr rho ln rho`` (natural log)."""
    if isinstance(rho, MultiModeState):
        rho = rho.to_density()
    lam = np.linalg.eigvalsh(0.5 * (rho.matrix + rho.matrix.conj().T))
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log(lam)))

"""Dense eigensolvers and a Schrodinger-equation integrator.

Everything here is small-matrix work (a few hundred rows at most), so the
routines wrap LAPACK through numpy and an adaptive Dormand-Prince integrator
through scipy, adding the input checks, deterministic ordering and residual
guarantees the physics modules rely on.
"""

from __future__ import annotations

from typing import Callable, Union

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NumericalError, ValidationError

DEFAULT_HERMITIAN_TOL = 1e-12
DEFAULT_ODE_TOL = 1e-10

MatrixLike = Union[np.ndarray, Callable[[float], np.ndarray]]


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def _norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def _fix_phases(vecs: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    vecs = vecs.copy()
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        scale = np.max(np.abs(col))
        idx = np.flatnonzero(np.abs(col) > tol * max(scale, 1.0))
        if idx.size:
            z = col[idx[0]]
            vecs[:, k] = col * (abs(z) / z)
    return vecs


def max_asymmetry(m: np.ndarray) -> float:
    """Largest entry of |m - m^dagger|."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return max_asymmetry(m) <= tol * max(_norm(m), 1.0)


def eig_hermitian(m, tol: float = DEFAULT_HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Args:
        m: square complex matrix, Hermitian to within ``tol`` relative to its norm.
        tol: relative Hermiticity tolerance.

    Returns:
        Ascending real eigenvalues and a matrix whose columns are the
        orthonormal eigenvectors, each with its first non-zero component made
        real positive.

    Raises:
        ValidationError: if ``m`` is not Hermitian within ``tol``.
        NumericalError: if the residual bound ``10*tol*||m||`` is violated.
    """
    m = _as_square(m)
    scale = max(_norm(m), 1.0)
    asym = max_asymmetry(m)
    if asym > tol * scale:
        raise ValidationError(
            f"matrix is not Hermitian: max |m - m^H| = {asym:.3e} "
            f"exceeds {tol:.1e} * {scale:.3e}"
        )
    herm = 0.5 * (m + m.conj().T)
    try:
        vals, vecs = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver did not converge: {exc}") from exc
    vecs = _fix_phases(vecs)
    _check_residual(m, vals, vecs, tol)
    return vals, vecs


def _sort_key(vals: np.ndarray, scale: float) -> np.ndarray:
    # ties in the real part are decided on the imaginary part
    re = np.round(vals.real / scale, 11)
    return np.lexsort((vals.imag, re))


def eig_general(m, tol: float = DEFAULT_HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a general square matrix.

    Eigenvalues are ordered by ascending real part, ties by ascending
    imaginary part. Right eigenvectors are unit-normalised with the same
    phase convention as :func:`eig_hermitian`.
    """
    m = _as_square(m)
    scale = max(_norm(m), 1.0)
    try:
        vals, vecs = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(vecs))):
        raise NumericalError("eigensolver returned non-finite values")
    order = _sort_key(vals, scale)
    vals = vals[order]
    vecs = vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    vecs = _fix_phases(vecs)
    _check_residual(m, vals, vecs, tol)
    return vals, vecs


def _check_residual(m, vals, vecs, tol) -> None:
    if m.size == 0:
        return
    scale = max(_norm(m), 1.0)
    resid = np.linalg.norm(m @ vecs - vecs * vals[np.newaxis, :], axis=0)
    worst = float(np.max(resid))
    # the solver is backward stable; anything beyond this means garbage
    if worst > 10 * max(tol, 1e-13) * scale * max(1, m.shape[0]):
        raise NumericalError(f"eigenpair residual {worst:.3e} exceeds bound for ||m|| = {scale:.3e}")


def integrate_schrodinger(
    h: MatrixLike,
    psi0,
    t_grid,
    tol: float = DEFAULT_ODE_TOL,
) -> np.ndarray:
    """Solve ``i dpsi/dt = h psi`` and sample the solution on ``t_grid``.

    ``h`` is either a constant matrix or a callable ``h(t)`` returning one.
    The integrator is an adaptive explicit Runge-Kutta (Dormand-Prince 8(5,3))
    with relative and absolute local error target ``tol``. ``psi0`` is the
    state at ``t_grid[0]``.

    Returns:
        Array of shape ``(len(t_grid), dim)``.

    Raises:
        ValidationError: for a non-increasing grid or mismatched shapes.
        NumericalError: if the step size underflows or ``h(t)`` turns
            non-finite; the message carries the time at which integration stalled.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise ValidationError("t_grid must be a non-empty 1-D array")
    if t_grid.size > 1 and np.any(np.diff(t_grid) <= 0):
        raise ValidationError("t_grid must be strictly increasing")
    psi0 = np.asarray(psi0, dtype=complex).ravel()

    if callable(h):
        hfun = h
        dim = np.asarray(h(float(t_grid[0]))).shape[0]
    else:
        hm = _as_square(h)
        dim = hm.shape[0]

        def hfun(_t, _hm=hm):
            return _hm

    if psi0.size != dim:
        raise ValidationError(f"psi0 has length {psi0.size}, matrix has dimension {dim}")
    if t_grid.size == 1:
        return psi0[np.newaxis, :].copy()

    def rhs(t, y):
        hm_t = np.asarray(hfun(t))
        if not np.all(np.isfinite(hm_t)):
            raise NumericalError(f"integration failed at t = {t:.6e}: Hamiltonian is not finite")
        return -1j * (hm_t @ y)

    sol = solve_ivp(
        rhs,
        (float(t_grid[0]), float(t_grid[-1])),
        psi0,
        method="DOP853",
        t_eval=t_grid,
        rtol=tol,
        atol=tol * 1e-2,
    )
    if sol.status != 0:
        t_fail = float(sol.t[-1]) if sol.t.size else float(t_grid[0])
        raise NumericalError(f"integration failed at t = {t_fail:.6e}: {sol.message}")
    return sol.y.T.copy()

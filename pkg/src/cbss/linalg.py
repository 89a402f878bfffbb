"""Dense complex matrix helpers: Hermitian eigendecomposition and friends.

All routines operate on 2-D ``numpy`` arrays of ``complex128``.  The
eigensolver is a cyclic-by-row complex Jacobi iteration, which is
unconditionally stable for conjugate-symmetric input and keeps the whole
stack dependency-free of external decomposition routines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    NonConvergenceError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

#: Relative off-diagonal magnitude at which a Jacobi sweep is considered done.
JACOBI_TOL = 1e-12
#: Hard cap on Jacobi sweeps; hitting it signals numerical pathology.
JACOBI_MAX_SWEEPS = 100
#: Eigenvalues below this fraction of the largest one count as non-positive.
POSDEF_RTOL = 1e-12


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _require_square(m: np.ndarray, name: str = "matrix") -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")


def matmul(a, b) -> np.ndarray:
    """Complex matrix product with an explicit shape check."""
    a = as_cmatrix(a, "a")
    b = as_cmatrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def conj_transpose(a) -> np.ndarray:
    """Conjugate transpose ``a^H``."""
    return as_cmatrix(a).conj().T


def frobenius_norm(m) -> float:
    """sqrt of the sum of squared entry moduli."""
    m = as_cmatrix(m)
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def is_hermitian(m, tol: float = 1e-10) -> bool:
    """True if the largest entry of ``|m - m^H|`` is at most ``tol``."""
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m - m.conj().T))) <= tol if m.size else True


def is_unitary(m, tol: float = 1e-10) -> bool:
    """True if ``m^H m`` is the identity to within ``tol`` (max entry)."""
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    d = m.shape[0]
    return float(np.max(np.abs(m.conj().T @ m - np.eye(d)))) <= tol


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition of a conjugate-symmetric matrix.

    ``values`` are real and sorted in non-increasing order; the columns of
    the unitary ``vectors`` are the matching eigenvectors, so that
    ``vectors @ diag(values) @ vectors^H`` reconstructs the input.
    """

    values: np.ndarray
    vectors: np.ndarray


def hermitian_eig(m, hermitian_tol: float = 1e-9) -> HermEig:
    """Eigendecomposition of a Hermitian matrix via cyclic complex Jacobi.

    Each rotation is a unitary 2x2 transform that zeroes one off-diagonal
    pair; sweeps repeat until the largest off-diagonal modulus drops below
    ``JACOBI_TOL`` times the Frobenius norm of the input.

    Raises
    ------
    DimensionError / ValueError
        For non-square or non-Hermitian (to ``hermitian_tol``) input.
    NonConvergenceError
        If ``JACOBI_MAX_SWEEPS`` sweeps do not converge.
    """
    a = as_cmatrix(m).copy()
    _require_square(a)
    d = a.shape[0]
    if not is_hermitian(a, hermitian_tol):
        raise ValueError("input matrix is not Hermitian to tolerance")

    if d == 1:
        return HermEig(values=np.array([a[0, 0].real]),
                       vectors=np.ones((1, 1), dtype=np.complex128))

    # Work with an exactly Hermitian copy so roundoff cannot accumulate
    # asymmetrically.
    a = 0.5 * (a + a.conj().T)
    v = np.eye(d, dtype=np.complex128)
    off_target = JACOBI_TOL * max(float(np.sqrt(np.sum(np.abs(a) ** 2))), np.finfo(float).tiny)

    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = _max_offdiag(a)
        if off <= off_target:
            break
        if sweep == JACOBI_MAX_SWEEPS:
            raise NonConvergenceError(
                f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps")
        for p in range(d - 1):
            for q in range(p + 1, d):
                beta = a[p, q]
                absb = abs(beta)
                if absb <= off_target / d:
                    continue
                phase = beta / absb
                alpha = a[p, p].real
                delta = a[q, q].real
                tau = (alpha - delta) / (2.0 * absb)
                sign = 1.0 if tau >= 0 else -1.0
                t = sign / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                gpq = -s * phase
                gqp = s * np.conj(phase)
                # columns p, q of a (right-multiply by the rotation)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + gqp * col_q
                a[:, q] = gpq * col_p + c * col_q
                # rows p, q (left-multiply by its conjugate transpose)
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + np.conj(gqp) * row_q
                a[q, :] = np.conj(gpq) * row_p + c * row_q
                # pin the eliminated pair and the (real) diagonal exactly
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                # accumulate eigenvectors
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = c * vcol_p + gqp * vcol_q
                v[:, q] = gpq * vcol_p + c * vcol_q

    values = np.diag(a).real.copy()
    order = np.argsort(-values, kind="stable")
    return HermEig(values=values[order], vectors=v[:, order])


def _max_offdiag(a: np.ndarray) -> float:
    d = a.shape[0]
    mask = ~np.eye(d, dtype=bool)
    return float(np.max(np.abs(a[mask]))) if d > 1 else 0.0


def herm_inv_sqrt(m) -> np.ndarray:
    """Conjugate-symmetric ``P`` with ``P m P = I`` for positive-definite ``m``.

    Raises ``NotPositiveDefiniteError`` when any eigenvalue is at or below
    ``POSDEF_RTOL`` times the largest eigenvalue.
    """
    eig = hermitian_eig(m)
    vals = eig.values
    top = vals[0]
    if top <= 0.0 or np.any(vals <= POSDEF_RTOL * top):
        raise NotPositiveDefiniteError(
            "matrix is not positive definite to tolerance "
            f"(eigenvalue range [{vals[-1]:.3e}, {top:.3e}])")
    p = (eig.vectors * (vals ** -0.5)) @ eig.vectors.conj().T
    # symmetrize to pin conjugate symmetry against roundoff
    return 0.5 * (p + p.conj().T)


def inverse(m) -> np.ndarray:
    """Matrix inverse via LU elimination with partial pivoting.

    Raises ``SingularMatrixError`` if a pivot falls below
    ``n * eps * max(1, max|m|)``.
    """
    a = as_cmatrix(m).copy()
    _require_square(a)
    n = a.shape[0]
    aug = np.hstack([a, np.eye(n, dtype=np.complex128)])
    tol = n * np.finfo(float).eps * max(1.0, float(np.max(np.abs(a))))
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(aug[col:, col])))
        pivot = aug[pivot_row, col]
        if abs(pivot) <= tol:
            raise SingularMatrixError(f"pivot {abs(pivot):.3e} below tolerance {tol:.3e}")
        if pivot_row != col:
            aug[[col, pivot_row]] = aug[[pivot_row, col]]
        aug[col] /= aug[col, col]
        others = np.arange(n) != col
        aug[others] -= np.outer(aug[others, col], aug[col])
    return aug[:, n:]

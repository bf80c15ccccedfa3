"""Dense complex matrix arithmetic and spectral routines for dimension <= 64.

The whole toolkit runs on one spectral backend: a cyclic Jacobi eigensolver
for Hermitian matrices.  All routines accept a single matrix or a batch with
one leading axis; batch elements are processed with identical arithmetic, so
results for a given matrix do not depend on what else sits in the batch
(apart from the shared sweep count, which only moves converged values at the
1e-16 level).
"""

from __future__ import annotations

import numpy as np

from .config import (
    HERMITICITY_TOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFF_TOL,
    RANK_TOL,
    psd_tol,
)
from .exceptions import ConsistencyError, ConvergenceError

MAX_DIM = 64
MAX_SV_DIM = 16  # cap on min(rows, cols) for singular value problems


def _as_batch(a) -> tuple[np.ndarray, bool]:
    """Return (batch copy, was_single).  Accepts (n,n) or (b,n,n) input."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 2:
        return a[None, :, :].copy(), True
    if a.ndim == 3:
        return a.copy(), False
    raise ValueError(f"expected a matrix or a batch of matrices, got ndim={a.ndim}")


def hermiticity_defect(a) -> float:
    """Largest elementwise |A - A^dag| over the batch."""
    a = np.asarray(a, dtype=np.complex128)
    return float(np.max(np.abs(a - np.conj(np.swapaxes(a, -1, -2)))))


def require_hermitian(a, tol: float = HERMITICITY_TOL) -> None:
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValueError(
            f"matrix is not Hermitian: max |A - A^dag| = {defect:.3e} exceeds {tol:.1e}"
        )


def jacobi_eigh(
    a,
    *,
    vectors: bool = False,
    off_tol: float = JACOBI_OFF_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
):
    """Cyclic Jacobi diagonalization of Hermitian matrices.

    Parameters
    ----------
    a : (n, n) or (batch, n, n) complex array, assumed Hermitian
    vectors : accumulate and return the diagonalizing unitaries as well

    Returns eigenvalues sorted non-increasing, and optionally unitaries whose
    k-th column is the eigenvector of the k-th returned eigenvalue.  Sweeps
    stop once every matrix in the batch has off-diagonal Frobenius norm below
    ``off_tol``; exceeding ``max_sweeps`` raises ConvergenceError.
    """
    a, single = _as_batch(a)
    batch, n, m = a.shape
    if n != m:
        raise ValueError(f"matrix is not square: {n}x{m}")
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the supported cap {MAX_DIM}")
    u = None
    if vectors:
        u = np.zeros_like(a)
        u[:, np.arange(n), np.arange(n)] = 1.0
    offmask = ~np.eye(n, dtype=bool)
    converged = False
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        if np.all(off < off_tol):
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                mag = np.abs(apq)
                if not np.any(mag > 0.0):
                    continue
                active = mag > 0.0
                safe_mag = np.where(active, mag, 1.0)
                tau = np.where(active, (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe_mag), 0.0)
                # hypot keeps sqrt(1 + tau^2) finite for huge tau
                t = np.where(tau == 0.0, 1.0, np.sign(tau) / (np.abs(tau) + np.hypot(1.0, tau)))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = np.where(active, t * c, 0.0)
                c = np.where(active, c, 1.0)
                phase = np.where(active, apq / safe_mag, 1.0)
                sp = s * phase
                spc = s * np.conj(phase)
                colp = a[:, :, p].copy()
                colq = a[:, :, q].copy()
                a[:, :, p] = c[:, None] * colp - spc[:, None] * colq
                a[:, :, q] = sp[:, None] * colp + c[:, None] * colq
                rowp = a[:, p, :].copy()
                rowq = a[:, q, :].copy()
                a[:, p, :] = c[:, None] * rowp - sp[:, None] * rowq
                a[:, q, :] = spc[:, None] * rowp + c[:, None] * rowq
                if vectors:
                    up = u[:, :, p].copy()
                    uq = u[:, :, q].copy()
                    u[:, :, p] = c[:, None] * up - spc[:, None] * uq
                    u[:, :, q] = sp[:, None] * up + c[:, None] * uq
    if not converged:
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps; "
            f"worst off-diagonal norm {float(np.max(off)):.3e}"
        )
    vals = a[:, np.arange(n), np.arange(n)].real.copy()
    order = np.argsort(-vals, axis=1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=1)
    if vectors:
        u = np.take_along_axis(u, order[:, None, :], axis=2)
        return (vals[0], u[0]) if single else (vals, u)
    return vals[0] if single else vals


def hermitian_eigenvalues(a, *, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix (or batch), sorted non-increasing.

    Rejects non-Hermitian input, and checks that the eigenvalue sum
    reproduces the trace to 1e-10 (a live sanity check on the sweeps).
    """
    require_hermitian(a, tol)
    a = np.asarray(a, dtype=np.complex128)
    vals = jacobi_eigh(a)
    trace = np.einsum("...ii->...", a).real
    defect = float(np.max(np.abs(np.sum(vals, axis=-1) - trace)))
    if defect > 1e-10:
        raise ConsistencyError(f"eigenvalue sum deviates from trace by {defect:.3e}")
    return vals


def singular_values(a) -> np.ndarray:
    """Singular values via the smaller Gram matrix, sorted non-increasing.

    Negative Gram eigenvalues (roundoff) are clamped to zero before the root.
    """
    a = np.asarray(a, dtype=np.complex128)
    single = a.ndim == 2
    if single:
        a = a[None]
    rows, cols = a.shape[-2:]
    if min(rows, cols) > MAX_SV_DIM:
        raise ValueError(f"min(rows, cols) = {min(rows, cols)} exceeds cap {MAX_SV_DIM}")
    ah = np.conj(np.swapaxes(a, -1, -2))
    gram = a @ ah if rows <= cols else ah @ a
    gram = (gram + np.conj(np.swapaxes(gram, -1, -2))) / 2.0
    vals = jacobi_eigh(gram)
    svs = np.sqrt(np.clip(vals, 0.0, None))
    return svs[0] if single else svs


def trace_norm(a) -> float | np.ndarray:
    """Sum of singular values."""
    svs = singular_values(a)
    out = np.sum(svs, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def psd_sqrt(a, tol: float | None = None) -> np.ndarray:
    """Hermitian PSD square root B with B @ B == A to 1e-9 elementwise.

    Eigenvalues below -tol are rejected; small negatives are clamped to zero.
    """
    if tol is None:
        tol = psd_tol()
    require_hermitian(a)
    a = np.asarray(a, dtype=np.complex128)
    single = a.ndim == 2
    vals, vecs = jacobi_eigh(a, vectors=True)
    worst = float(np.min(vals))
    if worst < -tol:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {worst:.3e} < -{tol:.1e}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    if single:
        return (vecs * root[None, :]) @ np.conj(vecs.T)
    return np.einsum("bik,bk,bjk->bij", vecs, root, np.conj(vecs))


def rank_with_tolerance(a, tol: float = RANK_TOL) -> int | np.ndarray:
    """Count of eigenvalues of a Hermitian matrix with |value| > tol."""
    vals = hermitian_eigenvalues(a)
    out = np.sum(np.abs(vals) > tol, axis=-1)
    return int(out) if np.ndim(out) == 0 else out


def permute_indices(a, perm) -> np.ndarray:
    """Apply the index-permutation map to an 8x8 three-qubit operator.

    ``perm`` is a permutation of (0..5): entry k says where binary matrix
    index k of the input lands in the output, positions 0-2 being the row
    (ket) qubits and 3-5 the column (bra) qubits.  The identity permutation
    returns the matrix unchanged; (3, 1, 2, 0, 4, 5) is the qubit-1 partial
    transpose; (0, 1, 4, 3, 2, 5) is the 2-3 reshuffle.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (8, 8):
        raise ValueError(f"expected an 8x8 matrix, got {a.shape}")
    perm = tuple(int(k) for k in perm)
    if sorted(perm) != [0, 1, 2, 3, 4, 5]:
        raise ValueError(f"not a permutation of the 6 binary indices: {perm}")
    tensor = a.reshape((2,) * 6)
    # output position perm[k] carries input axis k, so transpose by the inverse
    inverse = np.argsort(perm)
    return tensor.transpose(inverse).reshape(8, 8)


IDENTITY_PERM = (0, 1, 2, 3, 4, 5)
TRANSPOSE_1_PERM = (3, 1, 2, 0, 4, 5)
RESHUFFLE_23_PERM = (0, 1, 4, 3, 2, 5)


def compose_perms(pi, sigma) -> tuple:
    """Composition pi o sigma acting as (pi o sigma)[k] = pi[sigma[k]]."""
    return tuple(pi[sigma[k]] for k in range(len(sigma)))

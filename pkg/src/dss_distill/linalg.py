"""Dense complex linear algebra primitives.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is
a cyclic Jacobi iteration (compiled or numpy backend, see
:mod:`dss_distill.kernels`); the SVD is built on top of it.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import PreconditionError

TOL = 1e-9


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (descending) and unit eigenvectors stored as columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __iter__(self):
        return iter((self.values, self.vectors))


def as_matrix(m):
    """Coerce to a 2-D complex128 array, rejecting NaN/Inf."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise PreconditionError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise PreconditionError("matrix has non-finite entries")
    return m


def hermitian_eig(m, tol=TOL):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Raises :class:`PreconditionError` if ``m`` is not square or deviates from
    Hermitian by more than ``tol`` in max-norm. Within a degenerate cluster
    the returned eigenvectors are an arbitrary orthonormal basis.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise PreconditionError(f"hermitian_eig: not square (shape {m.shape})")
    dev = np.abs(m - m.conj().T).max() if m.size else 0.0
    if dev > tol:
        raise PreconditionError(f"hermitian_eig: not Hermitian (max |M - M^H| = {dev:.3e} > tol {tol:.1e})")
    h = 0.5 * (m + m.conj().T)
    w, v = kernels.jacobi_eigh(h)
    order = np.argsort(-w, kind="stable")
    return EigenSystem(w[order], v[:, order])


def _complete_columns(u, k):
    """Extend the orthonormal columns of ``u`` (r x j) to ``k`` columns."""
    r = u.shape[0]
    cols = [u[:, i] for i in range(u.shape[1])]
    for e in np.eye(r, dtype=np.complex128):
        if len(cols) == k:
            break
        x = e.copy()
        for _ in range(2):
            for c in cols:
                x -= np.vdot(c, x) * c
        nrm = np.linalg.norm(x)
        if nrm > 1e-6:
            cols.append(x / nrm)
    return np.column_stack(cols) if cols else np.zeros((r, 0), dtype=np.complex128)


def svd(m):
    """Thin SVD ``M = U diag(S) V^H`` with ``S`` descending.

    ``V`` comes from the eigenvectors of ``M^H M``; singular values are the
    column norms of ``M V`` (more accurate for tiny values than square roots
    of eigenvalues). Values below ``1e-10 * max(S)`` are set to zero and
    their left vectors completed to an orthonormal set.
    """
    m = as_matrix(m)
    r, c = m.shape
    k = min(r, c)
    if k == 0:
        z = np.zeros((0,))
        return np.zeros((r, 0), complex), z, np.zeros((c, 0), complex)
    if r < c:
        u, s, v = svd(m.conj().T)
        return v, s, u
    _, v = hermitian_eig(m.conj().T @ m, tol=np.inf)
    mv = m @ v
    s = np.linalg.norm(mv, axis=0)
    order = np.argsort(-s, kind="stable")
    s, v, mv = s[order], v[:, order], mv[:, order]
    cut = 1e-10 * s[0] if s[0] > 0 else 0.0
    keep = s > cut
    s = np.where(keep, s, 0.0)
    u = mv[:, keep] / s[keep]
    # re-orthonormalize recovered columns (guards against near-degenerate drift)
    if u.shape[1]:
        q, rr = np.linalg.qr(u)
        d = np.diag(rr)
        u = q * np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1), 1)
    u = _complete_columns(u, k)
    return u, s, v


def kron(a, b):
    """Kronecker product; entry ``(i*rB + k, j*cB + l) = A[i,j] * B[k,l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def max_norm(m):
    m = np.asarray(m)
    return float(np.abs(m).max()) if m.size else 0.0

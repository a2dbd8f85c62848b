"""Schmidt decomposition of pure bipartite vectors and local filtering."""

from dataclasses import dataclass

import numpy as np

from .errors import NotEntangledError, PreconditionError
from .linalg import TOL, svd

SCHMIDT_CUTOFF = 1e-8


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``psi = sum_i c_i |e_i>|f_i>``; ``basis_a``/``basis_b`` hold the vectors as columns."""

    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def schmidt_number(self):
        return len(self.coefficients)

    def vector(self):
        return sum(c * np.kron(self.basis_a[:, i], self.basis_b[:, i]) for i, c in enumerate(self.coefficients))


def schmidt_decompose(psi, dim_a, dim_b, cutoff=SCHMIDT_CUTOFF, tol=TOL):
    """Schmidt form of a unit vector, discarding coefficients below ``cutoff * max``.

    Within degenerate coefficients the local bases are an arbitrary choice.
    """
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if psi.size != dim_a * dim_b:
        raise PreconditionError(f"vector length {psi.size} != {dim_a}*{dim_b}")
    nrm = np.linalg.norm(psi)
    if nrm == 0.0:
        raise PreconditionError("zero vector has no Schmidt decomposition")
    if abs(nrm - 1.0) > max(tol, 1e-9):
        raise PreconditionError(f"vector not normalized (norm {nrm!r})")
    u, s, v = svd(psi.reshape(dim_a, dim_b))
    keep = s > cutoff * s[0]
    return SchmidtDecomposition(s[keep], u[:, keep], v[:, keep].conj())


def filter_to_maximally_entangled(sd):
    """Local filter on side A turning ``sd`` into the rank-m maximally entangled state.

    Returns ``(filter_a, success_probability)`` where
    ``filter_a = sum_i (c_min / c_i) |e_i><e_i|`` and the success probability
    is ``m * c_min**2``.
    """
    m = sd.schmidt_number
    if m < 2:
        raise NotEntangledError("Schmidt number 1: product state cannot be filtered to an entangled state")
    c = sd.coefficients
    cmin = c.min()
    e = sd.basis_a
    filt = (e * (cmin / c)) @ e.conj().T
    return filt, float(m * cmin * cmin)


def entanglement_entropy(sd):
    """Entropy of entanglement in ebits, ``-sum c_i^2 log2 c_i^2``."""
    p = sd.coefficients ** 2
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)) + 0.0)

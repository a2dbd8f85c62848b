"""Bipartite density matrices, tensor powers, product-subspace projections
and the partial transpose.

Index convention: the product basis vector ``|a>_A |b>_B`` sits at row
``a * dim_b + b``. Tensor powers are regrouped so that all A factors come
before all B factors, copy 1 most significant on each side; for two qubits
and two copies the A-side labels are ``0 = |00>``, ``1 = |01>``,
``2 = |10>``, ``3 = |11>`` (first copy first).
"""

import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatchError,
    NegativeEigenvalueError,
    NonFiniteError,
    NotHermitianError,
    PreconditionError,
    ResourceError,
    TraceError,
)
from .linalg import TOL, EigenSystem, hermitian_eig

DEFAULT_MAX_DIM = 4096


def max_dim():
    """Dimension cap for tensor powers; ``DSS_DISTILL_MAX_DIM`` overrides it."""
    env = os.environ.get("DSS_DISTILL_MAX_DIM")
    return int(env) if env else DEFAULT_MAX_DIM


@dataclass(frozen=True, eq=False)
class BipartiteDensity:
    """Validated density matrix on ``C^dim_a (x) C^dim_b``.

    Build instances with :func:`make_density`; the constructor itself does
    not validate.
    """

    matrix: np.ndarray
    dim_a: int
    dim_b: int
    tol: float = TOL
    _eig: EigenSystem | None = field(default=None, repr=False)

    @property
    def dim(self):
        return self.dim_a * self.dim_b

    @cached_property
    def eig(self):
        if self._eig is not None:
            return self._eig
        return hermitian_eig(self.matrix, tol=np.inf)

    @cached_property
    def rank(self):
        return int(np.sum(self.eig.values > self.tol))


@dataclass(frozen=True)
class WeightedPureState:
    weight: float
    vector: np.ndarray


@dataclass(frozen=True)
class ProductSubspace:
    """Span of ``{|a>_A |b>_B : a in subset_a, b in subset_b}``."""

    subset_a: tuple
    subset_b: tuple

    def __post_init__(self):
        for name in ("subset_a", "subset_b"):
            s = tuple(int(i) for i in getattr(self, name))
            if not s:
                raise PreconditionError(f"{name} is empty")
            if len(set(s)) != len(s):
                raise PreconditionError(f"{name} has duplicate indices: {s}")
            object.__setattr__(self, name, tuple(sorted(s)))

    @property
    def shape(self):
        return len(self.subset_a), len(self.subset_b)

    def indices(self, dim_b):
        """Global row indices of the subspace, in sorted (a-major) order."""
        return [a * dim_b + b for a in self.subset_a for b in self.subset_b]

    def check_bounds(self, dim_a, dim_b):
        if max(self.subset_a) >= dim_a or min(self.subset_a) < 0:
            raise PreconditionError(f"subset_a {self.subset_a} out of range for dim_a={dim_a}")
        if max(self.subset_b) >= dim_b or min(self.subset_b) < 0:
            raise PreconditionError(f"subset_b {self.subset_b} out of range for dim_b={dim_b}")


def make_density(matrix, dim_a, dim_b, tol=TOL):
    """Validate ``matrix`` as a bipartite density matrix.

    Each failed check raises its own :class:`ValidationError` subclass; the
    ``location`` attribute points at the offending entry where one exists.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    d = dim_a * dim_b
    if dim_a < 1 or dim_b < 1 or m.shape != (d, d):
        raise DimensionMismatchError(
            f"matrix shape {m.shape} does not match dims ({dim_a}, {dim_b}) -> ({d}, {d})"
        )
    bad = ~np.isfinite(m)
    if bad.any():
        loc = tuple(int(i) for i in np.argwhere(bad)[0])
        raise NonFiniteError(f"non-finite entry at row {loc[0]}, column {loc[1]}", loc)
    dev = np.abs(m - m.conj().T)
    if dev.max() > tol:
        loc = tuple(int(i) for i in np.unravel_index(np.argmax(dev), dev.shape))
        raise NotHermitianError(
            f"not Hermitian: |M - M^H| = {dev.max():.3e} at row {loc[0]}, column {loc[1]}", loc
        )
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise TraceError(f"trace is {tr!r}, expected 1 within {tol:.1e}")
    es = hermitian_eig(m, tol=tol)
    if es.values[-1] < -tol:
        raise NegativeEigenvalueError(f"negative eigenvalue {es.values[-1]:.3e} below -{tol:.1e}")
    return BipartiteDensity(m, dim_a, dim_b, tol, es)


def pure_decomposition(rho, tol=None):
    """Spectral decomposition restricted to eigenvalues above ``tol``.

    Eigenvectors within a degenerate eigenvalue are an arbitrary basis of
    that eigenspace.
    """
    tol = rho.tol if tol is None else tol
    w, v = rho.eig
    return [WeightedPureState(float(w[k]), v[:, k].copy()) for k in range(len(w)) if w[k] > tol]


def regroup_permutation(dim_a, dim_b, n):
    """Map interleaved ``|a1 b1 a2 b2 ...>`` indices to grouped ``|a1..an>|b1..bn>``.

    ``perm[i]`` is the grouped index of interleaved index ``i``.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    shape = (dim_a, dim_b) * n
    grouped_shape = (dim_a,) * n + (dim_b,) * n
    idx = np.arange((dim_a * dim_b) ** n).reshape(shape)
    # axis order that lists all A digits then all B digits
    axes = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    grouped = idx.transpose(axes).reshape(grouped_shape)
    perm = np.empty(idx.size, dtype=np.intp)
    perm[grouped.ravel()] = np.arange(idx.size)
    return perm


def tensor_power(rho, n, cap=None):
    """``rho^(x)n`` regrouped as a state of ``dim_a**n x dim_b**n``."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    cap = max_dim() if cap is None else cap
    d = rho.dim ** n
    if d > cap:
        raise ResourceError(f"tensor power dimension {d} exceeds cap {cap} (DSS_DISTILL_MAX_DIM)", d, cap)
    if n == 1:
        return rho
    out = rho.matrix
    for _ in range(n - 1):
        out = np.kron(out, rho.matrix)
    perm = regroup_permutation(rho.dim_a, rho.dim_b, n)
    inv = np.argsort(perm)
    out = out[np.ix_(inv, inv)]
    # eigen-data of a tensor power follows from the factor's
    w, v = rho.eig
    ws, vs = w, v
    for _ in range(n - 1):
        ws = np.kron(ws, w)
        vs = np.kron(vs, v)
    vs = vs[inv, :]
    order = np.argsort(-ws, kind="stable")
    es = EigenSystem(ws[order], vs[:, order])
    return BipartiteDensity(out, rho.dim_a ** n, rho.dim_b ** n, rho.tol, es)


def project_product_subspace(rho, sub):
    """Compressed block of ``(P_A x P_B) rho (P_A x P_B)`` and its trace."""
    sub.check_bounds(rho.dim_a, rho.dim_b)
    idx = sub.indices(rho.dim_b)
    block = rho.matrix[np.ix_(idx, idx)]
    return block, float(np.trace(block).real)


def apply_local_unitaries(rho, u_a, u_b):
    """``(U_A x U_B) rho (U_A x U_B)^H`` as a new density."""
    u = np.kron(u_a, u_b)
    m = u @ rho.matrix @ u.conj().T
    return make_density(0.5 * (m + m.conj().T), rho.dim_a, rho.dim_b, rho.tol)


def partial_transpose(rho):
    """Transpose on subsystem A: entry ``((a,b),(a',b'))`` -> ``((a',b),(a,b'))``."""
    da, db = rho.dim_a, rho.dim_b
    t = rho.matrix.reshape(da, db, da, db).transpose(2, 1, 0, 3)
    return t.reshape(da * db, da * db).copy()


def npt_check(rho, tol=None):
    """True iff the partial transpose has an eigenvalue below ``-tol``."""
    tol = rho.tol if tol is None else tol
    w, _ = hermitian_eig(partial_transpose(rho), tol=np.inf)
    return bool(w[-1] < -tol)

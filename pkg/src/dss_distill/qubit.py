"""Two-qubit (2x2) analysis: the spin-flip spectrum, inseparability,
quasi-separability and the finite-copy distillability classifier.

A 2x2 state with nonzero finite-copy distillable entanglement must be, up
to local unitaries, a two-term mixture

    lambda1 |Psi><Psi| + lambda2 |01><01|,   Psi = sin(t)|00> + cos(t)|11>

(the "even" form) or the same thing after flipping Bob's basis (the "odd"
form, Psi on |01>,|10> and the product term on |00> or |11>).
"""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PreconditionError
from .schmidt import schmidt_decompose
from .linalg import hermitian_eig, svd

PATTERN_TOL = 1e-8
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)
# eigenvalues of rho at or below this are treated as exact zeros when
# building the spin-flip overlap matrix
_EIG_FLOOR = 1e-14


class Verdict(str, Enum):
    PURE_ENTANGLED = "PureEntangled"
    DISTILLABLE_FORM = "DistillableForm"
    QUASI_SEPARABLE = "QuasiSeparable"
    SEPARABLE = "Separable"
    NOT_DISTILLABLE_OTHER = "NotDistillableOther"


@dataclass(frozen=True)
class WoottersSpectrum:
    """Spin-flip spectrum ``lambda'_1 >= ... >= lambda'_4 >= 0``."""

    lambda_prime: np.ndarray

    @property
    def concurrence(self):
        lp = self.lambda_prime
        return max(0.0, float(lp[0] - lp[1:].sum()))


@dataclass(frozen=True, eq=False)
class DistillableParameters:
    """``rho = (U_A x U_B)(lambda1 |Psi><Psi| + lambda2 |01><01|)(U_A x U_B)^H``.

    ``frame_a``/``frame_b`` hold the local basis vectors ``|0>, |1>`` as
    columns and always describe the even form; ``form`` records whether the
    input was written in the odd form (Bob's frame flipped).
    """

    theta: float
    lambda1: float
    lambda2: float
    form: str
    frame_a: np.ndarray
    frame_b: np.ndarray

    def canonical_state(self):
        s, c = np.sin(self.theta), np.cos(self.theta)
        psi = np.array([s, 0, 0, c], dtype=np.complex128)
        m = self.lambda1 * np.outer(psi, psi.conj())
        m[1, 1] += self.lambda2
        return m

    def reconstruct(self):
        u = np.kron(self.frame_a, self.frame_b)
        return u @ self.canonical_state() @ u.conj().T


@dataclass(frozen=True, eq=False)
class Classification:
    verdict: Verdict
    spectrum: WoottersSpectrum
    rank: int
    parameters: DistillableParameters | None = None
    proximity: float | None = None
    borderline: bool = False


class ProductSpan(NamedTuple):
    """Product vectors in a 2-D span; ``all_product`` flags a fully product span."""

    vectors: list
    all_product: bool


def _require_qubits(rho):
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise DomainError(f"2x2 state required, got {rho.dim_a}x{rho.dim_b}")


def spin_flip(m):
    """``(sigma_y x sigma_y) conj(m) (sigma_y x sigma_y)``."""
    return SPIN_FLIP @ np.conj(m) @ SPIN_FLIP


def wootters_spectrum(rho):
    """Square roots of the eigenvalues of ``rho * spin_flip(rho)``, descending.

    Computed as the singular values of ``tau_ij = x_i^T (sy x sy) x_j`` over
    the subnormalized eigenvectors ``x_i = sqrt(mu_i) v_i``; this has the
    same spectrum without squaring small quantities.
    """
    _require_qubits(rho)
    w, v = rho.eig
    keep = w > _EIG_FLOOR
    x = v[:, keep] * np.sqrt(w[keep])
    lp = np.zeros(4)
    if x.shape[1]:
        tau = x.T @ SPIN_FLIP @ x
        _, s, _ = svd(tau)
        lp[: len(s)] = s
    lp = np.sort(np.clip(lp, 0.0, None))[::-1]
    return WoottersSpectrum(lp)


def is_inseparable(rho, tol=None):
    tol = rho.tol if tol is None else tol
    lp = wootters_spectrum(rho).lambda_prime
    return bool(lp[0] - lp[1:].sum() > tol)


def is_qss(rho, tol=None):
    """Quasi-separability test for an inseparable 2x2 state.

    True when any of ``lambda'_2..4`` exceeds ``tol``: lowering the weight
    of the leading spin-flip component then reaches a separable state.
    """
    tol = rho.tol if tol is None else tol
    lp = wootters_spectrum(rho).lambda_prime
    if not lp[0] - lp[1:].sum() > tol:
        raise PreconditionError("is_qss applies to inseparable states only")
    return bool(np.any(lp[1:] > tol))


def product_vectors_in_span(v1, v2, tol=1e-10):
    """Product states ``alpha v1 + beta v2`` (up to phase) in a 2x2 span.

    Solves ``det(reshape(alpha v1 + beta v2)) = 0``, a homogeneous quadratic
    in ``(alpha, beta)``.
    """
    v1 = np.asarray(v1, dtype=np.complex128).ravel()
    v2 = np.asarray(v2, dtype=np.complex128).ravel()
    if v1.size != 4 or v2.size != 4:
        raise PreconditionError("vectors must live in C^2 x C^2")
    gram = np.array([[np.vdot(v1, v1), np.vdot(v1, v2)], [np.vdot(v2, v1), np.vdot(v2, v2)]])
    if np.abs(gram - np.eye(2)).max() > 1e-8:
        raise PreconditionError("v1, v2 must be orthonormal")
    m1, m2 = v1.reshape(2, 2), v2.reshape(2, 2)
    # det(alpha m1 + beta m2) = qa alpha^2 + qb alpha beta + qc beta^2
    qa = np.linalg.det(m1)
    qc = np.linalg.det(m2)
    qb = m1[0, 0] * m2[1, 1] + m2[0, 0] * m1[1, 1] - m1[0, 1] * m2[1, 0] - m2[0, 1] * m1[1, 0]
    scale = max(abs(qa), abs(qb), abs(qc))
    if scale <= tol:
        return ProductSpan([], True)
    # solve in the orientation with the larger leading coefficient:
    # lead t^2 + qb t + last = 0 for t = beta/alpha (or alpha/beta if swapped)
    swap = abs(qa) > abs(qc)
    lead, last = (qa, qc) if swap else (qc, qa)
    disc2 = qb * qb - 4 * lead * last
    roots = []  # (coefficient of the leading-side vector, coefficient of the other)
    if abs(lead) <= tol * scale:
        # both squared terms vanish: det = qb * alpha * beta, roots at v1 and v2
        roots = [(1.0, 0.0), (0.0, 1.0)]
    else:
        if abs(disc2) <= 1e-8 * scale * scale:
            # (near-)double root: the span is tangent to the product states and
            # the sqrt of a roundoff-sized discriminant would cost half the digits
            roots.append((-qb / (2 * lead), 1.0))
        if abs(disc2) > 1e-12 * scale * scale:
            disc = np.sqrt(disc2 + 0j)
            roots += [((-qb + disc) / (2 * lead), 1.0), ((-qb - disc) / (2 * lead), 1.0)]
    out = []
    for t, one in roots:
        x = t * v1 + one * v2 if swap else one * v1 + t * v2
        x = x / np.linalg.norm(x)
        if all(abs(np.vdot(y, x)) < 1 - 1e-9 for y in out):
            out.append(x)
    return ProductSpan(out, False)


def _product_factors(phi):
    u, s, v = svd(phi.reshape(2, 2))
    return u[:, 0], v[:, 0].conj()


def _fit_even_form(rho, phi, tol):
    """Try ``rho = lambda1 |Psi><Psi| + lambda2 |phi><phi|`` in the even form.

    Returns ``(parameters, proximity)`` or ``None``.
    """
    w, v = rho.eig
    pinv = (v[:, :2] / w[:2]) @ v[:, :2].conj().T
    q = float(np.real(np.vdot(phi, pinv @ phi)))
    if q <= 0:
        return None
    lam2 = 1.0 / q
    if not tol < lam2 < 1.0 - tol:
        return None
    rest = rho.matrix - lam2 * np.outer(phi, phi.conj())
    rw, rv = hermitian_eig(rest, tol=np.inf)
    psi = rv[:, 0]
    if schmidt_decompose(psi, 2, 2).schmidt_number < 2:
        return None

    a, b = _product_factors(phi)
    coeff = psi.reshape(2, 2)
    f_i = coeff.T @ a.conj()
    c_i = np.linalg.norm(f_i)
    if c_i <= tol:
        return None
    f_i = f_i / c_i
    a_perp = np.array([-np.conj(a[1]), np.conj(a[0])])
    c_j = np.vdot(np.kron(a_perp, b), psi)
    if abs(c_j) <= tol:
        return None
    f_j = b * (c_j / abs(c_j))
    theta = float(np.arctan2(c_i, abs(c_j)))
    frame_a = np.column_stack([a, a_perp])
    frame_b = np.column_stack([f_i, f_j])
    form = "odd" if abs(psi[1]) ** 2 + abs(psi[2]) ** 2 > abs(psi[0]) ** 2 + abs(psi[3]) ** 2 else "even"
    params = DistillableParameters(theta, 1.0 - lam2, lam2, form, frame_a, frame_b)
    unitarity = np.abs(frame_b.conj().T @ frame_b - np.eye(2)).max()
    proximity = float(max(np.abs(params.reconstruct() - rho.matrix).max(), unitarity))
    return params, proximity


def classify_finite_distillable(rho, tol=PATTERN_TOL):
    """Finite-copy distillability verdict for a 2x2 state.

    Order of tests: pure states; separable (spin-flip criterion); rank-2
    states matching the distillable two-term form; quasi-separable (more
    than one nonzero spin-flip value); everything else. A fit whose
    reconstruction error lies in ``(tol, 10 tol]`` is still reported as
    distillable but flagged ``borderline``.
    """
    _require_qubits(rho)
    spectrum = wootters_spectrum(rho)
    lp = spectrum.lambda_prime
    w, v = rho.eig
    rank = int(np.sum(w > tol))

    if rank == 1:
        sd = schmidt_decompose(v[:, 0], 2, 2)
        verdict = Verdict.PURE_ENTANGLED if sd.schmidt_number == 2 else Verdict.SEPARABLE
        return Classification(verdict, spectrum, rank)
    if not lp[0] - lp[1:].sum() > tol:
        return Classification(Verdict.SEPARABLE, spectrum, rank)
    if rank == 2:
        span = product_vectors_in_span(v[:, 0], v[:, 1])
        fits = [f for f in (_fit_even_form(rho, phi, tol) for phi in span.vectors) if f is not None]
        if fits:
            params, prox = min(fits, key=lambda f: f[1])
            if prox <= 10 * tol:
                return Classification(Verdict.DISTILLABLE_FORM, spectrum, rank, params, prox, prox > tol)
    if np.any(lp[1:] > tol):
        return Classification(Verdict.QUASI_SEPARABLE, spectrum, rank)
    return Classification(Verdict.NOT_DISTILLABLE_OTHER, spectrum, rank)

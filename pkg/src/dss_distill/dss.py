"""Distillable subspaces (DSS) of a bipartite density matrix.

A DSS is a product subspace ``span{|a>|b> : a in S_A, b in S_B}`` with
``|S_A| = |S_B| = m >= 2`` on which the state's (unnormalized) component is
a pure state of Schmidt number exactly ``m``. The search runs in the fixed
computational product basis of the input; rotate the state first if a
different local frame is wanted.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from . import kernels
from .errors import InconsistencyError, PreconditionError, ResourceError
from .linalg import hermitian_eig
from .schmidt import entanglement_entropy, schmidt_decompose
from .state import ProductSubspace, project_product_subspace

DEFAULT_BUDGET = 10**6
# probabilities are rounded to this many digits when used as sort keys, so
# values equal up to roundoff order lexicographically
_KEY_DIGITS = 12


@dataclass(frozen=True, eq=False)
class DSSRecord:
    subspace: ProductSubspace
    pure_state: np.ndarray
    schmidt_number: int
    probability: float

    @property
    def entropy(self):
        m = self.schmidt_number
        return entanglement_entropy(schmidt_decompose(self.pure_state, m, m))

    def key(self):
        return (-round(self.probability, _KEY_DIGITS), self.subspace.subset_a, self.subspace.subset_b)


@dataclass(frozen=True)
class ZeroPattern:
    """Zero rows/columns of the state inside the DSS block, in the Schmidt frame.

    Row/column positions are block-local (``i * m + j`` for ``|e_i f_j>``),
    i.e. indices in a product basis ordered with the DSS block first.
    """

    zero_rows: tuple
    zero_cols: tuple
    rank_bound: int
    rank: int


def _phase_fix(v):
    k = int(np.argmax(np.abs(v) > np.abs(v).max() * (1 - 1e-9)))
    return v * (abs(v[k]) / v[k])


def is_dss(rho, sub, tol=None):
    """Return a :class:`DSSRecord` if ``sub`` is a DSS of ``rho``, else ``None``."""
    tol = rho.tol if tol is None else tol
    m, mb = sub.shape
    if m != mb or m < 2:
        raise PreconditionError(f"DSS candidates need |S_A| = |S_B| >= 2, got {sub.shape}")
    block, p = project_product_subspace(rho, sub)
    if p <= tol:
        return None
    purity = float(np.sum(np.abs(block) ** 2)) / (p * p)
    if purity < 1.0 - tol:
        return None
    _, vecs = hermitian_eig(block, tol=np.inf)
    psi = _phase_fix(vecs[:, 0])
    if schmidt_decompose(psi, m, m).schmidt_number != m:
        return None
    return DSSRecord(sub, psi, m, p)


def enumeration_count(dim_a, dim_b, m_min, m_max):
    return sum(comb(dim_a, m) * comb(dim_b, m) for m in range(m_min, m_max + 1))


def _scan(rho, subs_a, subs_b, jobs):
    if jobs <= 1 or len(subs_a) < 2 * jobs:
        return kernels.block_scan(rho.matrix, rho.dim_b, subs_a, subs_b)
    chunks = np.array_split(subs_a, jobs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(lambda c: kernels.block_scan(rho.matrix, rho.dim_b, c, subs_b), chunks))
    return np.vstack([p for p, _ in parts]), np.vstack([f for _, f in parts])


def find_dss(rho, m_min=2, m_max=None, tol=None, budget=DEFAULT_BUDGET, jobs=1):
    """All DSS with ``m_min <= m <= m_max``, by exhaustive subset enumeration.

    A compiled/numpy block scan prefilters on probability and purity; each
    survivor is confirmed by :func:`is_dss`. Results are sorted by
    probability (descending) then lexicographically by subsets, independent
    of ``jobs``.
    """
    tol = rho.tol if tol is None else tol
    top = min(rho.dim_a, rho.dim_b)
    if m_max is None:
        m_max = top
        if top < 2:
            return []
    if not 2 <= m_min <= m_max <= top:
        raise PreconditionError(f"need 2 <= m_min <= m_max <= {top}, got m_min={m_min}, m_max={m_max}")
    count = enumeration_count(rho.dim_a, rho.dim_b, m_min, m_max)
    if count > budget:
        raise ResourceError(f"DSS search needs {count} subset pairs, budget is {budget}", count, budget)

    hits = []
    for m in range(m_min, m_max + 1):
        subs_a = np.array(list(itertools.combinations(range(rho.dim_a), m)), dtype=np.int_)
        subs_b = np.array(list(itertools.combinations(range(rho.dim_b), m)), dtype=np.int_)
        prob, frob = _scan(rho, subs_a, subs_b, jobs)
        cand = (prob > tol) & (frob >= (1.0 - tol) * prob * prob)
        for ia, ib in zip(*np.nonzero(cand)):
            rec = is_dss(rho, ProductSubspace(subs_a[ia], subs_b[ib]), tol)
            if rec is not None:
                hits.append(rec)
    hits.sort(key=DSSRecord.key)
    return hits


def combine_dss(rho, r1, r2, tol=None):
    """DSS on the union of two records' subsets, if that union is itself a DSS."""
    sa = sorted(set(r1.subspace.subset_a) | set(r2.subspace.subset_a))
    sb = sorted(set(r1.subspace.subset_b) | set(r2.subspace.subset_b))
    if len(sa) != len(sb):
        return None
    return is_dss(rho, ProductSubspace(sa, sb), tol)


def _grow(rho, seed, pool, tol):
    current = seed
    changed = True
    while changed:
        changed = False
        for other in pool:
            if set(other.subspace.subset_a) <= set(current.subspace.subset_a) and set(
                other.subspace.subset_b
            ) <= set(current.subspace.subset_b):
                continue
            merged = combine_dss(rho, current, other, tol)
            if merged is not None and merged.schmidt_number > current.schmidt_number:
                current = merged
                changed = True
    return current


def maximal_dss_partition(rho, tol=None, budget=DEFAULT_BUDGET, jobs=1, m_max=None):
    """Pairwise-disjoint DSS maximizing ``sum probability * entropy`` greedily.

    Every DSS found is first grown through :func:`combine_dss` (partners in
    probability order) to the largest Schmidt number reachable. Candidates
    are then taken in order of ``probability * entropy`` (ties: higher
    probability, larger m, lexicographic subsets) whenever their A- and
    B-subsets are disjoint from everything already taken.
    """
    records = find_dss(rho, tol=tol, budget=budget, jobs=jobs, m_max=m_max)
    if not records:
        return []
    candidates = {}
    for rec in records:
        candidates[(rec.subspace.subset_a, rec.subspace.subset_b)] = rec
    for rec in records:
        grown = _grow(rho, rec, records, tol)
        candidates[(grown.subspace.subset_a, grown.subspace.subset_b)] = grown

    def score(r):
        return (
            -round(r.probability * r.entropy, _KEY_DIGITS),
            -round(r.probability, _KEY_DIGITS),
            -r.schmidt_number,
            r.subspace.subset_a,
            r.subspace.subset_b,
        )

    used_a, used_b, chosen = set(), set(), []
    for rec in sorted(candidates.values(), key=score):
        sa, sb = set(rec.subspace.subset_a), set(rec.subspace.subset_b)
        if sa & used_a or sb & used_b:
            continue
        chosen.append(rec)
        used_a |= sa
        used_b |= sb
    return chosen


def theorem2_check(rho, record, zero_tol=1e-8):
    """Check the zero-row/column pattern and rank bound implied by a DSS.

    In the local frame where the DSS block uses the pure state's Schmidt
    vectors, the ``m*m - m`` off-diagonal product rows ``|e_i f_j>``
    (``i != j``) of the whole state must vanish, and
    ``rank(rho) <= dim_a * dim_b - m*m + 1``. Raises
    :class:`InconsistencyError` on violation.
    """
    m = record.schmidt_number
    sa, sb = record.subspace.subset_a, record.subspace.subset_b
    sd = schmidt_decompose(record.pure_state, m, m)
    if sd.schmidt_number != m:
        raise InconsistencyError(f"record pure state has Schmidt number {sd.schmidt_number}, expected {m}")
    u_a = np.eye(rho.dim_a, dtype=np.complex128)
    u_a[np.ix_(sa, sa)] = sd.basis_a
    u_b = np.eye(rho.dim_b, dtype=np.complex128)
    u_b[np.ix_(sb, sb)] = sd.basis_b
    u = np.kron(u_a, u_b)
    rotated = u.conj().T @ rho.matrix @ u

    rows = [a * rho.dim_b + b for a in sa for b in sb]
    row_max = np.abs(rotated[rows, :]).max(axis=1)
    col_max = np.abs(rotated[:, rows]).max(axis=0)
    zero_rows = tuple(int(k) for k in np.nonzero(row_max <= zero_tol)[0])
    zero_cols = tuple(int(k) for k in np.nonzero(col_max <= zero_tol)[0])
    need = m * m - m
    if len(zero_rows) < need or len(zero_cols) < need:
        raise InconsistencyError(
            f"DSS {sa}x{sb}: found {len(zero_rows)} zero rows / {len(zero_cols)} zero columns, need {need}"
        )
    bound = rho.dim - m * m + 1
    if rho.rank > bound:
        raise InconsistencyError(f"rank {rho.rank} exceeds bound {bound} for a DSS of Schmidt number {m}")
    return ZeroPattern(zero_rows, zero_cols, bound, rho.rank)

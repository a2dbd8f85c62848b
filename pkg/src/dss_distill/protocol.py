"""One-way projective distillation protocols built from a DSS partition.

Alice measures with a partition of her basis into index subsets, one per
DSS plus a remainder, and sends the outcome index to Bob, who measures with
the matching partition of his basis. Matched outcomes on a DSS leave a pure
entangled state; everything else is discarded.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .dss import DEFAULT_BUDGET, is_dss, maximal_dss_partition
from .errors import PreconditionError
from .schmidt import entanglement_entropy, filter_to_maximally_entangled, schmidt_decompose
from .state import ProductSubspace, make_density, project_product_subspace, tensor_power

CROSS_LABEL = "cross"


@dataclass(frozen=True)
class LocalProjectorPartition:
    """Projectors ``P_k = sum_{i in subsets[k]} |i><i|`` summing to the identity."""

    subsets: tuple
    labels: tuple
    dim: int

    def __post_init__(self):
        seen = [i for s in self.subsets for i in s]
        if len(seen) != len(set(seen)):
            raise PreconditionError("projector subsets overlap")
        if sorted(seen) != list(range(self.dim)):
            raise PreconditionError(f"projector subsets do not cover range({self.dim})")
        if len(self.labels) != len(self.subsets):
            raise PreconditionError("one label per projector required")

    def projectors(self):
        out = []
        for s in self.subsets:
            p = np.zeros((self.dim, self.dim))
            p[list(s), list(s)] = 1.0
            out.append(p)
        return out


@dataclass(frozen=True)
class Protocol:
    """Serializable protocol description with a single A -> B message."""

    party_a: LocalProjectorPartition
    party_b: LocalProjectorPartition
    targets: dict = field(default_factory=dict)  # label -> Schmidt number of the DSS
    messages: tuple = (("A", "B", "outcome-index"),)

    def to_dict(self):
        return {
            "party_a": [list(s) for s in self.party_a.subsets],
            "party_b": [list(s) for s in self.party_b.subsets],
            "message": "outcome-index",
            "labels": list(self.party_a.labels),
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d, dim_a, dim_b=None):
        dim_b = dim_a if dim_b is None else dim_b
        labels = tuple(d["labels"])
        return cls(
            LocalProjectorPartition(tuple(tuple(s) for s in d["party_a"]), labels, dim_a),
            LocalProjectorPartition(tuple(tuple(s) for s in d["party_b"]), labels, dim_b),
        )


@dataclass(frozen=True, eq=False)
class ProtocolOutcome:
    label: str
    probability: float
    post_state: object = None  # BipartiteDensity of the retained block, or None
    pure_state: np.ndarray | None = None
    purity: float = 0.0
    schmidt_number: int = 0
    distilled_entropy: float = 0.0
    filtered_ebits: float = 0.0
    fidelity_to_target: float = 0.0

    @property
    def is_dss(self):
        return self.pure_state is not None


@dataclass(frozen=True, eq=False)
class YieldReport:
    total_ebits: float
    filtered_total_ebits: float
    outcomes: list
    protocol: Protocol
    partition: list


def synthesize_projectors(partition, local_dim, local_dim_b=None):
    """Local projector partitions for both parties from disjoint DSS records.

    One projector per DSS (labels ``P1``, ``P2``, ...), then one remainder
    projector over the unused indices if any remain. The remainder label
    is always the last one.
    """
    dim_b = local_dim if local_dim_b is None else local_dim_b
    used_a, used_b = set(), set()
    subs_a, subs_b = [], []
    for rec in partition:
        sa, sb = set(rec.subspace.subset_a), set(rec.subspace.subset_b)
        if sa & used_a or sb & used_b:
            raise PreconditionError("DSS records overlap; a projector partition needs disjoint subsets")
        used_a |= sa
        used_b |= sb
        subs_a.append(tuple(sorted(sa)))
        subs_b.append(tuple(sorted(sb)))
    rest_a = tuple(i for i in range(local_dim) if i not in used_a)
    rest_b = tuple(i for i in range(dim_b) if i not in used_b)
    if rest_a or rest_b:
        # both sides keep the same number of outcomes; an empty side projector is allowed
        subs_a.append(rest_a)
        subs_b.append(rest_b)
    labels = tuple(f"P{k + 1}" for k in range(len(subs_a)))
    targets = {labels[k]: rec.schmidt_number for k, rec in enumerate(partition)}
    part_a = LocalProjectorPartition(tuple(subs_a), labels, local_dim)
    part_b = LocalProjectorPartition(tuple(subs_b), labels, dim_b)
    return Protocol(part_a, part_b, targets)


def _filtered_fidelity(block, psi, m):
    """Fidelity of the filtered, renormalized block with ``sum_i |e_i f_i>/sqrt(m)``."""
    sd = schmidt_decompose(psi, m, m)
    if sd.schmidt_number != m:
        return 0.0, 0.0
    filt, success = filter_to_maximally_entangled(sd)
    f = np.kron(filt, np.eye(m))
    out = f @ block @ f.conj().T
    out /= np.trace(out).real
    target = sum(np.kron(sd.basis_a[:, i], sd.basis_b[:, i]) for i in range(m)) / np.sqrt(m)
    return float(np.real(np.vdot(target, out @ target))), success


def apply_protocol(rho, part_a, part_b, tol=None):
    """Run the one-way protocol on ``rho``.

    Returns one outcome per matched label pair, in label order, followed by
    an aggregated ``"cross"`` outcome for all mismatched pairs ``(k, k')``.
    """
    tol = rho.tol if tol is None else tol
    if part_a.dim != rho.dim_a or part_b.dim != rho.dim_b:
        raise PreconditionError("projector partitions do not match the state's dimensions")
    if part_a.labels != part_b.labels:
        raise PreconditionError("both parties need the same outcome labels")
    diag = rho.matrix.diagonal().real.reshape(rho.dim_a, rho.dim_b)
    outcomes = []
    for label, sa, sb in zip(part_a.labels, part_a.subsets, part_b.subsets):
        if not sa or not sb:
            outcomes.append(ProtocolOutcome(label, 0.0))
            continue
        sub = ProductSubspace(sa, sb)
        block, p = project_product_subspace(rho, sub)
        if p <= tol:
            outcomes.append(ProtocolOutcome(label, p))
            continue
        sigma = block / p
        purity = float(np.sum(np.abs(sigma) ** 2))
        post = make_density(0.5 * (sigma + sigma.conj().T), len(sa), len(sb), tol=max(tol, 1e-8))
        rec = is_dss(rho, sub, tol) if len(sa) == len(sb) >= 2 else None
        if rec is None:
            outcomes.append(ProtocolOutcome(label, p, post, purity=purity))
            continue
        m = rec.schmidt_number
        sd = schmidt_decompose(rec.pure_state, m, m)
        fid, success = _filtered_fidelity(sigma, rec.pure_state, m)
        outcomes.append(
            ProtocolOutcome(
                label,
                p,
                post,
                pure_state=rec.pure_state,
                purity=purity,
                schmidt_number=m,
                distilled_entropy=entanglement_entropy(sd),
                filtered_ebits=success * float(np.log2(m)),
                fidelity_to_target=fid,
            )
        )
    if len(part_a.labels) > 1:
        cross = 0.0
        for k, sa in enumerate(part_a.subsets):
            for k2, sb in enumerate(part_b.subsets):
                if k != k2 and sa and sb:
                    cross += float(diag[np.ix_(sa, sb)].sum())
        outcomes.append(ProtocolOutcome(CROSS_LABEL, cross))
    return outcomes


def finite_copy_yield(rho, n, tol=None, budget=None, jobs=1):
    """Greedy-partition protocol on ``rho^(x)n`` and its ebit yield.

    ``total_ebits`` weights each DSS outcome by its pure state's entropy;
    ``filtered_total_ebits`` instead counts ``m * c_min**2 * log2(m)`` per
    outcome (deterministic conversion to a maximally entangled state).
    Both are lower bounds on the finite-copy distillable entanglement.
    """
    big = tensor_power(rho, n)
    partition = maximal_dss_partition(big, tol=tol, budget=budget or DEFAULT_BUDGET, jobs=jobs)
    proto = synthesize_projectors(partition, big.dim_a, big.dim_b)
    outcomes = apply_protocol(big, proto.party_a, proto.party_b, tol)
    total = sum(o.probability * o.distilled_entropy for o in outcomes)
    filtered = sum(o.probability * o.filtered_ebits for o in outcomes)
    return YieldReport(float(total), float(filtered), outcomes, proto, partition)


import numpy as np
import pytest

from conftest import ref_matrix
from dss_distill import (
    InconsistencyError,
    PreconditionError,
    ProductSubspace,
    ResourceError,
    apply_local_unitaries,
    combine_dss,
    find_dss,
    is_dss,
    make_density,
    maximal_dss_partition,
    project_product_subspace,
    schmidt_decompose,
    tensor_power,
    theorem2_check,
)
from dss_distill.dss import DSSRecord, enumeration_count
from golden import golden_suite
from oracles import brute_force_dss, random_density, random_unitary


@pytest.fixture(scope="module")
def ref_2():
    return tensor_power(make_density(ref_matrix(), 2, 2), 2)


@pytest.fixture(scope="module")
def ref_3():
    return tensor_power(make_density(ref_matrix(), 2, 2), 3)


def _subsets(recs):
    return [(r.subspace.subset_a, r.subspace.subset_b) for r in recs]


def test_is_dss_reference_squared(ref_2):
    rec = is_dss(ref_2, ProductSubspace([1, 2], [1, 2]))
    assert rec is not None
    assert rec.probability == pytest.approx(1 / 8, abs=1e-12)
    assert rec.schmidt_number == 2
    target = np.array([1, 0, 0, 1]) / np.sqrt(2)  # block order |11>,|12>,|21>,|22>
    assert abs(abs(np.vdot(target, rec.pure_state)) - 1) < 1e-12
    assert is_dss(ref_2, ProductSubspace([0, 3], [0, 3])) is None


def test_is_dss_product_state_never_hits():
    v = np.zeros(9)
    v[4] = 1
    rho = make_density(np.outer(v, v), 3, 3)
    for sa in [(0, 1), (1, 2), (0, 2)]:
        for sb in [(0, 1), (1, 2), (0, 2)]:
            assert is_dss(rho, ProductSubspace(sa, sb)) is None


def test_is_dss_size_mismatch(ref_2):
    with pytest.raises(PreconditionError):
        is_dss(ref_2, ProductSubspace([1, 2], [1, 2, 3]))
    with pytest.raises(PreconditionError):
        is_dss(ref_2, ProductSubspace([1], [1]))


def test_find_dss_reference_squared_matches_oracle(ref_2):
    recs = find_dss(ref_2, 2, 2)
    assert _subsets(recs) == [((1, 2), (1, 2))]
    ref = brute_force_dss(ref_2.matrix, 4, 4)
    assert [(r[0], r[1]) for r in ref if r[2] == 2] == _subsets(recs)


def test_find_dss_reference_cubed(ref_3):
    recs = find_dss(ref_3)
    found = {(r.subspace.subset_a, r.subspace.subset_b): r.probability for r in recs}
    expected = {
        ((1, 2), (1, 2)): 1 / 32,
        ((1, 2), (5, 6)): 1 / 16,
        ((5, 6), (5, 6)): 1 / 32,
        ((3, 4), (3, 4)): 1 / 32,
        ((1, 2, 4), (1, 2, 4)): 3 / 64,
        ((3, 5, 6), (3, 5, 6)): 3 / 64,
    }
    for key, p in expected.items():
        assert found[key] == pytest.approx(p, abs=1e-12)
    probs = [r.probability for r in recs]
    assert probs == sorted(probs, reverse=True)


def test_find_dss_records_are_verified(ref_3):
    for rec in find_dss(ref_3):
        block, p = project_product_subspace(ref_3, rec.subspace)
        assert np.abs(block - p * np.outer(rec.pure_state, rec.pure_state.conj())).max() < 1e-9
        assert np.sum(np.abs(block) ** 2) / p**2 >= 1 - 1e-9
        m = rec.schmidt_number
        assert schmidt_decompose(rec.pure_state, m, m).schmidt_number == m == len(rec.subspace.subset_a)


def test_find_dss_argument_checks(ref_2):
    with pytest.raises(PreconditionError):
        find_dss(ref_2, 1, 2)
    with pytest.raises(PreconditionError):
        find_dss(ref_2, 3, 2)
    with pytest.raises(PreconditionError):
        find_dss(ref_2, 2, 5)


def test_find_dss_budget(ref_3):
    need = enumeration_count(8, 8, 2, 8)
    with pytest.raises(ResourceError) as e:
        find_dss(ref_3, budget=need - 1)
    assert e.value.required == need
    assert len(find_dss(ref_3, budget=need)) == 14


def test_find_dss_independent_of_jobs(ref_3):
    a = find_dss(ref_3, jobs=1)
    b = find_dss(ref_3, jobs=4)
    assert [r.key() for r in a] == [r.key() for r in b]


@pytest.mark.parametrize("name, m, da, db", golden_suite(), ids=lambda x: x if isinstance(x, str) else "")
def test_oracle_equivalence_golden(name, m, da, db):
    rho = make_density(m, da, db)
    ours = [(r.subspace.subset_a, r.subspace.subset_b, r.schmidt_number) for r in find_dss(rho)]
    ref = [(r[0], r[1], r[2]) for r in brute_force_dss(m, da, db)]
    assert ours == ref


def test_golden_suite_has_planted_hits():
    hits = {name: brute_force_dss(m, da, db) for name, m, da, db in golden_suite() if name.startswith("planted")}
    assert ((0, 2), (1, 2), 2) in [(r[0], r[1], r[2]) for r in hits["planted-3x3"]]
    assert ((0, 3, 5, 7), (1, 2, 4, 6), 4) in [(r[0], r[1], r[2]) for r in hits["planted-8x8"]]


def test_oracle_equivalence_random_small(rng):
    for k in range(60):
        da, db = [(2, 2), (2, 3), (3, 3), (2, 4)][k % 4]
        rank = 1 + k % 3
        m = random_density(rng, da * db, rank)
        rho = make_density(m, da, db)
        ours = [(r.subspace.subset_a, r.subspace.subset_b) for r in find_dss(rho)]
        assert ours == [(r[0], r[1]) for r in brute_force_dss(m, da, db)]


def test_combine_dss(ref_3):
    recs = {(r.subspace.subset_a, r.subspace.subset_b): r for r in find_dss(ref_3)}
    r12 = recs[((1, 2), (1, 2))]
    merged = combine_dss(ref_3, r12, recs[((1, 4), (1, 4))])
    assert merged is not None
    assert merged.subspace.subset_a == (1, 2, 4) and merged.schmidt_number == 3
    assert merged.probability == pytest.approx(3 / 64, abs=1e-12)
    # union block of two DSS that does not stay pure
    assert combine_dss(ref_3, r12, recs[((5, 6), (5, 6))]) is None
    _, p = project_product_subspace(ref_3, ProductSubspace([1, 2, 5, 6], [1, 2, 5, 6]))
    assert p > 0
    same = combine_dss(ref_3, r12, r12)
    assert same.subspace == r12.subspace and same.probability == pytest.approx(r12.probability)


def test_maximal_partition(ref_2, ref_3):
    part3 = maximal_dss_partition(ref_3)
    assert _subsets(part3) == [((1, 2, 4), (1, 2, 4)), ((3, 5, 6), (3, 5, 6))]
    for r in part3:
        assert r.probability == pytest.approx(3 / 64, abs=1e-12)
        assert r.entropy == pytest.approx(np.log2(3), abs=1e-9)
    part2 = maximal_dss_partition(ref_2)
    assert _subsets(part2) == [((1, 2), (1, 2))]
    assert part2[0].probability == pytest.approx(1 / 8)
    assert maximal_dss_partition(make_density(np.eye(4) / 4, 2, 2)) == []


def test_partition_is_disjoint_on_golden():
    for name, m, da, db in golden_suite():
        part = maximal_dss_partition(make_density(m, da, db))
        seen_a, seen_b = set(), set()
        for r in part:
            assert not seen_a & set(r.subspace.subset_a)
            assert not seen_b & set(r.subspace.subset_b)
            seen_a |= set(r.subspace.subset_a)
            seen_b |= set(r.subspace.subset_b)


def test_theorem2_examples(ref_2, ref_3):
    pat = theorem2_check(ref_2, find_dss(ref_2)[0])
    assert len(pat.zero_rows) >= 2 and len(pat.zero_cols) >= 2
    assert pat.rank == 4 and pat.rank_bound == 13
    for rec in maximal_dss_partition(ref_3):
        pat = theorem2_check(ref_3, rec)
        assert pat.rank == 8 and pat.rank_bound == 56
        assert len(pat.zero_rows) >= 6
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = make_density(np.outer(bell, bell), 2, 2)
    pat = theorem2_check(rho, find_dss(rho)[0])
    assert pat.rank == 1 == pat.rank_bound


def test_theorem2_rejects_false_record(ref_2):
    fake = DSSRecord(ProductSubspace([0, 3], [0, 3]), np.array([1, 0, 0, 1]) / np.sqrt(2), 2, 0.25)
    with pytest.raises(InconsistencyError):
        theorem2_check(ref_2, fake)


@pytest.mark.slow
def test_theorem2_on_random_rank_deficient(rng):
    for k in range(200):
        da, db = [(2, 2), (2, 3), (3, 3)][k % 3]
        m = random_density(rng, da * db, 1 + k % 2)
        rho = make_density(m, da, db)
        for rec in find_dss(rho):
            theorem2_check(rho, rec)


def test_no_false_positive_on_separable(rng):
    for k in range(300):
        terms = 1 + k % 4
        m = np.zeros((4, 4), dtype=np.complex128)
        for w in rng.dirichlet(np.ones(terms)):
            a = random_unitary(rng, 2)[:, 0]
            b = random_unitary(rng, 2)[:, 0]
            v = np.kron(a, b)
            m += w * np.outer(v, v.conj())
        rho = make_density(m, 2, 2)
        assert find_dss(rho) == []
        if k % 3 == 0:
            assert find_dss(tensor_power(rho, 2)) == []


def test_full_rank_has_no_dss(rng):
    for _ in range(50):
        rho = make_density(random_density(rng, 9), 3, 3)
        assert rho.rank > rho.dim - 3
        assert find_dss(rho) == []


def test_frame_covariance(ref_3, rng):
    base = [r.probability for r in find_dss(ref_3)]
    for _ in range(5):
        ua, ub = random_unitary(rng, 8), random_unitary(rng, 8)
        back = apply_local_unitaries(apply_local_unitaries(ref_3, ua, ub), ua.conj().T, ub.conj().T)
        assert [r.probability for r in find_dss(back)] == pytest.approx(base, abs=1e-9)

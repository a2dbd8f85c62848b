import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dss_distill import (
    NotEntangledError,
    PreconditionError,
    entanglement_entropy,
    filter_to_maximally_entangled,
    schmidt_decompose,
)
from oracles import random_unitary


def _ket(d, pairs, db=None):
    db = d if db is None else db
    v = np.zeros(d * db, dtype=np.complex128)
    for a, b in pairs:
        v[a * db + b] = 1
    return v / np.linalg.norm(v)


def test_product_state():
    sd = schmidt_decompose(_ket(2, [(0, 0)]), 2, 2)
    assert sd.schmidt_number == 1
    assert sd.coefficients == pytest.approx([1])
    assert entanglement_entropy(sd) == 0


def test_bell_state():
    sd = schmidt_decompose(_ket(2, [(0, 0), (1, 1)]), 2, 2)
    assert sd.schmidt_number == 2
    assert sd.coefficients == pytest.approx([2**-0.5] * 2)
    assert entanglement_entropy(sd) == pytest.approx(1)


def test_rank3_in_8x8():
    sd = schmidt_decompose(_ket(8, [(1, 1), (2, 2), (4, 4)]), 8, 8)
    assert sd.schmidt_number == 3
    assert sd.coefficients == pytest.approx([3**-0.5] * 3)
    assert entanglement_entropy(sd) == pytest.approx(np.log2(3))


def test_errors():
    with pytest.raises(PreconditionError):
        schmidt_decompose(np.zeros(4), 2, 2)
    with pytest.raises(PreconditionError):
        schmidt_decompose(np.ones(4), 2, 2)
    with pytest.raises(PreconditionError):
        schmidt_decompose(np.ones(4) / 2, 2, 3)


def test_cutoff_is_configurable():
    psi = np.array([1, 0, 0, 1e-6])
    psi = psi / np.linalg.norm(psi)
    assert schmidt_decompose(psi, 2, 2).schmidt_number == 2
    assert schmidt_decompose(psi, 2, 2, cutoff=1e-5).schmidt_number == 1


def test_filter_already_maximal():
    sd = schmidt_decompose(_ket(3, [(0, 0), (1, 1), (2, 2)]), 3, 3)
    filt, p = filter_to_maximally_entangled(sd)
    assert p == pytest.approx(1)
    assert np.allclose(filt, np.eye(3), atol=1e-12)


@pytest.mark.parametrize(
    "c1, c2, expected",
    [
        (np.cos(np.pi / 6), np.sin(np.pi / 6), 2 * np.sin(np.pi / 6) ** 2),
        (np.sqrt(2 / 3), np.sqrt(1 / 3), 2 / 3),
    ],
)
def test_filter_success_probability(c1, c2, expected):
    sd = schmidt_decompose(np.array([c1, 0, 0, c2]), 2, 2)
    _, p = filter_to_maximally_entangled(sd)
    assert p == pytest.approx(expected, abs=1e-12)


def test_filter_rejects_product():
    with pytest.raises(NotEntangledError):
        filter_to_maximally_entangled(schmidt_decompose(_ket(2, [(1, 0)]), 2, 2))


def _random_vector(rng, da, db, rank):
    a = random_unitary(rng, da)[:, :rank]
    b = random_unitary(rng, db)[:, :rank]
    c = rng.uniform(0.1, 1, size=rank)
    c /= np.linalg.norm(c)
    return sum(c[i] * np.kron(a[:, i], b[:, i]) for i in range(rank))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(2, 5))
def test_schmidt_invariants(seed, da, db):
    rng = np.random.default_rng(seed)
    rank = int(rng.integers(1, min(da, db) + 1))
    psi = _random_vector(rng, da, db, rank)
    sd = schmidt_decompose(psi, da, db)
    assert np.sum(sd.coefficients**2) == pytest.approx(1, abs=1e-9)
    assert np.abs(sd.vector() - psi).max() < 1e-9
    assert np.all(np.diff(sd.coefficients) <= 1e-12)
    # Schmidt number equals the rank of the reduced state
    red = psi.reshape(da, db) @ psi.reshape(da, db).conj().T
    assert sd.schmidt_number == np.linalg.matrix_rank(red, tol=1e-10) == rank
    # local unitary invariance
    ua, ub = random_unitary(rng, da), random_unitary(rng, db)
    rotated = schmidt_decompose(np.kron(ua, ub) @ psi, da, db)
    assert np.abs(rotated.coefficients - sd.coefficients).max() < 1e-8
    e = entanglement_entropy(sd)
    assert -1e-12 <= e <= np.log2(min(da, db)) + 1e-12
    if rank >= 2:
        filt, p = filter_to_maximally_entangled(sd)
        out = np.kron(filt, np.eye(db)) @ psi
        assert np.linalg.norm(out) ** 2 == pytest.approx(p, abs=1e-10)
        post = schmidt_decompose(out / np.linalg.norm(out), da, db)
        assert np.abs(post.coefficients - rank**-0.5).max() < 1e-8

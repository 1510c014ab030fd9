import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qse.errors import DimensionError, InvalidParameterError, SymmetryError
from qse.linalg import (
    clean_spectrum,
    hermitian_eig,
    hs_inner,
    is_scaled_unitary_on_support,
    is_unitary,
    kron,
    partial_trace,
    q_mean,
    schatten_bound_factor,
    schatten_norm,
    support_dimension,
)
from qse.sampling import random_unitary, trial_rng

from conftest import ginibre, random_hermitian


def loop_partial_trace(x, keep, da, db):
    if keep == "A":
        out = np.zeros((da, da), dtype=complex)
        for i in range(da):
            for j in range(da):
                out[i, j] = sum(x[i * db + k, j * db + k] for k in range(db))
    else:
        out = np.zeros((db, db), dtype=complex)
        for i in range(db):
            for j in range(db):
                out[i, j] = sum(x[k * db + i, k * db + j] for k in range(da))
    return out


def loop_kron(x, y):
    n, m = x.shape
    p, r = y.shape
    out = np.zeros((n * p, m * r), dtype=complex)
    for i in range(n):
        for j in range(m):
            for k in range(p):
                for l in range(r):
                    out[i * p + k, j * r + l] = x[i, j] * y[k, l]
    return out


def test_hs_inner_matches_trace_formula(rng):
    x, y = ginibre(3, 3, rng), ginibre(3, 3, rng)
    expected = sum(np.conj(x[a, b]) * y[a, b] for a in range(3) for b in range(3))
    assert hs_inner(x, y) == pytest.approx(expected, abs=1e-12)
    assert hs_inner(x, y) == pytest.approx(np.conj(hs_inner(y, x)), abs=1e-12)


def test_hs_inner_shape_mismatch():
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))


def test_pauli_orthogonality():
    x = np.array([[0, 1], [1, 0]])
    z = np.diag([1, -1])
    assert hs_inner(x, z) == 0
    assert hs_inner(x, x) == 2


@pytest.mark.parametrize("shape", [(3, 3), (4, 2), (2, 5)])
def test_schatten_norm_special_orders(shape, rng):
    x = ginibre(*shape, rng)
    assert schatten_norm(x, 2) == pytest.approx(np.linalg.norm(x, "fro"), rel=1e-12)
    assert schatten_norm(x, 1) == pytest.approx(np.linalg.norm(x, "nuc"), rel=1e-12)
    assert schatten_norm(x, np.inf) == pytest.approx(np.linalg.norm(x, 2), rel=1e-12)


def test_schatten_norm_diagonal():
    x = np.diag([3.0, -4.0, 0.0])
    assert schatten_norm(x, 1) == pytest.approx(7.0)
    assert schatten_norm(x, 2) == pytest.approx(5.0)
    assert schatten_norm(x, 3) == pytest.approx((27 + 64) ** (1 / 3))
    assert schatten_norm(np.zeros((2, 2)), 1.5) == 0.0


@pytest.mark.parametrize("p", [0.5, -1, float("nan")])
def test_schatten_norm_rejects_order(p):
    with pytest.raises(InvalidParameterError):
        schatten_norm(np.eye(2), p)


def test_schatten_norm_large_order_does_not_overflow():
    x = np.diag([1e200, 1e199])
    assert schatten_norm(x, 50) == pytest.approx(1e200, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 5))
def test_schatten_norms_decrease_with_order(seed, n):
    x = ginibre(n, n, trial_rng(seed))
    norms = [schatten_norm(x, p) for p in (1, 1.5, 2, 3, 7, np.inf)]
    assert all(a >= b * (1 - 1e-12) for a, b in zip(norms, norms[1:]))


def test_q_mean():
    assert q_mean([3.0, 4.0], 2) == pytest.approx(math.sqrt(12.5))
    assert q_mean([1.0, 5.0], np.inf) == 5.0
    with pytest.raises(InvalidParameterError):
        q_mean([], 2)
    with pytest.raises(InvalidParameterError):
        q_mean([-1.0], 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_hermitian_eig_against_characteristic_polynomial(n, rng):
    h = random_hermitian(n, rng)
    spec = hermitian_eig(h)
    # independent route: roots of det(h - x) via the companion matrix
    roots = np.sort(np.roots(np.poly(h)).real)[::-1]
    np.testing.assert_allclose(spec.eigenvalues, roots, atol=1e-9)
    assert np.all(np.diff(spec.eigenvalues) <= 0)
    np.testing.assert_allclose(spec.reconstruct(), h, atol=1e-12)
    assert is_unitary(spec.eigenvectors)


def test_hermitian_eig_phase_convention(rng):
    spec = hermitian_eig(random_hermitian(4, rng))
    for col in spec.eigenvectors.T:
        first = col[np.argmax(np.abs(col) > 1e-12)]
        assert abs(first.imag) < 1e-14 and first.real > 0


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(SymmetryError):
        hermitian_eig(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(DimensionError):
        hermitian_eig(np.ones((2, 3)))


def test_hermitian_eig_tolerates_rounding_asymmetry():
    h = np.array([[1.0, 0.5 + 1e-14], [0.5, 2.0]])
    assert hermitian_eig(h).eigenvalues.shape == (2,)


def test_kron_matches_loop(rng):
    x, y = ginibre(2, 3, rng), ginibre(3, 2, rng)
    np.testing.assert_allclose(kron(x, y), loop_kron(x, y), atol=1e-14)


@pytest.mark.parametrize("da,db", [(2, 2), (2, 3), (3, 2)])
@pytest.mark.parametrize("keep", ["A", "B"])
def test_partial_trace_matches_loop(da, db, keep, rng):
    x = ginibre(da * db, da * db, rng)
    np.testing.assert_allclose(partial_trace(x, keep, (da, db)), loop_partial_trace(x, keep, da, db), atol=1e-12)


def test_partial_trace_of_product(rng):
    a, b = ginibre(2, 2, rng), ginibre(3, 3, rng)
    ab = np.kron(a, b)
    np.testing.assert_allclose(partial_trace(ab, "A", (2, 3)), np.trace(b) * a, atol=1e-12)
    np.testing.assert_allclose(partial_trace(ab, "B", (2, 3)), np.trace(a) * b, atol=1e-12)
    with pytest.raises(DimensionError):
        partial_trace(ab, "A", (2, 2))


def test_support_dimension_and_scaled_unitaries(rng):
    u = random_unitary(4, rng)
    assert support_dimension(u) == 4
    assert is_scaled_unitary_on_support(2.5 * u)
    low = ginibre(4, 2, rng) @ ginibre(2, 4, rng)
    assert support_dimension(low) == 2
    assert not is_scaled_unitary_on_support(low)
    rank_one = np.outer(ginibre(4, 1, rng), ginibre(1, 4, rng))
    assert is_scaled_unitary_on_support(rank_one)
    assert support_dimension(np.zeros((3, 3))) == 0


@pytest.mark.parametrize("d,p,q,expected", [
    (4, 1, 2, 2.0),
    (8, 1, 3, 4.0),
    (9, 2, 2, 9 ** 0.25),
    (5, 1, np.inf, 5.0),
    (4, 2, np.inf, 2.0),
    (1, 1, 3, 1.0),
])
def test_schatten_bound_factor(d, p, q, expected):
    assert schatten_bound_factor(d, p, q) == pytest.approx(expected, rel=1e-14)


def test_schatten_bound_factor_rejects():
    with pytest.raises(InvalidParameterError):
        schatten_bound_factor(0, 1, 2)
    with pytest.raises(InvalidParameterError):
        schatten_bound_factor(2, np.inf, 2)


def test_clean_spectrum():
    v = clean_spectrum([0.6, 0.4, 1e-16, -1e-17])
    assert list(v) == [0.6, 0.4, 0.0, 0.0]
    assert clean_spectrum([1e-9, 1.0])[0] == 1e-9

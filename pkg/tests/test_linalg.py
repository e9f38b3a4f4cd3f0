from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detrep.errors import (
    DegenerateInputError,
    DimensionError,
    NormalizationError,
    NotPSDError,
    NotRealError,
    SymmetryError,
)
from detrep.linalg import (
    cholesky,
    companionMatrix,
    elementary_symmetric,
    hadamard,
    isDoublyStochastic,
    isMajorized,
    isOrthogonal,
    liftRealMatrix,
    matrix_from_json,
    matrix_to_json,
    randomIntegerSymmetric,
    randomOrthogonal,
    randomPSD,
    randomUnipotent,
    roundMatrix,
    symEigen,
    univariateRoots,
)

seeds = st.integers(0, 2**32 - 1)


# hadamard

def test_hadamard_examples():
    I = np.eye(2)
    assert np.array_equal(hadamard(I, I), I)
    assert np.array_equal(hadamard([[1, 2], [3, 4]], [[5, 6], [7, 8]]), [[5, 12], [21, 32]])
    A = np.arange(6.0).reshape(2, 3)
    assert np.array_equal(hadamard(A, np.zeros((2, 3))), np.zeros((2, 3)))


def test_hadamard_shape_mismatch():
    with pytest.raises(DimensionError):
        hadamard(np.eye(2), np.eye(3))


@given(seeds)
def test_hadamard_commutative_associative(seed):
    rng = np.random.default_rng(seed)
    A, B, C = rng.standard_normal((3, 3, 4))
    assert np.array_equal(hadamard(A, B), hadamard(B, A))
    # entrywise products of three floats: associativity only up to rounding
    assert np.allclose(hadamard(hadamard(A, B), C), hadamard(A, hadamard(B, C)), rtol=1e-15, atol=0)


# cholesky

def test_cholesky_examples():
    assert np.array_equal(cholesky(np.eye(3)), np.eye(3))
    assert np.allclose(cholesky(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


@given(seeds, st.integers(1, 6))
def test_cholesky_reconstructs_random_psd(seed, n):
    rng = np.random.default_rng(seed)
    rank = int(rng.integers(0, n + 1))
    A = randomPSD(n, rng, rank=rank)
    L = cholesky(A)
    assert np.allclose(L, np.tril(L))
    assert np.abs(L @ L.T - A).max() <= 1e-10 * (1 + np.abs(A).max())


def test_cholesky_errors():
    with pytest.raises(SymmetryError):
        cholesky([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NotPSDError):
        cholesky(np.diag([1.0, -1.0]))


# companion matrix

def test_companion_examples():
    assert np.array_equal(companionMatrix([1, -3]), [[3.0]])
    assert np.array_equal(companionMatrix([1, 0, 1]), [[0, -1], [1, 0]])
    M = companionMatrix([1, -5, 6])
    # det(tI - M) = t^2 - trace t + det
    assert np.isclose(np.trace(M), 5) and np.isclose(np.linalg.det(M), 6)


def test_companion_not_monic():
    with pytest.raises(NormalizationError):
        companionMatrix([2, 1])


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6))
def test_companion_charpoly(tail):
    c = [1.0, *map(float, tail)]
    M = companionMatrix(c)
    assert np.allclose(np.poly(M), c, atol=1e-8 * (1 + max(map(abs, c))) ** len(c))


# symmetric eigen

def test_symeigen_examples():
    e = symEigen(np.diag([5.0, 2.0, -1.0]))
    assert np.allclose(e.values, [5, 2, -1])
    assert np.allclose(np.abs(e.vectors), np.eye(3))
    assert np.allclose(symEigen([[0.0, 1.0], [1.0, 0.0]]).values, [1, -1])


def test_symeigen_rejects_asymmetric():
    with pytest.raises(SymmetryError):
        symEigen([[0.0, 1.0], [0.0, 0.0]])


@settings(max_examples=60)
@given(seeds, st.integers(1, 7), st.floats(1e-3, 1e6))
def test_symeigen_planted_spectrum(seed, n, scale):
    rng = np.random.default_rng(seed)
    Q = randomOrthogonal(n, rng)
    d = np.sort(rng.uniform(-scale, scale, n))[::-1]
    A = Q @ np.diag(d) @ Q.T
    A = (A + A.T) / 2
    e = symEigen(A)
    assert np.all(np.diff(e.values) <= 0)
    assert np.abs(e.values - d).max() <= 1e-9 * (1 + scale)
    V = e.vectors
    assert np.abs(V.T @ V - np.eye(n)).max() <= 1e-10
    assert np.abs(A @ V - V * e.values).max() <= 1e-10 * (1 + np.abs(A).max())


# univariate roots

def test_roots_examples():
    assert np.allclose(univariateRoots([1, 0, -1]), [1, -1])
    r = univariateRoots(np.poly([2, 2, 2]))
    assert len(r) == 3 and np.abs(r - 2).max() < 1e-5


def test_roots_zero_polynomial():
    with pytest.raises(DegenerateInputError):
        univariateRoots([0, 0])


@given(seeds)
def test_roots_planted_degree5(seed):
    rng = np.random.default_rng(seed)
    planted = rng.uniform(-3, 3, 5)
    # keep roots apart so conditioning stays reasonable
    planted = np.sort(planted)
    planted = planted + 0.3 * np.arange(5)
    r = np.sort(univariateRoots(np.poly(planted)).real)
    assert np.abs(r - np.sort(planted)).max() <= 1e-8


@given(seeds)
def test_roots_of_product_are_union(seed):
    rng = np.random.default_rng(seed)
    p = np.poly(rng.uniform(-2, 2, int(rng.integers(1, 5))))
    q = np.poly(rng.uniform(-2, 2, int(rng.integers(1, 5))) + 5)
    both = univariateRoots(np.polymul(p, q))
    sep = np.concatenate([univariateRoots(p), univariateRoots(q)])
    assert len(both) == len(sep)
    key = lambda z: (round(z.real, 3), round(z.imag, 3))
    assert np.allclose(sorted(both, key=key), sorted(sep, key=key), atol=1e-4)


def test_roots_residual_bound():
    p = np.array([1.0, -2.0, 3.0, -4.0, 5.0])
    for r in univariateRoots(p):
        assert abs(np.polyval(p, r)) <= 1e-5 * np.abs(p).max()


# predicates

def test_predicates():
    assert isOrthogonal(np.eye(4)) and isDoublyStochastic(np.eye(4))
    J = np.full((2, 2), 0.5)
    assert isDoublyStochastic(J) and not isOrthogonal(J)
    assert isOrthogonal(randomOrthogonal(4, 1), tol=1e-9)
    with pytest.raises(DimensionError):
        isOrthogonal(np.ones((2, 3)))


def test_majorization():
    assert isMajorized([1, 1, 1], [3, 0, 0])
    assert not isMajorized([3, 0, 0], [1, 1, 1])
    with pytest.raises(DimensionError):
        isMajorized([1, 2], [3])


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=6))
def test_majorization_reflexive(v):
    assert isMajorized(v, v)


# generators

def test_generators_contracts():
    M = randomIntegerSymmetric(3, 20, 7)
    assert np.array_equal(M, M.T) and M.min() >= 0 and M.max() <= 19
    assert np.all(M == np.round(M))
    Q = randomOrthogonal(5, 7)
    assert np.abs(Q.T @ Q - np.eye(5)).max() <= 1e-12
    assert symEigen(randomPSD(4, 7)).values.min() >= -1e-12
    U = randomUnipotent(4, rng=7)
    assert np.array_equal(U, np.triu(U)) and np.all(np.diag(U) == 1)
    with pytest.raises(DimensionError):
        randomOrthogonal(0)


@given(seeds)
def test_generators_reproducible(seed):
    for gen in (randomIntegerSymmetric, randomOrthogonal, randomPSD, randomUnipotent):
        a = gen(4, rng=np.random.default_rng(seed))
        b = gen(4, rng=np.random.default_rng(seed))
        assert a.tobytes() == b.tobytes()


# lifting, rounding, serialization

def test_lift_and_round():
    assert np.array_equal(liftRealMatrix(np.array([[1 + 1e-9j]])), [[1.0]])
    with pytest.raises(NotRealError):
        liftRealMatrix(np.array([[1 + 0.5j]]))
    R = roundMatrix([[0.33334]], 3)
    assert R[0, 0] == Fraction(333, 1000)


def test_matrix_json_round_trip():
    for A in (np.arange(4.0).reshape(2, 2), np.array([[1 + 2j, 0], [0, 1j]]), roundMatrix([[0.5, 0.25]], 2)):
        B = matrix_from_json(matrix_to_json(A))
        assert np.array_equal(np.asarray(B), np.asarray(A))


def test_elementary_symmetric():
    assert np.allclose(elementary_symmetric([1, 2, 3]), [1, 6, 11, 6])

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detrep.errors import DegenerateInputError, DimensionError, ScopeError
from detrep.poly import Polynomial, parsePolynomial
from detrep.psolve import (
    PolySystem,
    SolutionSet,
    TrackerConfig,
    realSolutions,
    solveSystem,
    totalDegreeStart,
    trackPath,
)


def _system(texts, names):
    return PolySystem([parsePolynomial(t, names) for t in texts])


def _linear_system(M, rhs):
    n = len(rhs)
    names = tuple(f"x{i}" for i in range(n))
    eqs = [Polynomial.linear_form(M[i], -rhs[i], names) for i in range(n)]
    return PolySystem(eqs)


def test_system_validation():
    with pytest.raises(DimensionError):
        _system(["x + y"], ("x", "y"))
    with pytest.raises(DegenerateInputError):
        PolySystem([Polynomial.constant(0.0, 1)])


def test_start_system_counts():
    _, _, pts = totalDegreeStart(_system(["x^2 - 1"], ("x",)), 0)
    assert len(pts) == 2
    names = tuple("abcdef")
    degs = (2, 2, 2, 3, 3, 4)
    sysm = PolySystem([parsePolynomial(f"{v}^{d} - 1", names) for v, d in zip(names, degs)])
    degrees, r, pts = totalDegreeStart(sysm, 0)
    assert len(pts) == 288
    assert np.abs(pts ** np.array(degrees) - r).max() <= 1e-12
    assert np.allclose(np.abs(r), 1)
    _, _, pts = totalDegreeStart(_linear_system(np.eye(3), np.ones(3)), 0)
    assert len(pts) == 1


def test_track_univariate():
    target = _system(["x^2 - 4"], ("x",))
    config = TrackerConfig(seed=3)
    degrees, r, pts = totalDegreeStart(target, np.random.default_rng(3))
    ends = []
    for p in pts:
        out = trackPath(target, p, config, start=(degrees, r))
        assert out.converged and out.residual <= 1e-10
        ends.append(out.point[0])
    assert np.allclose(sorted(np.real(ends)), [-2, 2], atol=1e-10)


def test_track_linear_matches_solve(rng):
    M = rng.standard_normal((3, 3))
    rhs = rng.standard_normal(3)
    target = _linear_system(M, rhs)
    degrees, r, pts = totalDegreeStart(target, np.random.default_rng(0))
    out = trackPath(target, pts[0], TrackerConfig(seed=0), start=(degrees, r))
    assert out.converged
    assert np.abs(out.point - np.linalg.solve(M, rhs)).max() <= 1e-10


def test_divergent_paths_are_reported():
    # x*y = 1 and x*y = 2 have no common affine solution
    sols = solveSystem(_system(["x*y - 1", "x*y - 2"], ("x", "y")))
    assert len(sols) == 0
    assert sols.pathStats["diverged"] == 4 and sols.pathStats["converged"] == 0


def test_cube_roots_of_unity():
    sols = solveSystem(_system(["x^3 - 1"], ("x",)))
    pts = np.array([p[0] for p in sols.points])
    want = np.exp(2j * np.pi * np.arange(3) / 3)
    for w in want:
        assert np.abs(pts - w).min() <= 1e-10
    assert len(pts) == 3


def test_circle_and_line():
    sols = solveSystem(_system(["x^2 + y^2 - 2", "x - y"], ("x", "y")))
    pts = sorted(realSolutions(sols, 1e-8), key=lambda p: p[0])
    assert len(pts) == 2
    assert np.allclose(pts[0], [-1, -1], atol=1e-8) and np.allclose(pts[1], [1, 1], atol=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_linear_systems(seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((3, 3))
    rhs = rng.standard_normal(3)
    sols = solveSystem(_linear_system(M, rhs), TrackerConfig(seed=seed % 1000))
    assert len(sols) == 1
    assert np.abs(sols.points[0] - np.linalg.solve(M, rhs)).max() <= 1e-9 * (1 + np.abs(np.linalg.solve(M, rhs)).max())


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_residual_and_count_bounds(seed):
    rng = np.random.default_rng(seed)
    names = ("x", "y")
    coeffs = rng.integers(-5, 6, size=(2, 6))
    mons = ["1", "x", "y", "x^2", "x*y", "y^2"]
    eqs = [" + ".join(f"({c})*{m}" for c, m in zip(row, mons)) + " + x^2" for row in coeffs]
    try:
        system = _system(eqs, names)
    except DegenerateInputError:
        return
    config = TrackerConfig(seed=1)
    sols = solveSystem(system, config)
    assert len(sols) <= int(np.prod(system.degrees()))
    scale = 1 + system.max_coeff()
    for p in sols.points:
        assert np.abs(system(p)).max() <= config.endgameTol * scale


def test_seed_determinism_and_permutation():
    texts = ["x^2 + y^2 - 5", "x*y - 2"]
    s = _system(texts, ("x", "y"))
    a = json.dumps(solveSystem(s, TrackerConfig(seed=7)).to_json())
    b = json.dumps(solveSystem(s, TrackerConfig(seed=7)).to_json())
    assert a == b
    swapped = solveSystem(_system(texts[::-1], ("x", "y")), TrackerConfig(seed=7))
    orig = solveSystem(s, TrackerConfig(seed=7))
    key = lambda p: (round(p[0].real, 6), round(p[0].imag, 6), round(p[1].real, 6))
    assert len(swapped) == len(orig) == 4
    for p, q in zip(sorted(orig.points, key=key), sorted(swapped.points, key=key)):
        assert np.abs(p - q).max() <= 1e-6


def test_real_solutions_filter():
    s = SolutionSet([np.array([1.0 + 0j, 2.0]), np.array([1j])], [0.0, 0.0])
    assert len(realSolutions(SolutionSet([np.array([1.0 + 0j])], [0.0]), 1e-5)) == 1
    assert realSolutions(SolutionSet([np.array([1j])], [0.0]), 1e-5) == []
    assert np.allclose(realSolutions(s, 1e-5)[0], [1, 2])


def test_scope_limits():
    names = tuple(f"v{i}" for i in range(9))
    with pytest.raises(ScopeError):
        solveSystem(PolySystem([parsePolynomial(f"{v} - 1", names) for v in names]))
    with pytest.raises(ScopeError):
        solveSystem(_system(["x^101 - 1", "y^101 - 1"], ("x", "y")))


def test_config_validation():
    with pytest.raises(ValueError):
        TrackerConfig(minStep=0.1, initialStep=0.01)
    with pytest.raises(ValueError):
        TrackerConfig(endgameTol=0)


def test_system_json_round_trip():
    s = _system(["x^2 - 2*y", "x + y - 1"], ("x", "y"))
    back = PolySystem.from_json(json.loads(json.dumps(s.to_json())))
    assert all(a == b for a, b in zip(s.equations, back.equations))
    txt = PolySystem.from_json({"vars": ["x", "y"], "equations": ["x^2 - 2*y", "x + y - 1"]})
    assert all(a == b for a, b in zip(s.equations, txt.equations))

"""Total-degree homotopy continuation for small square polynomial systems.

The homotopy is ``H(x, t) = gamma (1 - t) G(x) + t F(x)`` with start
system ``G_i = x_i^d_i - r_i``.  All paths are tracked together as one
batch (each with its own ``t`` and step size) using an Euler predictor
and a Newton corrector.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .errors import DegenerateInputError, DimensionError, ScopeError
from .poly import Polynomial

log = logging.getLogger(__name__)

MAX_VARIABLES = 8
MAX_BEZOUT = 10_000


@dataclass
class PolySystem:
    equations: List[Polynomial]

    def __post_init__(self):
        self.equations = list(self.equations)
        if not self.equations:
            raise DimensionError("empty system")
        n = self.equations[0].nvars
        if any(eq.nvars != n for eq in self.equations):
            raise DimensionError("equations live in different numbers of variables")
        if len(self.equations) != n:
            raise DimensionError(f"system is not square: {len(self.equations)} equations, {n} variables")
        if any(eq.is_zero() for eq in self.equations):
            raise DegenerateInputError("system contains a zero equation")

    @property
    def n(self):
        return len(self.equations)

    @property
    def names(self):
        return self.equations[0].var_names

    def degrees(self):
        return [eq.degree() for eq in self.equations]

    def max_coeff(self):
        return max(eq.max_coeff() for eq in self.equations)

    def __call__(self, x):
        return np.array([eq(*x) for eq in self.equations])

    def to_json(self):
        return {
            "vars": list(self.names),
            "equations": [eq.to_json()["terms"] for eq in self.equations],
        }

    @classmethod
    def from_json(cls, obj):
        from .poly import parsePolynomial

        names = obj["vars"]
        eqs = []
        for eq in obj["equations"]:
            if isinstance(eq, str):
                eqs.append(parsePolynomial(eq, names))
            else:
                terms = eq["terms"] if isinstance(eq, dict) else eq
                eqs.append(Polynomial.from_json({"vars": names, "terms": terms}))
        return cls(eqs)


@dataclass
class TrackerConfig:
    initialStep: float = 0.01
    minStep: float = 1e-12
    maxStep: float = 0.05
    correctorTol: float = 1e-9
    maxCorrectorIters: int = 3
    endgameTol: float = 1e-10
    maxSteps: int = 20_000
    seed: int = 0
    divergence: float = 1e8

    def __post_init__(self):
        if not 0 < self.minStep <= self.initialStep <= self.maxStep <= 1:
            raise ValueError("need 0 < minStep <= initialStep <= maxStep <= 1")
        if self.correctorTol <= 0 or self.endgameTol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class SolutionSet:
    points: list
    residuals: list
    pathStats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def to_json(self):
        return {
            "points": [[{"re": z.real, "im": z.imag} for z in p] for p in self.points],
            "residuals": [float(r) for r in self.residuals],
            "pathStats": dict(self.pathStats),
        }


@dataclass
class PathOutcome:
    converged: bool
    point: np.ndarray | None
    reason: str = ""
    steps: int = 0
    residual: float = np.inf


class _Compiled:
    """Vectorized evaluation of a system and its Jacobian."""

    def __init__(self, equations: Sequence[Polynomial]):
        n = equations[0].nvars
        monos = {}
        for eq in equations:
            for e in eq.terms:
                monos.setdefault(e, len(monos))
                for i in range(n):
                    if e[i]:
                        e2 = list(e)
                        e2[i] -= 1
                        monos.setdefault(tuple(e2), len(monos))
        m = len(monos)
        self.n = n
        self.exps = np.array(list(monos), dtype=int).reshape(m, n)
        self.maxdeg = int(self.exps.max(initial=0))
        C = np.zeros((len(equations), m), dtype=complex)
        JC = np.zeros((len(equations), n, m), dtype=complex)
        for r, eq in enumerate(equations):
            for e, c in eq.terms.items():
                C[r, monos[e]] += c
                for i in range(n):
                    if e[i]:
                        e2 = list(e)
                        e2[i] -= 1
                        JC[r, i, monos[tuple(e2)]] += c * e[i]
        self.C = C
        self.JC = JC.reshape(len(equations) * n, m)

    def _monomials(self, X):
        # powers[k] = X**k, shape (maxdeg+1, p, n)
        p = X.shape[0]
        powers = np.empty((self.maxdeg + 1, p, self.n), dtype=complex)
        powers[0] = 1.0
        for k in range(1, self.maxdeg + 1):
            powers[k] = powers[k - 1] * X
        cols = np.arange(self.n)
        # (p, m, n) gathered then multiplied along n
        g = powers[self.exps[None, :, :], np.arange(p)[:, None, None], cols[None, None, :]]
        return g.prod(axis=2)

    def values(self, X):
        return self._monomials(X) @ self.C.T

    def values_and_jacobian(self, X):
        mono = self._monomials(X)
        p = X.shape[0]
        return mono @ self.C.T, (mono @ self.JC.T).reshape(p, self.C.shape[0], self.n)


def _solve_batch(J, r):
    """Solve ``J[k] y[k] = r[k]``; singular systems give NaN rows."""
    try:
        return np.linalg.solve(J, r[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full(r.shape, np.nan, dtype=complex)
        for k in range(len(J)):
            try:
                out[k] = np.linalg.solve(J[k], r[k])
            except np.linalg.LinAlgError:
                pass
        return out


class _Homotopy:
    def __init__(self, target: _Compiled, degrees, r, gamma):
        self.F = target
        self.d = np.asarray(degrees)
        self.r = np.asarray(r)
        self.gamma = gamma

    def start(self, X):
        G = X ** self.d - self.r
        dG = self.d * X ** (self.d - 1)
        return G, dG

    def eval(self, X, t):
        F, JF = self.F.values_and_jacobian(X)
        G, dG = self.start(X)
        tt = t[:, None]
        H = self.gamma * (1 - tt) * G + tt * F
        JH = tt[:, :, None] * JF
        idx = np.arange(X.shape[1])
        JH[:, idx, idx] += self.gamma * (1 - tt) * dG
        Ht = F - self.gamma * G
        return H, JH, Ht


def _inf_norm(X):
    return np.abs(X).max(axis=-1)


def _newton_target(F: _Compiled, x, iters=50, tol=1e-14):
    """Newton on the target; returns (point, last step size)."""
    step = np.inf
    for _ in range(iters):
        vals, J = F.values_and_jacobian(x[None])
        dx = _solve_batch(J, -vals)[0]
        if not np.all(np.isfinite(dx)):
            return x, np.inf
        x = x + dx
        step = np.abs(dx).max()
        if step <= tol * (1 + np.abs(x).max()):
            break
    return x, step


def _track_batch(hom: _Homotopy, X0, config: TrackerConfig):
    """Track all start points from t=0 to t=1.

    Returns (points, status, reasons, steps); status is 1 for paths that
    reached t=1, 0 otherwise.
    """
    p = X0.shape[0]
    X = np.array(X0, dtype=complex)
    t = np.zeros(p)
    dt = np.full(p, config.initialStep)
    succ = np.zeros(p, dtype=int)
    steps = np.zeros(p, dtype=int)
    status = np.full(p, -1)  # -1 active, 1 reached end, 0 failed
    reasons = [""] * p
    K = config.maxCorrectorIters

    while True:
        act = np.flatnonzero(status == -1)
        if len(act) == 0:
            break
        x, ta, h0 = X[act], t[act], dt[act]
        t1 = np.minimum(ta + h0, 1.0)
        h = t1 - ta
        _, JH, Ht = hom.eval(x, ta)
        dxdt = _solve_batch(JH, -Ht)
        xp = x + h[:, None] * dxdt
        ok = np.all(np.isfinite(xp), axis=1)
        conv = np.zeros(len(act), dtype=bool)
        prev = np.full(len(act), np.inf)
        for _ in range(K):
            H, JH, _ = hom.eval(np.where(ok[:, None], xp, 0), t1)
            dx = _solve_batch(JH, -H)
            good = np.all(np.isfinite(dx), axis=1) & ok
            nrm = np.where(good, _inf_norm(np.where(good[:, None], dx, 0)), np.inf)
            small = nrm <= config.correctorTol * (1 + _inf_norm(xp))
            # Newton must contract, otherwise the step may have jumped paths
            ok &= good & ((prev == np.inf) | (nrm <= 0.5 * prev) | small)
            xp = np.where(ok[:, None], xp + np.where(ok[:, None], dx, 0), xp)
            prev = nrm
            conv |= ok & small
            if np.all(conv | ~ok):
                break
        conv &= ok
        steps[act] += 1

        acc = act[conv]
        X[acc] = xp[conv]
        t[acc] = t1[conv]
        succ[acc] += 1
        grow = acc[succ[acc] >= 5]
        dt[grow] = np.minimum(2 * dt[grow], config.maxStep)
        succ[grow] = 0

        rej = act[~conv]
        dt[rej] /= 2
        succ[rej] = 0

        big = act[_inf_norm(X[act]) > config.divergence]
        status[big] = 0
        for k in big:
            reasons[k] = "infinity"
        done = acc[t[acc] >= 1.0]
        done = done[status[done] == -1]
        status[done] = 1
        small = rej[dt[rej] < config.minStep]
        small = small[status[small] == -1]
        status[small] = 0
        for k in small:
            reasons[k] = "step-failure"
        over = act[(steps[act] >= config.maxSteps) & (status[act] == -1)]
        status[over] = 0
        for k in over:
            reasons[k] = "max-steps"
    return X, status, reasons, steps, t


def _gamma(rng):
    while True:
        theta = rng.uniform(0, 2 * np.pi)
        if min(abs(theta), abs(theta - np.pi), abs(theta - 2 * np.pi)) > 0.01:
            return complex(np.cos(theta), np.sin(theta))


def totalDegreeStart(system: PolySystem, rng=None):
    """Start system ``x_i^d_i - r_i`` and its ``prod(d_i)`` solutions.

    Returns ``(degrees, r, start_points)``.
    """
    rng = np.random.default_rng(rng)
    degrees = system.degrees()
    if min(degrees) < 1:
        raise DegenerateInputError("every equation needs degree >= 1")
    theta = rng.uniform(0, 2 * np.pi, size=len(degrees))
    r = np.exp(1j * theta)
    per_var = [
        np.exp(1j * (theta[i] + 2 * np.pi * np.arange(d)) / d) for i, d in enumerate(degrees)
    ]
    pts = np.array(list(itertools.product(*per_var)), dtype=complex).reshape(-1, len(degrees))
    return degrees, r, pts


def _normalized(system: PolySystem):
    return [eq / eq.max_coeff() for eq in system.equations]


def trackPath(target: PolySystem, start_point, config: TrackerConfig | None = None,
              start=None, gamma=None) -> PathOutcome:
    """Track one path of the total-degree homotopy.

    ``start`` is ``(degrees, r)`` of the start system; by default it is
    drawn from ``config.seed``, as is ``gamma``.
    """
    config = config or TrackerConfig()
    rng = np.random.default_rng(config.seed)
    if gamma is None:
        gamma = _gamma(rng)
    if start is None:
        degrees, r, _ = totalDegreeStart(target, rng)
    else:
        degrees, r = start
    F = _Compiled(_normalized(target))
    hom = _Homotopy(F, degrees, r, gamma)
    x0 = np.asarray(start_point, dtype=complex)[None]
    G, _ = hom.start(x0)
    if np.abs(G).max() > 1e-8:
        raise ValueError("start point does not satisfy the start system")
    return _finish(target, F, hom, x0, config, np.random.default_rng([config.seed, 0]))[0]


def _finish(target, F, hom, X0, config, path_rngs):
    with np.errstate(over="ignore", invalid="ignore"):
        X, status, reasons, steps, t = _track_batch(hom, X0, config)
    scale = 1 + target.max_coeff()
    outcomes = []
    if not isinstance(path_rngs, list):
        path_rngs = [path_rngs]
    for k in range(X.shape[0]):
        if status[k] == 0 and not (reasons[k] == "step-failure" and t[k] > 0.9):
            outcomes.append(PathOutcome(False, None, reasons[k], int(steps[k])))
            continue
        with np.errstate(over="ignore", invalid="ignore"):
            x, _ = _newton_target(F, X[k])
            res = np.abs(target(x)).max()
        if not res <= config.endgameTol * scale:
            # perturb and retry Newton once before calling it singular
            rng = path_rngs[k % len(path_rngs)]
            with np.errstate(over="ignore", invalid="ignore"):
                x2, _ = _newton_target(F, x + 1e-8 * (1 + np.abs(x).max()) * rng.standard_normal(len(x)))
                res2 = np.abs(target(x2)).max()
            if res2 < res:
                x, res = x2, res2
        # a path that stalled before t=1 only counts if Newton stayed close by
        stayed = status[k] == 1 or _same(x, X[k], 1e-2)
        if stayed and res <= config.endgameTol * scale and np.abs(x).max() <= config.divergence:
            outcomes.append(PathOutcome(True, x, "converged", int(steps[k]), float(res)))
        else:
            reason = reasons[k] or "singular"
            outcomes.append(PathOutcome(False, None, reason, int(steps[k]), float(res)))
    return outcomes


def _same(a, b, tol):
    return np.abs(a - b).max() <= tol * (1 + max(np.abs(a).max(), np.abs(b).max()))


def solveSystem(system: PolySystem, config: TrackerConfig | None = None) -> SolutionSet:
    """All isolated solutions reached by the total-degree homotopy."""
    config = config or TrackerConfig()
    n = system.n
    if n > MAX_VARIABLES:
        raise ScopeError(f"at most {MAX_VARIABLES} variables are supported")
    bezout = int(np.prod(system.degrees()))
    if bezout > MAX_BEZOUT:
        raise ScopeError(f"Bezout number {bezout} exceeds {MAX_BEZOUT}")
    rng = np.random.default_rng(config.seed)
    gamma = _gamma(rng)
    degrees, r, starts = totalDegreeStart(system, rng)
    F = _Compiled(_normalized(system))
    hom = _Homotopy(F, degrees, r, gamma)
    rngs = [np.random.default_rng([config.seed, k]) for k in range(len(starts))]
    log.info("Solving %d x %d polynomial system (%d paths)", n, n, len(starts))
    outcomes = _finish(system, F, hom, starts, config, rngs)

    points, residuals = [], []
    stats = {"tracked": len(outcomes), "converged": 0, "diverged": 0, "duplicates": 0}
    for out in outcomes:
        if not out.converged:
            stats["diverged"] += 1
            key = f"diverged_{out.reason}"
            stats[key] = stats.get(key, 0) + 1
            continue
        stats["converged"] += 1
        if any(_same(out.point, q, 1e-6) for q in points):
            stats["duplicates"] += 1
            continue
        points.append(out.point)
        residuals.append(out.residual)
    stats["solutions"] = len(points)
    return SolutionSet(points, residuals, stats)


def realSolutions(solutions: SolutionSet, tol=1e-5):
    """Points whose imaginary parts are negligible, as real vectors."""
    out = []
    for p in solutions.points:
        p = np.asarray(p)
        if np.all(np.abs(p.imag) <= tol * (1 + np.abs(p.real))):
            out.append(p.real.copy())
    return out

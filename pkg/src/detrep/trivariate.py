"""Monic symmetric determinantal representations of plane cubics and quartics.

For a ternary form ``f(x, y, z)`` of degree ``d`` with ``f(1, 0, 0) = 1``
we look for symmetric ``A1, A2`` with ``f(1, y, z) = det(I + y A1 + z A2)``.
Working in the eigenbasis of ``A1`` we may take ``A1 = D1`` diagonal and
``A2 = B = V^T D2 V`` with ``V`` orthogonal.  Then

* the spectra of ``A1`` and ``A2`` come from the restrictions ``z = 0``
  and ``y = 0``;
* ``diag(B)`` solves a linear system built from the spectrum of ``A1``
  and the coefficients of ``f`` that are linear in ``z`` (and likewise
  for ``diag(V D1 V^T)``);
* the off-diagonal entries of ``B`` are found either by solving the
  square polynomial system given by the remaining coefficients
  (``"direct"``), or, for cubics, by recovering the orthostochastic
  matrix ``V * V`` from a linear system plus one polynomial condition
  (``"orthostochastic"``).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateNumericsError,
    NotHyperbolicError,
    NotRealError,
    NotRepresentableError,
    NormalizationError,
    PredicateError,
    ScopeError,
    SelectionError,
    StrategyError,
    TrackingFailure,
)
from .gmd import coefficientViaGMD
from .linalg import (
    DEFAULT_TOL,
    elementary_symmetric,
    isDoublyStochastic,
    isMajorized,
    isOrthogonal,
    univariateRoots,
)
from .poly import MonicPencil, Polynomial, dehomogenize, pencilMatches, restrict
from .psolve import PolySystem, TrackerConfig, _Compiled, _newton_target, realSolutions, solveSystem

log = logging.getLogger(__name__)

DIRECT = "direct"
ORTHOSTOCHASTIC = "orthostochastic"


@dataclass
class TrivariateProblem:
    f: Polynomial  # homogeneous, f(1, 0, 0) = 1
    f_aff: Polynomial  # f(1, y, z)
    scale: float = 1.0

    @property
    def d(self):
        return self.f.degree()

    @property
    def names(self):
        return self.f.var_names

    def coeff(self, j, k):
        """Coefficient of ``y^j z^k`` in the affine polynomial."""
        return self.f_aff.coefficient((j, k)).real


@dataclass
class SpectraPair:
    lambda1: np.ndarray
    lambda2: np.ndarray


@dataclass
class DiagonalData:
    beta: np.ndarray  # diag(V^T D2 V)
    gamma: np.ndarray  # diag(V D1 V^T)
    unique: bool


@dataclass
class OrthostochasticCandidate:
    Q: np.ndarray
    preimages: list = field(default_factory=list)


def prepare(f: Polynomial, tol=DEFAULT_TOL) -> TrivariateProblem:
    """Normalize a ternary form so that ``f(1, 0, 0) = 1``."""
    if f.nvars != 3:
        raise ScopeError(f"expected a polynomial in 3 variables, got {f.nvars}")
    if not f.is_homogeneous():
        raise ScopeError("expected a homogeneous polynomial")
    d = f.degree()
    if d not in (2, 3, 4):
        raise ScopeError(f"degree {d} is not supported (only 2, 3 and 4)")
    if not f.is_real(tol):
        raise NotRealError("polynomial has non-real coefficients")
    lead = f.coefficient((d, 0, 0)).real
    if abs(lead) <= tol * (1 + f.max_coeff()):
        raise NormalizationError("f(1,0,0) = 0: no monic representation with respect to x")
    f = (f.real_part() / lead).with_names(f.var_names)
    return TrivariateProblem(f, dehomogenize(f, 0), lead)


def _eigenvalues_from_restriction(uni: Polynomial, d, tol):
    # det(I + y A) = sum e_k(lambda) y^k, so lambda are the roots of
    # t^d - e_1 t^(d-1) + e_2 t^(d-2) - ...; equivalently the negative
    # reciprocals of the roots of the restriction (zero roots allowed).
    c = np.array([uni.coefficient((k,)).real for k in range(d + 1)])
    monic = np.array([(-1) ** k * c[k] for k in range(d + 1)])
    roots = univariateRoots(monic, tol)
    bad = np.abs(roots.imag) > tol * (1 + np.abs(roots.real))
    if bad.any():
        raise NotHyperbolicError(
            f"restriction has non-real roots {roots[bad]}; no monic symmetric representation"
        )
    return np.sort(roots.real)[::-1]


def spectraFromRestrictions(prob: TrivariateProblem, tol=DEFAULT_TOL) -> SpectraPair:
    d = prob.d
    lam1 = _eigenvalues_from_restriction(restrict(prob.f_aff, 1, 0.0), d, tol)
    lam2 = _eigenvalues_from_restriction(restrict(prob.f_aff, 0, 0.0), d, tol)
    return SpectraPair(lam1, lam2)


def elementarySymmetricExcluding(lam, k, i):
    """``e_k`` of ``lam`` with entry ``i`` (1-based) left out."""
    lam = np.asarray(lam, dtype=float)
    if not 1 <= i <= len(lam):
        raise IndexError(f"index {i} outside 1..{len(lam)}")
    if not 0 <= k <= len(lam) - 1:
        raise ValueError(f"k={k} outside 0..{len(lam) - 1}")
    return elementary_symmetric(np.delete(lam, i - 1))[k]


def _blocks(lam, tol):
    """Group indices of (descending) ``lam`` into runs of equal values."""
    blocks = [[0]]
    for i in range(1, len(lam)):
        if abs(lam[i] - lam[blocks[-1][0]]) <= tol * (1 + abs(lam[i])):
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def _equalize_blocks(lam, tol):
    lam = np.array(lam, dtype=float)
    for b in _blocks(lam, tol):
        lam[b] = lam[b].mean()
    return lam


def solveDiagonal(lambda1, coeffs_linear, lambda2, tol=DEFAULT_TOL):
    """Diagonal of ``A2`` in the eigenbasis of ``A1``.

    ``coeffs_linear[k]`` is the coefficient of ``y^k z`` (k = 0..d-1).
    With repeated eigenvalues only block sums are determined; each block
    sum is split equally, which is always attainable by rotating inside
    the eigenspace.  Returns ``(beta, unique)``.
    """
    lam = np.asarray(lambda1, dtype=float)
    c = np.asarray(coeffs_linear, dtype=float)
    d = len(lam)
    M = np.array([[elementarySymmetricExcluding(lam, k, i + 1) for i in range(d)] for k in range(d)])
    blocks = _blocks(lam, tol)
    Mred = M[:, [b[0] for b in blocks]]
    s, *_ = np.linalg.lstsq(Mred, c, rcond=None)
    resid = np.abs(Mred @ s - c).max(initial=0.0)
    if resid > tol * (1 + np.abs(c).max(initial=0.0)):
        raise NotRepresentableError(
            f"diagonal system is inconsistent (residual {resid:.3g})", residual=float(resid)
        )
    beta = np.empty(d)
    for b, total in zip(blocks, s):
        beta[b] = total / len(b)
    if not isMajorized(beta, lambda2, tol):
        raise SelectionError(
            "diagonal is not majorized by the spectrum; no symmetric representation with this split",
            beta=beta.tolist(),
        )
    return beta, len(blocks) == d


def diagonalData(prob: TrivariateProblem, spectra: SpectraPair, tol=DEFAULT_TOL) -> DiagonalData:
    d = prob.d
    beta, u1 = solveDiagonal(
        spectra.lambda1, [prob.coeff(k, 1) for k in range(d)], spectra.lambda2, tol
    )
    gamma, u2 = solveDiagonal(
        spectra.lambda2, [prob.coeff(1, k) for k in range(d)], spectra.lambda1, tol
    )
    return DiagonalData(beta, gamma, u1 and u2)


# --- orthostochastic matrices ------------------------------------------------


def _sign_canonical(V, tol):
    """Representative of the row/column sign orbit of ``V``.

    Walks a spanning forest of the bipartite support graph (rows vs
    columns, edges at entries above ``tol``) from row 0 and flips signs
    so that every tree edge is positive.
    """
    V = np.array(V, dtype=float)
    n, m = V.shape
    rsign = np.zeros(n)
    csign = np.zeros(m)
    for root in range(n):
        if rsign[root]:
            continue
        rsign[root] = 1
        queue = [("r", root)]
        while queue:
            kind, i = queue.pop(0)
            if kind == "r":
                for j in range(m):
                    if not csign[j] and abs(V[i, j]) > tol:
                        csign[j] = np.sign(V[i, j]) * rsign[i]
                        queue.append(("c", j))
            else:
                for r in range(n):
                    if not rsign[r] and abs(V[r, i]) > tol:
                        rsign[r] = np.sign(V[r, i]) * csign[i]
                        queue.append(("r", r))
    csign[csign == 0] = 1
    return rsign[:, None] * V * csign[None, :]


def orthogonalFromOrthostochastic(A, tol=DEFAULT_TOL):
    """Orthogonal ``V`` with ``V * V = A``, one per row/column sign orbit."""
    A = np.asarray(A, dtype=float)
    if not isDoublyStochastic(A, tol):
        raise PredicateError("matrix is not doubly stochastic")
    d = A.shape[0]
    R = np.sqrt(np.clip(A, 0.0, None))
    reps = []
    inner = (d - 1) * (d - 1)
    for bits in range(1 << inner):
        S = np.ones((d, d))
        if inner:
            signs = np.array([1 - 2 * ((bits >> b) & 1) for b in range(inner)])
            S[1:, 1:] = signs.reshape(d - 1, d - 1)
        V = S * R
        if not isOrthogonal(V, tol):
            continue
        C = _sign_canonical(V, np.sqrt(tol) * 1e-3)
        if not any(np.abs(C - W).max() <= 10 * np.sqrt(tol) for W in reps):
            reps.append(C)
    return reps


def _heron(s, mul=np.multiply):
    """Polynomial in ``a_j^2 = s_j`` vanishing iff ``+-a1 +-a2 +-a3 = 0``.

    ``mul`` multiplies two ``s_j``; pass ``np.polymul`` when the ``s_j``
    are coefficient arrays.
    """
    s1, s2, s3 = s
    squares = np.polyadd(np.polyadd(mul(s1, s1), mul(s2, s2)), mul(s3, s3))
    cross = np.polyadd(np.polyadd(mul(s1, s2), mul(s1, s3)), mul(s2, s3))
    return np.polysub(squares, 2 * np.asarray(cross))


def _linear_Q_system(spectra: SpectraPair, diag: DiagonalData):
    """Affine constraints on ``Q = V * V`` (row index: D2, column: D1)."""
    l1, l2 = spectra.lambda1, spectra.lambda2
    d = len(l1)
    rows, rhs = [], []

    def add(coeffs, value):
        rows.append(coeffs.ravel())
        rhs.append(value)

    for k in range(d):
        e = np.zeros((d, d))
        e[k, :] = 1
        add(e, 1.0)
        e = np.zeros((d, d))
        e[:, k] = 1
        add(e, 1.0)
        e = np.zeros((d, d))
        e[k, :] = l1
        add(e, diag.gamma[k])
        e = np.zeros((d, d))
        e[:, k] = l2
        add(e, diag.beta[k])
    return np.array(rows), np.array(rhs)


def _orthostochastic_candidates(spectra, diag, tol):
    d = len(spectra.lambda1)
    M, rhs = _linear_Q_system(spectra, diag)
    q0, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    resid = np.abs(M @ q0 - rhs).max()
    if resid > tol * (1 + np.abs(rhs).max()):
        raise NotRepresentableError(f"linear constraints on V*V are inconsistent ({resid:.3g})")
    _, sv, Vt = np.linalg.svd(M)
    rank = int((sv > 1e-9 * sv[0]).sum())
    N = Vt[rank:].T  # null space, columns orthonormal
    dim = N.shape[1]
    lo, hi = -tol, 1 + tol

    def Qof(t):
        return (q0 + N @ np.atleast_1d(t)).reshape(d, d)

    if dim == 0:
        return [Qof(np.zeros(0))], dim

    if dim == 1:
        n1 = N[:, 0]
        # feasible interval for t from 0 <= q0 + t n <= 1
        tmin, tmax = -np.inf, np.inf
        for q, v in zip(q0, n1):
            if abs(v) < 1e-14:
                continue
            a, b = (lo - q) / v, (hi - q) / v
            tmin, tmax = max(tmin, min(a, b)), min(tmax, max(a, b))
        if tmin > tmax:
            raise NotRepresentableError("no doubly stochastic matrix meets the constraints")
        q0m, nm = q0.reshape(d, d), n1.reshape(d, d)
        s = [np.polymul([nm[0, j], q0m[0, j]], [nm[1, j], q0m[1, j]]) for j in range(d)]
        H = _heron(s, np.polymul)
        scale = max(np.abs(np.polyval(H, t)) for t in (tmin, tmax, 0.5 * (tmin + tmax))) + 1
        if np.abs(H).max() <= 1e-10 * (1 + max(np.abs(c).max() for c in s)) ** 2:
            ts = [tmin, 0.5 * (tmin + tmax), tmax]
        else:
            H = np.trim_zeros(np.where(np.abs(H) <= 1e-13 * np.abs(H).max(), 0.0, H), "f")
            roots = univariateRoots(H, tol) if len(H) > 1 else np.array([])
            ts = []
            for r in roots:
                if abs(r.imag) > np.sqrt(tol) * (1 + abs(r.real)):
                    continue
                t = _polish_root(H, r.real)
                if tmin - tol <= t <= tmax + tol and abs(np.polyval(H, t)) <= 1e-6 * scale:
                    ts.append(min(max(t, tmin), tmax))
        return [Qof(t) for t in ts], dim

    # higher-dimensional families: try the vertices of the polytope
    cands = []
    for zeros in itertools.combinations(range(d * d), dim):
        sub = N[list(zeros)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        t = np.linalg.solve(sub, -q0[list(zeros)])
        Q = Qof(t)
        if Q.min() < -tol or Q.max() > 1 + tol:
            continue
        s = [Q[0, j] * Q[1, j] for j in range(d)]
        if abs(_heron(s)[0]) > np.sqrt(tol):
            continue
        if not any(np.abs(Q - P).max() <= tol for P in cands):
            cands.append(Q)
    return cands, dim


def _polish_root(H, t):
    dH = np.polyder(H)
    for _ in range(5):
        der = np.polyval(dH, t)
        if der == 0:
            break
        step = np.polyval(H, t) / der
        if not np.isfinite(step) or abs(step) > 1e-3 * (1 + abs(t)):
            break
        t -= step
    return t


# --- pencils -----------------------------------------------------------------


def _sym_sign_canonical(B, tol):
    """Representative of ``{g B g}`` over sign matrices ``g``."""
    B = np.array(B, dtype=float)
    d = B.shape[0]
    sign = np.zeros(d)
    for root in range(d):
        if sign[root]:
            continue
        sign[root] = 1
        queue = [root]
        while queue:
            i = queue.pop(0)
            for j in range(d):
                if j != i and not sign[j] and abs(B[i, j]) > tol:
                    sign[j] = np.sign(B[i, j]) * sign[i]
                    queue.append(j)
    return sign[:, None] * B * sign[None, :]


def _same_orbit(B1, B2, tol):
    d = B1.shape[0]
    scale = 1 + max(np.abs(B1).max(), np.abs(B2).max())
    for bits in range(1 << (d - 1)):
        g = np.array([1.0] + [1 - 2 * ((bits >> b) & 1) for b in range(d - 1)])
        if np.abs(g[:, None] * B1 * g[None, :] - B2).max() <= tol * scale:
            return True
    return False


def _make_pencil(prob, D1, B):
    x, y, z = prob.names
    return MonicPencil([np.diag(D1), B], names=(y, z), hom_name=x, check_tol=1e-8)


def _direct_system(prob: TrivariateProblem, spectra: SpectraPair, beta):
    """Equations for the off-diagonal entries of ``B`` (i < j)."""
    d = prob.d
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    m = len(pairs)
    names = tuple(f"b{i + 1}{j + 1}" for i, j in pairs)
    B = [[Polynomial.constant(beta[i] if i == j else 0.0, m, names) for j in range(d)] for i in range(d)]
    for v, (i, j) in enumerate(pairs):
        B[i][j] = B[j][i] = Polynomial.variable(v, m, names)
    D1 = [[spectra.lambda1[i] if i == j else 0.0 for j in range(d)] for i in range(d)]
    eqs = []
    for k in range(2, d + 1):
        for j in range(0, d - k + 1):
            g = coefficientViaGMD([D1, B], [j, k]) - prob.coeff(j, k)
            eqs.append(_clean(g.real_part()).with_names(names))
    return PolySystem(eqs), pairs


def _clean(p: Polynomial, rel=1e-11):
    """Drop coefficients that are rounding noise relative to the largest."""
    cut = rel * p.max_coeff()
    return Polynomial({e: c for e, c in p.terms.items() if abs(c) > cut}, p.nvars, p.names)


def _real_refine(system: PolySystem, x0, iters=200):
    """Gauss-Newton in real arithmetic; copes with singular solutions."""
    F = _Compiled([eq / eq.max_coeff() for eq in system.equations])
    x = np.asarray(x0, dtype=float)
    for _ in range(iters):
        vals, J = F.values_and_jacobian(x[None].astype(complex))
        dx, *_ = np.linalg.lstsq(J[0].real, -vals[0].real, rcond=1e-12)
        if not np.all(np.isfinite(dx)):
            break
        x = x + dx
        if np.abs(dx).max() <= 1e-15 * (1 + np.abs(x).max()):
            break
    return x


def _assemble(pairs, beta, values):
    d = len(beta)
    B = np.diag(np.asarray(beta, dtype=float))
    for (i, j), v in zip(pairs, values):
        B[i, j] = B[j, i] = v
    return B


def _polish(system: PolySystem, pairs, B):
    """A few Newton steps on the direct system, kept only if it helps."""
    x0 = np.array([B[i, j] for i, j in pairs], dtype=complex)
    F = _Compiled([eq / eq.max_coeff() for eq in system.equations])
    x, _ = _newton_target(F, x0, iters=8)
    if not np.all(np.isfinite(x)) or np.abs(x.imag).max() > 1e-8:
        return B
    r0 = np.abs(system(x0)).max()
    r1 = np.abs(system(x)).max()
    if r1 < r0 and np.abs(x - x0).max() <= 1e-4 * (1 + np.abs(x0).max()):
        return _assemble(pairs, np.diag(B), x.real)
    return B


def _snap(prob, D1, B, res, tol):
    """Zero entries at noise level when that does not hurt the fit."""
    cut = 1e-5 * (1 + np.abs(B).max())
    small = (np.abs(B) < cut) & (B != 0)
    if not small.any():
        return B
    C = np.where(small, 0.0, B)
    ok, res2 = pencilMatches(prob.f, _make_pencil(prob, D1, C), tol)
    return C if ok and res2 <= max(10 * res, 1e-13) else B


def _collect(prob, D1, Bs, tol, system=None, pairs=None):
    """Verify, deduplicate and canonically order candidate ``B`` matrices."""
    out = []
    for B in Bs:
        B = (B + B.T) / 2
        if system is not None:
            B = _polish(system, pairs, B)
        pencil = _make_pencil(prob, D1, B)
        ok, res = pencilMatches(prob.f, pencil, tol)
        if not ok:
            log.debug("discarding candidate with residual %.3g", res)
            continue
        B = _snap(prob, D1, B, res, tol)
        if any(_same_orbit(B, P, 10 * tol) for P in out):
            continue
        out.append(B)
    out = [_sym_sign_canonical(B, np.sqrt(tol) * 1e-2) for B in out]
    out.sort(key=lambda B: tuple(np.round(B, 6).ravel()))
    return [_make_pencil(prob, D1, B) for B in out]


def cubicOrthostochasticReps(prob: TrivariateProblem, tol=DEFAULT_TOL):
    if prob.d != 3:
        raise StrategyError("the orthostochastic strategy only handles cubics")
    spectra = spectraFromRestrictions(prob, tol)
    spectra = SpectraPair(_equalize_blocks(spectra.lambda1, tol), _equalize_blocks(spectra.lambda2, tol))
    diag = diagonalData(prob, spectra, tol)
    Qs, _ = _orthostochastic_candidates(spectra, diag, tol)
    if not Qs:
        raise NotRepresentableError("no orthostochastic matrix satisfies the constraints")
    D2 = np.diag(spectra.lambda2)
    Bs = []
    found_v = False
    for Q in Qs:
        Q = np.clip(Q, 0.0, 1.0)
        try:
            Vs = orthogonalFromOrthostochastic(Q, tol)
        except PredicateError:
            continue
        found_v = found_v or bool(Vs)
        Bs.extend(V.T @ D2 @ V for V in Vs)
    if not found_v:
        raise DegenerateNumericsError(
            "no orthogonal matrix matches the candidate orthostochastic matrices; "
            "try a looser tolerance"
        )
    system, pairs = _direct_system(prob, spectra, diag.beta)
    pencils = _collect(prob, spectra.lambda1, Bs, tol, system, pairs)
    if not pencils:
        raise DegenerateNumericsError("candidate pencils failed verification; try a looser tolerance")
    return pencils


def directSystemReps(prob: TrivariateProblem, tol=DEFAULT_TOL, config: TrackerConfig | None = None,
                     return_solutions=False):
    spectra = spectraFromRestrictions(prob, tol)
    spectra = SpectraPair(_equalize_blocks(spectra.lambda1, tol), _equalize_blocks(spectra.lambda2, tol))
    diag = diagonalData(prob, spectra, tol)
    system, pairs = _direct_system(prob, spectra, diag.beta)
    log.info("Solving %d x %d polynomial system ...", system.n, system.n)
    sols = solveSystem(system, config)
    real = realSolutions(sols, tol)
    degenerate = not diag.unique or len(_blocks(spectra.lambda2, tol)) < prob.d
    if degenerate:
        # real points on positive-dimensional complex components are not
        # endpoints themselves; start real refinement from nearby endpoints
        real += [_real_refine(system, np.asarray(p).real) for p in sols.points]
    Bs = [_assemble(pairs, diag.beta, r) for r in real]
    pencils = _collect(prob, spectra.lambda1, Bs, tol, system, pairs)
    if not pencils:
        stats = sols.pathStats
        if stats.get("diverged", 0) == 0:
            raise NotRepresentableError(
                "all paths converged but no real solution gives a representation", stats=stats
            )
        raise TrackingFailure("no verified real solution; some paths failed", stats)
    if return_solutions:
        return pencils, sols
    return pencils


_STRATEGY_ALIASES = {"directsystem": DIRECT, "direct-system": DIRECT}


def trivariateDetRep(f: Polynomial, strategy=DIRECT, tol=DEFAULT_TOL, config=None):
    """All monic symmetric representations of a ternary form (degree 2-4).

    Returns a list of ``MonicPencil`` with ``A1`` diagonal, one per
    sign-conjugation class.  Quadrics are handed to the quadratic module.
    """
    strategy = _STRATEGY_ALIASES.get(strategy.lower(), strategy.lower())
    if strategy not in (DIRECT, ORTHOSTOCHASTIC):
        raise StrategyError(f"unknown strategy {strategy!r}")
    prob = prepare(f, tol)
    if prob.d == 2:
        from .quadratic import quadraticDetRep

        return [quadraticDetRep(prob.f, tol)]
    if strategy == ORTHOSTOCHASTIC:
        if prob.d != 3:
            raise StrategyError("the orthostochastic strategy only handles cubics")
        return cubicOrthostochasticReps(prob, tol)
    return directSystemReps(prob, tol, config)

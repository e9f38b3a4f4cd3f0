"""Small dense matrix utilities.

Matrices are plain numpy arrays.  Everything here is meant for the tiny
(d <= 8) matrices that show up in determinantal representations, so the
eigenvalue and root finders are written for clarity rather than speed.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DimensionError,
    NormalizationError,
    NotPSDError,
    NotRealError,
    SymmetryError,
)

DEFAULT_TOL = 1e-5


class EigenSym(NamedTuple):
    """Spectral decomposition ``A = vectors @ diag(values) @ vectors.T``."""

    values: np.ndarray
    vectors: np.ndarray


def _as_square(A, name="A"):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    return A


def _scale(A):
    return 1.0 + np.abs(A).sum(axis=1).max(initial=0.0)


def _check_symmetric(A, tol):
    if np.abs(A - A.T).max(initial=0.0) > tol * _scale(A):
        raise SymmetryError("matrix is not symmetric within tolerance")


def hadamard(A, B):
    """Entrywise product of two matrices of the same shape."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")
    return A * B


def pivoted_cholesky(A, tol=DEFAULT_TOL):
    """Cholesky with complete (diagonal) pivoting.

    Returns ``(F, perm, rank)`` where ``F`` is ``n x rank`` with
    ``F @ F.T ~= A`` and ``F[perm]`` lower trapezoidal.  Pivots at or
    below ``tol * scale`` are treated as zero.
    """
    A = np.array(_as_square(A), dtype=float)
    _check_symmetric(A, tol)
    n = A.shape[0]
    scale = _scale(A)
    S = (A + A.T) / 2
    perm = np.arange(n)
    F = np.zeros((n, n))
    rank = 0
    for k in range(n):
        diag = np.diag(S)[k:]
        j = k + int(np.argmax(diag))
        if diag[j - k] <= tol * scale:
            if diag.min() < -tol * scale:
                raise NotPSDError(f"negative pivot {diag.min():.3g} encountered")
            break
        if j != k:
            S[[k, j]] = S[[j, k]]
            S[:, [k, j]] = S[:, [j, k]]
            F[[k, j]] = F[[j, k]]
            perm[[k, j]] = perm[[j, k]]
        piv = np.sqrt(S[k, k])
        F[k, k] = piv
        F[k + 1:, k] = S[k + 1:, k] / piv
        S[k + 1:, k + 1:] -= np.outer(F[k + 1:, k], F[k + 1:, k])
        rank += 1
    out = np.zeros((n, rank))
    out[perm] = F[:, :rank]
    return out, perm, rank


def cholesky(A, tol=DEFAULT_TOL):
    """Lower-triangular ``L`` with ``L @ L.T == A`` for PSD ``A``.

    Semidefinite input is allowed: null directions become zero columns.
    The pivoted factor is rotated back to lower-triangular shape with a QR
    step, so for definite input this is the usual Cholesky factor.
    """
    A = np.asarray(_as_square(A), dtype=float)
    _check_symmetric(A, tol)
    n = A.shape[0]
    if n and symEigen(A, tol).values[-1] < -tol * _scale(A):
        raise NotPSDError("matrix has an eigenvalue below -tol")
    F, _, rank = pivoted_cholesky(A, tol)
    L = np.zeros((n, n))
    if rank == 0:
        return L
    # F = R^T Q^T with R upper trapezoidal, so R^T is lower trapezoidal.
    _, R = np.linalg.qr(F.T, mode="reduced")
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    R = signs[:, None] * R
    L[:, :rank] = R.T + 0.0  # no negative zeros
    return L


def companionMatrix(coeffs):
    """Companion matrix of a monic polynomial.

    ``coeffs`` lists the coefficients from the leading one down, as in
    ``numpy.roots``.  The result has ones on the subdiagonal and the
    negated low-order coefficients in the last column.
    """
    c = _coeff_array(coeffs)
    if len(c) < 2:
        raise DegenerateInputError("companion matrix needs degree >= 1")
    if c[0] != 1:
        raise NormalizationError(f"polynomial is not monic (leading coefficient {c[0]})")
    d = len(c) - 1
    dtype = complex if np.iscomplexobj(c) else float
    M = np.zeros((d, d), dtype=dtype)
    M[1:, :-1] = np.eye(d - 1)
    M[:, -1] = -c[:0:-1]
    return M


def _coeff_array(p):
    from .poly import Polynomial

    if isinstance(p, Polynomial):
        if p.nvars != 1:
            raise DimensionError("expected a univariate polynomial")
        c = p.univariate_coeffs()
    else:
        c = np.asarray(p)
    if np.iscomplexobj(c) and not np.any(c.imag):
        c = c.real
    return c


def symEigen(A, tol=DEFAULT_TOL, max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Eigenvalues are sorted in decreasing order; ``vectors`` holds the
    eigenvectors as columns.
    """
    A = np.array(_as_square(A), dtype=float)
    _check_symmetric(A, tol)
    n = A.shape[0]
    S = (A + A.T) / 2
    V = np.eye(n)
    total = np.sqrt((S * S).sum())
    for _ in range(max_sweeps):
        off = np.sqrt(2 * (np.triu(S, 1) ** 2).sum())
        if off <= 1e-15 * total or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = S[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (S[q, q] - S[p, p]) / (2 * apq)
                if abs(theta) > 1e150:
                    t = 1 / (2 * theta)  # theta^2 would overflow
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1)) if theta else 1.0
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                Sp, Sq = S[:, p].copy(), S[:, q].copy()
                S[:, p] = c * Sp - s * Sq
                S[:, q] = s * Sp + c * Sq
                Sp, Sq = S[p, :].copy(), S[q, :].copy()
                S[p, :] = c * Sp - s * Sq
                S[q, :] = s * Sp + c * Sq
                S[p, q] = S[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    else:
        raise ConvergenceError("Jacobi sweeps did not converge")
    values = np.diag(S).copy()
    order = np.argsort(-values, kind="stable")
    return EigenSym(values[order], V[:, order])


def _hessenberg_eigvals(H, max_iter):
    """Eigenvalues of an upper Hessenberg matrix by shifted complex QR."""
    H = np.array(H, dtype=complex)
    n = H.shape[0]
    eps = np.finfo(float).eps
    eigs = []
    hi = n - 1
    its = 0
    since_deflation = 0
    while hi >= 0:
        if hi == 0:
            eigs.append(H[0, 0])
            break
        lo = hi
        while lo > 0 and abs(H[lo, lo - 1]) > eps * (abs(H[lo, lo]) + abs(H[lo - 1, lo - 1])):
            lo -= 1
        if lo > 0:
            H[lo, lo - 1] = 0.0
        if lo == hi:
            eigs.append(H[hi, hi])
            hi -= 1
            since_deflation = 0
            continue
        its += 1
        since_deflation += 1
        if its > max_iter:
            raise ConvergenceError("QR iteration for polynomial roots did not converge")
        a, b, c, d = H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi]
        if since_deflation % 11 == 10:
            mu = d + 0.75 * abs(c) * np.exp(1j * since_deflation)
        else:
            half_tr = (a + d) / 2
            disc = np.sqrt(half_tr * half_tr - (a * d - b * c))
            mu1, mu2 = half_tr + disc, half_tr - disc
            mu = mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2
        B = H[lo:hi + 1, lo:hi + 1]
        m = B.shape[0]
        B -= mu * np.eye(m)
        rots = []
        for k in range(m - 1):
            x, y = B[k, k], B[k + 1, k]
            r = np.hypot(abs(x), abs(y))
            if r == 0.0:
                cs, sn = 1.0 + 0j, 0j
            else:
                cs, sn = x / r, y / r
            G = np.array([[np.conj(cs), np.conj(sn)], [-sn, cs]])
            B[k:k + 2, k:] = G @ B[k:k + 2, k:]
            rots.append(G)
        for k, G in enumerate(rots):
            top = min(k + 2, m - 1)
            B[:top + 1, k:k + 2] = B[:top + 1, k:k + 2] @ G.conj().T
        B += mu * np.eye(m)
    return np.array(eigs[::-1])


def univariateRoots(p, tol=DEFAULT_TOL):
    """All complex roots of a univariate polynomial, with multiplicity.

    ``p`` is a coefficient sequence (leading first) or a univariate
    ``Polynomial``.  Roots are eigenvalues of the companion matrix.  Each
    root is Newton polished; clusters of nearby roots (multiple roots
    smeared by rounding) are replaced by their mean.
    """
    c = np.asarray(_coeff_array(p), dtype=complex)
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        raise DegenerateInputError("zero polynomial has no well-defined roots")
    c = c[nz[0]:]
    d = len(c) - 1
    if d == 0:
        return np.array([], dtype=complex)
    monic = c / c[0]
    monic[0] = 1.0  # complex division need not give exactly 1
    roots = _hessenberg_eigvals(companionMatrix(monic), max_iter=100 * d)
    roots = _cluster_roots(roots, monic, tol)
    return roots[np.lexsort((roots.imag, -roots.real))]


def _cluster_roots(roots, monic, tol):
    d = len(roots)
    dp = np.polyder(monic)
    order = np.argsort(roots.real, kind="stable")
    roots = roots[order]
    # single-linkage clusters
    parent = list(range(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    radius = 10 * tol
    for i in range(d):
        for j in range(i + 1, d):
            if abs(roots[i] - roots[j]) <= radius * (1 + abs(roots[i])):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(d):
        groups.setdefault(find(i), []).append(i)
    out = np.empty(d, dtype=complex)
    for members in groups.values():
        z = roots[members].mean()
        if len(members) == 1:
            for _ in range(3):
                der = np.polyval(dp, z)
                if der == 0:
                    break
                step = np.polyval(monic, z) / der
                if not np.isfinite(step):
                    break
                z = z - step
                if abs(step) <= 1e-16 * (1 + abs(z)):
                    break
            if abs(np.polyval(monic, z)) > abs(np.polyval(monic, roots[members[0]])):
                z = roots[members[0]]
        out[members] = z
    return out


def isOrthogonal(A, tol=DEFAULT_TOL):
    A = _as_square(A)
    return bool(np.abs(A.T @ A - np.eye(A.shape[0])).max(initial=0.0) <= tol)


def isDoublyStochastic(A, tol=DEFAULT_TOL):
    A = _as_square(A)
    if np.iscomplexobj(A):
        return False
    return bool(
        A.min(initial=0.0) >= -tol
        and np.all(np.abs(A.sum(axis=0) - 1) <= tol)
        and np.all(np.abs(A.sum(axis=1) - 1) <= tol)
    )


def isMajorized(v, w, tol=DEFAULT_TOL):
    """True if ``v`` is majorized by ``w``."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape:
        raise DimensionError(f"length mismatch: {v.shape} vs {w.shape}")
    if abs(v.sum() - w.sum()) > tol * (1 + np.abs(w).sum()):
        return False
    pv = np.cumsum(np.sort(v)[::-1])
    pw = np.cumsum(np.sort(w)[::-1])
    return bool(np.all(pv <= pw + tol * (1 + np.abs(pw))))


def _check_n(n):
    if n < 1:
        raise DimensionError(f"matrix size must be >= 1, got {n}")


def randomIntegerSymmetric(n, bound=20, rng=None):
    """Symmetric matrix with integer entries drawn from ``[0, bound)``."""
    _check_n(n)
    rng = np.random.default_rng(rng)
    M = rng.integers(0, bound, size=(n, n))
    M = np.triu(M) + np.triu(M, 1).T
    return M.astype(float)


def randomOrthogonal(n, rng=None):
    """Haar-distributed orthogonal matrix (QR of a Gaussian, sign fixed)."""
    _check_n(n)
    rng = np.random.default_rng(rng)
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.where(np.diag(R) < 0, -1.0, 1.0)


def randomPSD(n, rng=None, rank=None):
    """Random symmetric positive semidefinite matrix of the given rank."""
    _check_n(n)
    rng = np.random.default_rng(rng)
    rank = n if rank is None else rank
    Q = randomOrthogonal(n, rng)
    ev = np.zeros(n)
    ev[:rank] = rng.uniform(0.1, 10.0, size=rank)
    M = (Q * ev) @ Q.T
    return (M + M.T) / 2


def randomUnipotent(n, bound=10, rng=None):
    """Upper unitriangular matrix with integer entries above the diagonal."""
    _check_n(n)
    rng = np.random.default_rng(rng)
    M = np.triu(rng.integers(-bound + 1, bound, size=(n, n)), 1).astype(float)
    return M + np.eye(n)


def liftRealMatrix(C, tol=DEFAULT_TOL):
    """Drop negligible imaginary parts; complain about large ones."""
    C = np.asarray(C)
    if not np.iscomplexobj(C):
        return C.astype(float)
    worst = np.abs(C.imag).max(initial=0.0)
    if worst > tol:
        raise NotRealError(f"imaginary part {worst:.3g} exceeds tolerance {tol:g}")
    return C.real.copy()


def roundMatrix(A, k):
    """Round entries to ``k`` decimal places, as exact ``Fraction`` values.

    Rounding goes through the shortest decimal representation of each
    float, so ``0.125`` rounds to ``0.12`` at ``k=2`` (half-even).
    """
    A = np.asarray(A, dtype=float)
    q = Decimal(1).scaleb(-k)
    out = np.empty(A.shape, dtype=object)
    for idx, x in np.ndenumerate(A):
        out[idx] = Fraction(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_EVEN))
    return out


def matrix_to_json(A):
    """Array-of-rows form; exact rationals become ``{"num", "den"}`` pairs."""
    A = np.asarray(A)
    if A.dtype == object:
        return [[{"num": x.numerator, "den": x.denominator} for x in row] for row in A]
    if np.iscomplexobj(A):
        return {"re": A.real.tolist(), "im": A.imag.tolist()}
    return np.asarray(A, dtype=float).tolist()


def matrix_from_json(obj):
    if isinstance(obj, dict):
        return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    rows = list(obj)
    if rows and rows[0] and isinstance(rows[0][0], dict):
        return np.array([[Fraction(x["num"], x["den"]) for x in row] for row in rows], dtype=object)
    A = np.asarray(rows, dtype=float)
    if A.ndim != 2 and A.size:
        raise DimensionError("matrix JSON must be an array of rows")
    if not np.all(np.isfinite(A)):
        raise DimensionError("matrix entries must be finite")
    return A.reshape(len(rows), -1) if A.size else A


def elementary_symmetric(values: Sequence[float]):
    """Return ``[e_0, e_1, ..., e_n]`` of the given values."""
    e = np.zeros(len(values) + 1, dtype=np.result_type(np.asarray(values), float))
    e[0] = 1
    for v in values:
        e[1:] = e[1:] + v * e[:-1]
    return e

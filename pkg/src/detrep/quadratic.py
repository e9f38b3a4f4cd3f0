"""Monic determinantal representations of quadrics.

Write the (normalized) quadric as ``f = x^T A x + b^T x + 1`` and set
``W = A - b b^T / 4``.  A representation exists iff

1. ``W`` is negative semidefinite of rank <= 3, or
2. ``A`` is negative semidefinite.

Case 1 gives a 2x2 pencil (symmetric for rank <= 2, Hermitian for rank
3); case 2 gives a bordered symmetric pencil of size ``rank(A) + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoRepresentationError, NormalizationError, NotRealError, ScopeError
from .linalg import DEFAULT_TOL, pivoted_cholesky, symEigen
from .poly import MAX_PENCIL_SIZE, MonicPencil, Polynomial, dehomogenize, pencil_value, pencilMatches


@dataclass
class QuadraticData:
    A: np.ndarray
    b: np.ndarray
    names: tuple
    hom_name: str = "x0"

    @property
    def n(self):
        return len(self.b)

    @property
    def W(self):
        return self.A - np.outer(self.b, self.b) / 4


def extractQuadraticData(f: Polynomial, tol=DEFAULT_TOL) -> QuadraticData:
    """Read off ``A`` and ``b`` after scaling the constant term to 1.

    A homogeneous quadric without constant term is first dehomogenized in
    its first variable.
    """
    if f.degree() > 2:
        raise ScopeError(f"expected degree <= 2, got {f.degree()}")
    hom_name = "x0"
    c = f.constant_term()
    if c == 0 and f.degree() == 2 and f.is_homogeneous() and f.nvars >= 2:
        hom_name = f.var_names[0]
        f = dehomogenize(f, 0)
        c = f.constant_term()
    if abs(c) == 0:
        raise NormalizationError("constant term is zero; cannot normalize to a monic pencil")
    f = f / c
    if not f.is_real(tol):
        raise NotRealError("quadric has non-real coefficients")
    n = f.nvars
    A = np.zeros((n, n))
    b = np.zeros(n)
    for exp, coef in f.terms.items():
        nz = [i for i, e in enumerate(exp) if e]
        if sum(exp) == 1:
            b[nz[0]] = coef.real
        elif sum(exp) == 2 and len(nz) == 1:
            A[nz[0], nz[0]] = coef.real
        elif sum(exp) == 2:
            i, j = nz
            A[i, j] = A[j, i] = coef.real / 2
    return QuadraticData(A, b, f.var_names, hom_name)


def _neg_factor(M, tol):
    """``F`` with ``F @ F.T = -M`` for negative semidefinite ``M``.

    Returns ``None`` if ``M`` is not NSD at the scaled tolerance, plus the
    eigenvalues used for the decision.
    """
    eig = symEigen(M, tol)
    scale = 1 + np.abs(M).sum(axis=1).max(initial=0.0)
    if eig.values.max(initial=0.0) > tol * scale:
        return None, eig.values
    keep = eig.values < -tol * scale
    F = eig.vectors[:, keep] * np.sqrt(-eig.values[keep])
    return F, eig.values


def _size2_pencil(data: QuadraticData, F):
    b = data.b
    u = F[:, 0] if F.shape[1] > 0 else np.zeros(data.n)
    r = F[:, 1] if F.shape[1] > 1 else np.zeros(data.n)
    s = F[:, 2] if F.shape[1] > 2 else None
    mats = []
    for i in range(data.n):
        off = r[i] if s is None else r[i] + 1j * s[i]
        mats.append([[b[i] / 2 + u[i], off], [np.conj(off), b[i] / 2 - u[i]]])
    return MonicPencil(mats, hermitian=s is not None, names=data.names, hom_name=data.hom_name)


def _bordered_pencil(data: QuadraticData, L):
    r = L.shape[1]
    mats = []
    for i in range(data.n):
        M = np.zeros((r + 1, r + 1))
        M[:r, r] = L[i]
        M[r, :r] = L[i]
        M[r, r] = data.b[i]
        mats.append(M)
    return MonicPencil(mats, names=data.names, hom_name=data.hom_name)


def _verify(f_norm: Polynomial, pencil: MonicPencil, tol, rng_seed=0):
    if pencil.size <= MAX_PENCIL_SIZE:
        return pencilMatches(f_norm, pencil, tol)
    # too large to expand symbolically; compare values at random points
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    scale = 1 + f_norm.max_coeff()
    for _ in range(20):
        x = rng.uniform(-1, 1, size=pencil.nvars)
        worst = max(worst, abs(np.linalg.det(pencil_value(pencil, x)) - f_norm(x)) / scale)
    return worst <= tol, float(worst)


def quadraticDetRep(f: Polynomial, tol=DEFAULT_TOL, allow_hermitian=True) -> MonicPencil:
    """Monic determinantal representation of a quadric.

    Preference order: 2x2 symmetric (W NSD, rank <= 2), bordered symmetric
    (A NSD), 2x2 Hermitian (W NSD, rank 3).  Raises
    ``NoRepresentationError`` carrying the offending eigenvalues when no
    case applies.
    """
    data = extractQuadraticData(f, tol)
    f_norm = _normalized(f, data)
    FW, evW = _neg_factor(data.W, tol)
    FA, evA = _neg_factor(data.A, tol)

    candidates = []
    if FW is not None and FW.shape[1] <= 2:
        candidates.append(lambda: _size2_pencil(data, FW))
    if FA is not None:
        candidates.append(lambda: _bordered_pencil(data, _bordered_factor(data.A, tol)))
    if FW is not None and FW.shape[1] == 3 and allow_hermitian:
        candidates.append(lambda: _size2_pencil(data, FW))
    if not candidates:
        raise NoRepresentationError(
            "no monic determinantal representation: W is not NSD of rank <= 3 and A is not NSD",
            W_eigenvalues=evW.tolist(),
            A_eigenvalues=evA.tolist(),
        )
    worst = None
    for build in candidates:
        pencil = build()
        ok, res = _verify(f_norm, pencil, tol)
        if ok:
            return pencil
        worst = res if worst is None else min(worst, res)
    from .errors import DegenerateNumericsError

    raise DegenerateNumericsError(f"constructed pencil fails verification (residual {worst:.3g})")


def _bordered_factor(A, tol):
    F, _, rank = pivoted_cholesky(-A, tol)
    return F[:, :rank]


def _normalized(f: Polynomial, data: QuadraticData):
    if f.constant_term() == 0 and f.nvars == data.n + 1:
        f = dehomogenize(f, 0)
    return (f / f.constant_term()).with_names(data.names)

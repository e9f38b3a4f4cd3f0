"""Generalized mixed discriminants.

For matrices ``A_1..A_m`` taken with multiplicities ``k_1..k_m`` the
generalized mixed discriminant is the coefficient of
``x_1^k_1 ... x_m^k_m`` in ``det(I + sum x_i A_i)``.  It is computed here
directly from its combinatorial definition: sum over principal index
sets ``alpha`` of size ``k = sum k_i`` and over distinct arrangements of
the multiset of matrix labels, of the ``k x k`` determinant whose row
``t`` is taken from the matrix labelled ``sigma(t)``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .poly import Polynomial, determinant


def multiset_permutations(seq):
    """Distinct permutations of ``seq`` in lexicographic order."""
    a = sorted(seq)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def _one_for(mats):
    for M in mats:
        for row in M:
            for x in row:
                if isinstance(x, Polynomial):
                    return Polynomial.constant(1.0, x.nvars)
    return None


def generalizedMixedDiscriminant(matrices: Sequence, multiplicities: Sequence[int] | None = None):
    """Generalized mixed discriminant of ``matrices`` repeated per ``multiplicities``.

    Entries may be numbers or ``Polynomial`` objects (the result is then a
    Polynomial).  ``multiplicities`` defaults to one copy of each matrix.
    """
    mats = list(matrices)
    if multiplicities is None:
        multiplicities = [1] * len(mats)
    if len(multiplicities) != len(mats):
        raise DimensionError("one multiplicity per matrix is required")
    if any(k < 0 for k in multiplicities):
        raise DimensionError("multiplicities must be nonnegative")
    sizes = {(len(M), len(M[0]) if len(M) else 0) for M in mats}
    if len(sizes) > 1:
        raise DimensionError(f"matrices have different shapes: {sorted(sizes)}")
    n, ncols = sizes.pop() if sizes else (0, 0)
    if n != ncols:
        raise DimensionError("matrices must be square")
    k = sum(multiplicities)
    if k > n:
        raise DimensionError(f"total multiplicity {k} exceeds matrix size {n}")
    one = _one_for(mats)
    symbolic = one is not None
    if symbolic:
        nv = one.nvars
        mats = [
            [[x if isinstance(x, Polynomial) else Polynomial.constant(complex(x), nv) for x in row]
             for row in M]
            for M in mats
        ]
    else:
        mats = [np.asarray(M, dtype=np.result_type(np.asarray(M), float)) for M in mats]
    labels = [i for i, ki in enumerate(multiplicities) for _ in range(ki)]
    if k == 0:
        return one if symbolic else 1.0

    total = None
    for alpha in combinations(range(n), k):
        for sigma in multiset_permutations(labels):
            if symbolic:
                rows = [[mats[sigma[t]][alpha[t]][c] for c in alpha] for t in range(k)]
                term = determinant(rows, one)
            else:
                sub = np.array([mats[sigma[t]][alpha[t], list(alpha)] for t in range(k)])
                term = np.linalg.det(sub) if k > 1 else sub[0, 0]
            total = term if total is None else total + term
    return total


def coefficientViaGMD(matrices: Sequence, exponents: Sequence[int]):
    """Coefficient of ``x^exponents`` in ``det(I + sum x_i A_i)``."""
    if len(exponents) != len(matrices):
        raise DimensionError("one exponent per matrix is required")
    pairs = [(M, k) for M, k in zip(matrices, exponents) if k]
    if not pairs:
        return generalizedMixedDiscriminant([matrices[0]], [0]) if len(matrices) else 1.0
    mats, ks = zip(*pairs)
    return generalizedMixedDiscriminant(mats, ks)

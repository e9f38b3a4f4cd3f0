#!/usr/bin/env python3
"""A quadric in four variables and its 2x2 pencil.

Write f = x^T A x + b^T x + 1.  A monic symmetric pencil exists when
W = A - b b^T / 4 is negative semidefinite of low rank, or when A itself
is negative semidefinite.  This walks through both checks.
"""
import numpy as np

from detrep import parsePolynomial, pencilMatches, quadraticDetRep
from detrep.errors import NoRepresentationError
from detrep.quadratic import extractQuadraticData

f = parsePolynomial(
    "-25*x_1^2 + 254*x_1*x_2 + 243*x_2^2 + 234*x_1*x_3 + 494*x_2*x_3 + 247*x_3^2"
    " + 198*x_1*x_4 + 378*x_2*x_4 + 378*x_3*x_4 + 143*x_4^2 + 18*x_1 + 32*x_2 + 32*x_3 + 24*x_4 + 1"
)
print("f =", f)

data = extractQuadraticData(f)
print("\n(1) eigenvalues of A:", np.round(np.linalg.eigvalsh(data.A), 4))
print("    eigenvalues of W:", np.round(np.linalg.eigvalsh(data.W), 4))
print("    W is negative semidefinite of rank 2, so a 2x2 pencil exists.")

pencil = quadraticDetRep(f)
print("\n(2) the pencil:")
print(pencil.format(homogeneous=False))
ok, res = pencilMatches(f, pencil, 1e-9)
print(f"    determinant matches f: {ok} (residual {res:.2e})")
print("    traces:", [round(float(np.trace(A)), 6) for A in pencil.matrices])

print("\n(3) a quadric where both tests fail:")
try:
    quadraticDetRep(parsePolynomial("1 + x^2"))
except NoRepresentationError as exc:
    print("   ", exc)
    print("    W eigenvalues", exc.details["W_eigenvalues"], "A eigenvalues", exc.details["A_eigenvalues"])

print("\n(4) 1 - x1^2 - x2^2 - x3^2 has A = -I, giving a bordered 4x4 pencil:")
print(quadraticDetRep(parsePolynomial("1 - x1^2 - x2^2 - x3^2")).format(digits=3, homogeneous=False))

#!/usr/bin/env python3
"""Symmetric pencils for two plane cubics, by two routes.

The first cubic is generic and has two pencils up to sign conjugation.
The second has repeated eigenvalues in both restrictions, which makes
the polynomial system degenerate.  Both routes still find the diagonal
pencil.
"""
import time

from detrep import parsePolynomial, pencilMatches, spectraFromRestrictions, prepare, trivariateDetRep

XYZ = ("x", "y", "z")
f = parsePolynomial(
    "x^3 + 30*x^2*y - 241*x*y^2 - 3918*y^3 + 38*x^2*z + 52*x*y*z + 768*y^2*z"
    " - 34*x*z^2 + 3282*y*z^2 - 2278*z^3",
    XYZ,
)
g = parsePolynomial("x^3+7*x^2*y+16*x*y^2+12*y^3+3*x^2*z+22*x*y*z+32*y^2*z-45*x*z^2-65*y*z^2-175*z^3", XYZ)

for label, h in (("generic cubic", f), ("degenerate cubic", g)):
    s = spectraFromRestrictions(prepare(h))
    print(f"== {label}: eigenvalues {s.lambda1.round(5)} and {s.lambda2.round(5)}")
    for strategy in ("orthostochastic", "direct"):
        t0 = time.perf_counter()
        reps = trivariateDetRep(h, strategy)
        dt = time.perf_counter() - t0
        print(f"-- {strategy}: {len(reps)} pencil(s) in {dt:.3f}s")
        for p in reps:
            print(p.format())
            print(f"   residual {pencilMatches(h, p, 1e-9)[1]:.1e}")
    print()

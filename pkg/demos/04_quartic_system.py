#!/usr/bin/env python3
"""The 6x6 polynomial system behind a plane quartic.

f = det(x I + y diag(4,3,2,1) + z S) for a seeded integer symmetric S.
The unknowns are the six off-diagonal entries of S in the eigenbasis of
diag(4,3,2,1); total-degree homotopy tracks all 288 start paths.
"""
import time
from itertools import product

import numpy as np

from detrep import MonicPencil, pencilDeterminant, pencilMatches, prepare, randomIntegerSymmetric, realSolutions
from detrep.trivariate import directSystemReps

S = randomIntegerSymmetric(4, rng=np.random.default_rng(0))
f = pencilDeterminant(MonicPencil([np.diag([4.0, 3, 2, 1]), S], names=("y", "z"), hom_name="x"), homogeneous=True)
print("S =\n", S)
print("f =", f)

t0 = time.perf_counter()
reps, sols = directSystemReps(prepare(f), return_solutions=True)
print(f"\npaths: {sols.pathStats}  ({time.perf_counter() - t0:.1f}s)")
print(f"complex solutions {len(sols)}, real {len(realSolutions(sols, 1e-5))}")
print(f"real solutions fall into {len(reps)} classes under sign conjugation:")
for p in reps:
    ok, res = pencilMatches(f, p, 1e-7)
    print(f"  off-diagonal {np.round(p.matrices[1][np.triu_indices(4, 1)], 4)}  residual {res:.1e}")
signs = [np.array((1.0, *s)) for s in product((1.0, -1.0), repeat=3)]
found = any(np.allclose(g[:, None] * p.matrices[1] * g[None, :], S, atol=1e-6) for p in reps for g in signs)
print("\nthe planted S is among them, up to sign conjugation:", found)

"""Monic determinantal representations of real polynomials.

Quadrics in any number of variables, plane cubics and quartics, the
generalized mixed discriminant, and a small homotopy solver.
"""

from .errors import (
    DetRepError,
    NoRepresentationError,
    NotHyperbolicError,
    NotRepresentableError,
    NumericalFailure,
    SelectionError,
)
from .gmd import coefficientViaGMD, generalizedMixedDiscriminant
from .linalg import (
    DEFAULT_TOL,
    cholesky,
    companionMatrix,
    hadamard,
    isDoublyStochastic,
    isMajorized,
    isOrthogonal,
    liftRealMatrix,
    randomIntegerSymmetric,
    randomOrthogonal,
    randomPSD,
    randomUnipotent,
    roundMatrix,
    symEigen,
    univariateRoots,
)
from .poly import (
    MonicPencil,
    Polynomial,
    dehomogenize,
    formatPolynomial,
    homogenize,
    parsePolynomial,
    pencilDeterminant,
    pencilMatches,
    restrict,
)
from .psolve import PolySystem, SolutionSet, TrackerConfig, realSolutions, solveSystem, totalDegreeStart, trackPath
from .quadratic import extractQuadraticData, quadraticDetRep
from .trivariate import (
    cubicOrthostochasticReps,
    directSystemReps,
    orthogonalFromOrthostochastic,
    prepare,
    spectraFromRestrictions,
    trivariateDetRep,
)

__version__ = "0.1.0"

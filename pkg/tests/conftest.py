import numpy as np
import pytest

from detrep import parsePolynomial

# worked-session inputs
QUADRIC_TEXT = (
    "-25*x_1^2 + 254*x_1*x_2 + 243*x_2^2 + 234*x_1*x_3 + 494*x_2*x_3 + 247*x_3^2"
    " + 198*x_1*x_4 + 378*x_2*x_4 + 378*x_3*x_4 + 143*x_4^2 + 18*x_1 + 32*x_2 + 32*x_3 + 24*x_4 + 1"
)
CUBIC_TEXT = (
    "x^3 + 30*x^2*y - 241*x*y^2 - 3918*y^3 + 38*x^2*z + 52*x*y*z + 768*y^2*z"
    " - 34*x*z^2 + 3282*y*z^2 - 2278*z^3"
)
DEGENERATE_CUBIC_TEXT = (
    "x^3+7*x^2*y+16*x*y^2+12*y^3+3*x^2*z+22*x*y*z+32*y^2*z-45*x*z^2-65*y*z^2-175*z^3"
)
XYZ = ("x", "y", "z")


@pytest.fixture
def quadric():
    return parsePolynomial(QUADRIC_TEXT)


@pytest.fixture
def cubic():
    return parsePolynomial(CUBIC_TEXT, XYZ)


@pytest.fixture
def degenerate_cubic():
    return parsePolynomial(DEGENERATE_CUBIC_TEXT, XYZ)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

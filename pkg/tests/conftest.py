from fractions import Fraction

import pytest

SWEEP_R = [2, -2, 3, -3, 5, 8, -8, 27, -27, -4, -64, Fraction(6, 5), Fraction(-9, 4)]


@pytest.fixture(scope="session")
def sweep_r():
    return SWEEP_R

import random
from fractions import Fraction

import pytest

from chabauty_bounds.newton import ValuationSeries

SAMPLE_TERMS = {
    -7: Fraction(7, 2), -6: 2, -5: 3, -4: 1, -3: 2,
    -2: Fraction(3, 2), -1: 3, 0: 2, 1: Fraction(-1, 2),
}


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture
def sample_annulus():
    return ValuationSeries(3, SAMPLE_TERMS, 1)


@pytest.fixture
def cubic_disc():
    return ValuationSeries(3, {1: 0, 3: -1})

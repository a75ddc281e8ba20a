from fractions import Fraction
from pathlib import Path
import random

import pytest

from exset.scalars import GaussRat, PiExpr
from exset.selectors import Policy
from exset.steering import run

FIXTURES = Path(__file__).parent / "fixtures"


def g(re, im=0):
    return GaussRat(Fraction(re), Fraction(im))


def pt(*cs):
    return tuple(c if isinstance(c, GaussRat) else g(c) for c in cs)


def random_points(m, n, seed, den=8, span=2):
    """n distinct full-support Gaussian-rational points with denominators <= den."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        coords = []
        for _ in range(m):
            while True:
                c = g(Fraction(rng.randint(-span * den, span * den), rng.randint(1, den)),
                      Fraction(rng.randint(-span * den, span * den), rng.randint(1, den)))
                if c:
                    break
            coords.append(c)
        u = tuple(coords)
        if u not in out:
            out.append(u)
    return out


def walkthrough_state(seed=1):
    return run([pt(1), pt(2)], [PiExpr([1]), PiExpr([1])], seed=seed,
               policy=Policy.SMALLEST_DENOMINATOR)


@pytest.fixture
def walkthrough():
    return walkthrough_state()

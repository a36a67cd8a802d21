import random
from fractions import Fraction

import pytest

from bundle_forge.exact_ring import GaussianRational, XPoly, ZPoly


def random_coeff(rng: random.Random) -> GaussianRational:
    return GaussianRational(
        Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
        Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
    )


def random_xpoly(rng: random.Random, max_degree: int = 6, nterms: int = 4) -> XPoly:
    terms = {}
    for _ in range(nterms):
        a = rng.randint(0, max_degree)
        b = rng.randint(0, max_degree - a)
        c = rng.randint(0, max_degree - a - b)
        terms[(a, b, c)] = random_coeff(rng)
    return XPoly(terms)


def random_zpoly(rng: random.Random, max_degree: int = 4, nterms: int = 4) -> ZPoly:
    terms = {}
    for _ in range(nterms):
        remaining = max_degree
        expo = []
        for _ in range(4):
            e = rng.randint(0, remaining)
            expo.append(e)
            remaining -= e
        terms[tuple(expo)] = random_coeff(rng)
    return ZPoly(terms)


@pytest.fixture
def rng():
    return random.Random(20260823)

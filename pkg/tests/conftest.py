"""Shared operand generators for the operator tests.

All randomness is seeded per test so failures replay; operands are generated
inside each operator's documented precondition region (see sdengine.online).
"""

import random
from fractions import Fraction

import pytest

from sdengine import rational_to_digit_stream, value_of


def random_fraction(rng, bound, denom_bits=24):
    """Uniform-ish Fraction with |r| <= bound (a Fraction)."""
    q = 1 << denom_bits
    lim = int(Fraction(bound) * q)
    return Fraction(rng.randint(-lim, lim), q)


def _streams(rng, bx, by, n):
    x = list(rational_to_digit_stream(random_fraction(rng, bx), n))
    y = list(rational_to_digit_stream(random_fraction(rng, by), n))
    # the exact values are those of the truncated streams, so short streams
    # (n below the generator's denominator bits) stay self-consistent
    return x, y, value_of(x), value_of(y)


def add_operands(rng, n):
    """Digit-stream pair safe for the adders: both values in (-1/2, 1/2)."""
    x, y, xv, yv = _streams(rng, Fraction(7, 16), Fraction(7, 16), n)
    return x, y, xv + yv


def mul_operands(rng, n):
    """Pair with |x|, |y| <= 13/16 so every prefix product stays <= 3/4."""
    x, y, xv, yv = _streams(rng, Fraction(13, 16), Fraction(13, 16), n)
    return x, y, xv * yv


def div_operands(rng, n, margin=Fraction(0)):
    """Pair with divisor y in [1/2 + margin, 15/16] and |x| <= y - 1/4 - margin."""
    lo = Fraction(1, 2) + margin
    span = Fraction(15, 16) - lo
    y = lo + span / 2 + random_fraction(rng, span) / 2
    x = random_fraction(rng, y - Fraction(1, 4) - margin)
    xs = list(rational_to_digit_stream(x, n))
    ys = list(rational_to_digit_stream(y, n))
    return xs, ys, value_of(xs) / value_of(ys)


@pytest.fixture
def rng():
    return random.Random(0xA5D1)

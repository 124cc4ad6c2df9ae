import random
from fractions import Fraction

import pytest

from ietlib import IET, Scalar, is_irreducible, parse_scalar

# (phi - 1, 2 - phi): rotation by 2 - phi on [0, 1)
GOLDEN_LENGTHS = ("-1/2+1/2*sqrt(5)", "3/2-1/2*sqrt(5)")

# quadratic 4-IET with the reversal permutation; passes check_idoc to 10^4
QUAD4_LENGTHS = ("13/64-3/64*sqrt(2)", "9/32+1/64*sqrt(2)",
                 "11/32+1/64*sqrt(2)", "11/64+1/64*sqrt(2)")


@pytest.fixture(scope="session")
def golden() -> IET:
    return IET([parse_scalar(s) for s in GOLDEN_LENGTHS], [2, 1])


@pytest.fixture(scope="session")
def rot25() -> IET:
    """Rational rotation by 2/5; periodic, the standard negative control."""
    return IET([Scalar(Fraction(3, 5)), Scalar(Fraction(2, 5))], [2, 1])


@pytest.fixture(scope="session")
def quad4() -> IET:
    return IET([parse_scalar(s) for s in QUAD4_LENGTHS], [4, 3, 2, 1])


def rand_rational_iet(rng: random.Random, r: int | None = None,
                      denominator: int = 999983) -> IET:
    """Random exact-rational IET with an irreducible permutation."""
    r = r or rng.choice([2, 3, 4])
    while True:
        perm = list(range(1, r + 1))
        rng.shuffle(perm)
        if is_irreducible(perm):
            break
    cuts = sorted(rng.sample(range(1, denominator), r - 1))
    lengths = [Scalar(Fraction(b - a, denominator))
               for a, b in zip([0] + cuts, cuts + [denominator])]
    return IET(lengths, perm)


def frac(num, den=1) -> Scalar:
    return Scalar(Fraction(num, den))

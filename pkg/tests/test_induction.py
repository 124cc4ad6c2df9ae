import random
from fractions import Fraction

import pytest

from ietlib import (
    Scalar,
    StepCapExceeded,
    induce,
    parse_scalar,
    return_time,
)
from conftest import frac, rand_rational_iet


def test_golden_renormalization(golden):
    # inducing the golden rotation on [0, 2-phi) gives back a 2-IET
    a = parse_scalar("3/2-1/2*sqrt(5)")
    ind = induce(golden, a)
    assert ind.s == 2
    assert sorted(p.return_time for p in ind.pieces) == [2, 3]


def test_golden_half_has_three_pieces(golden):
    ind = induce(golden, frac(1, 2))
    assert ind.s == 3
    assert {p.return_time for p in ind.pieces} == {1, 2, 3}


def test_induce_full_interval_is_identity_return(golden, quad4):
    for f in (golden, quad4):
        ind = induce(f, f.b)
        assert ind.s == f.r
        assert all(p.return_time == 1 for p in ind.pieces)
        assert [p.translation for p in ind.pieces] == list(f.translations)


def test_pieces_partition_and_land_inside(golden):
    t = frac(2, 7)
    ind = induce(golden, t)
    cur = Scalar(0)
    for p in ind.pieces:
        assert p.interval.lo == cur
        cur = p.interval.hi
        # the translated piece lies back inside [0, t)
        assert (p.interval.lo + p.translation).sign() >= 0
        assert not t < p.interval.hi + p.translation
    assert cur == t


def test_induced_evaluate_matches_first_return_oracle(golden, quad4):
    rng = random.Random(5)
    for f, t in ((golden, frac(1, 2)), (golden, frac(2, 7)), (quad4, frac(3, 8))):
        ind = induce(f, t)
        for _ in range(100):
            x = frac(rng.randint(0, 10**6 - 1), 10**6) * t
            m = return_time(f, t, x)
            assert ind.return_time_at(x) == m
            assert ind.evaluate(x) == f.iterate(x, m)


def test_return_time_basics(golden):
    assert return_time(golden, golden.b, frac(1, 3)) == 1
    x = frac(9, 10)
    t = frac(19, 20)
    if golden.evaluate(x) < t:
        assert return_time(golden, t, x) == 1


def test_piece_constancy_on_interior_samples(quad4):
    t = frac(5, 16)
    ind = induce(quad4, t)
    for p in ind.pieces:
        width = p.interval.length
        for i in range(1, 11):
            x = p.interval.lo + width * Scalar(Fraction(i, 11))
            assert return_time(quad4, t, x) == p.return_time
            assert quad4.iterate(x, p.return_time) == x + p.translation


def test_kac_mass_identity(golden, quad4):
    # sum over pieces of return_time * length equals the total length b
    for f, t in ((golden, frac(1, 2)), (golden, parse_scalar("3/2-1/2*sqrt(5)")),
                 (quad4, frac(1, 3))):
        ind = induce(f, t)
        mass = Scalar(0)
        for p in ind.pieces:
            mass = mass + p.interval.length * p.return_time
        assert mass == f.b


def test_no_mergeable_neighbors(golden):
    ind = induce(golden, frac(1, 2))
    for a, b in zip(ind.pieces, ind.pieces[1:]):
        assert (a.return_time, a.translation) != (b.return_time, b.translation)


def test_observed_piece_count_bound(golden, quad4):
    rng = random.Random(9)
    for f in (golden, quad4):
        for _ in range(5):
            t = frac(rng.randint(1, 999), 1000)
            assert induce(f, t).s <= f.r + 2


def test_step_cap(rot25):
    with pytest.raises(StepCapExceeded) as exc:
        induce(rot25, frac(1, 2), step_cap=2)
    assert exc.value.unfinished_measure is not None
    assert exc.value.unfinished_measure.sign() > 0
    with pytest.raises(StepCapExceeded):
        return_time(rot25, frac(1, 100), frac(1, 200), step_cap=3)


def test_periodic_rotation_still_induces(rot25):
    # periodicity does not prevent first returns; the table is finite
    ind = induce(rot25, frac(1, 2))
    assert ind.s >= 2
    for p in ind.pieces:
        assert rot25.iterate(p.interval.lo, p.return_time) == p.interval.lo + p.translation


def test_t_out_of_range(golden):
    for bad in (Scalar(0), frac(-1, 2), frac(3, 2)):
        with pytest.raises(ValueError):
            induce(golden, bad)


def test_random_rational_oracle_spotcheck():
    rng = random.Random(11)
    for _ in range(5):
        f = rand_rational_iet(rng)
        t = frac(rng.randint(100, 900), 1000)
        ind = induce(f, t)
        for _ in range(20):
            x = frac(rng.randint(0, 10**5 - 1), 10**5) * t
            assert ind.evaluate(x) == f.iterate(x, return_time(f, t, x))

"""BigFloat arithmetic, rounding and hex-float round trips."""

import random
from fractions import Fraction

import pytest

from ballmath.bigfloat import Ball, BigFloat, parse_number


def test_normalization_invariant():
    rng = random.Random(3)
    for _ in range(2000):
        man = rng.randrange(1, 1 << 90)
        e2 = rng.randint(-200, 200)
        x = BigFloat.from_man_exp(man, e2)
        # 2^(e-1) <= x < 2^e and odd mantissa
        assert x.man & 1
        q = x.to_fraction()
        assert Fraction(2) ** (x.exp - 1) <= q < Fraction(2) ** x.exp
        assert q == Fraction(man, 1) * Fraction(2) ** e2


def test_hex_round_trip():
    rng = random.Random(4)
    for _ in range(2000):
        man = rng.randrange(1, 1 << 150)
        e2 = rng.randint(-500, 500)
        sign = rng.choice([1, -1])
        x = BigFloat.from_man_exp(man, e2, sign)
        assert parse_number(x.hex_str()) == x
    assert parse_number("0x1.8p+1").to_fraction() == 3
    assert parse_number("-0x1p-3").to_fraction() == Fraction(-1, 8)
    assert parse_number("0x0p+0").is_zero()


def test_decimal_parse_rounds_at_requested_bits():
    x = parse_number("0.1", 64)
    exact = Fraction(1, 10)
    assert abs(x.to_fraction() - exact) <= Fraction(2) ** (x.exp - 65)
    assert parse_number("3", 53).to_fraction() == 3
    with pytest.raises(ValueError):
        parse_number("zz1")


def test_exact_add_sub_mul():
    rng = random.Random(5)
    for _ in range(2000):
        a = BigFloat.from_man_exp(rng.randrange(1, 1 << 64),
                                  rng.randint(-40, 40),
                                  rng.choice([1, -1]))
        b = BigFloat.from_man_exp(rng.randrange(1, 1 << 64),
                                  rng.randint(-40, 40),
                                  rng.choice([1, -1]))
        assert a.add(b).to_fraction() == a.to_fraction() + b.to_fraction()
        assert a.sub(b).to_fraction() == a.to_fraction() - b.to_fraction()
        assert a.mul(b).to_fraction() == a.to_fraction() * b.to_fraction()
    z = BigFloat.zero()
    x = BigFloat.from_int(7)
    assert x.add(z) == x and z.add(x) == x


def test_rounding_modes():
    # 11 = 0b1011 at 2 mantissa bits sits between 8 and 12
    x = BigFloat.from_int(11)
    assert x.round(2, "down").to_fraction() == 8
    assert x.round(2, "up").to_fraction() == 12
    assert x.round(2, "nearest").to_fraction() == 12
    x = BigFloat.from_int(-11)
    assert x.round(2, "floor").to_fraction() == -12
    assert x.round(2, "ceil").to_fraction() == -8
    # tie at 10: head 0b10 is even, stays
    x = BigFloat.from_int(10)
    assert x.round(2, "nearest").to_fraction() == 8
    # exactness is preserved
    assert BigFloat.from_int(3).round(2, "nearest").to_fraction() == 3


def test_round_error_is_exact():
    rng = random.Random(6)
    for _ in range(500):
        x = BigFloat.from_man_exp(rng.randrange(1, 1 << 200),
                                  rng.randint(-100, 100))
        p = rng.randint(2, 80)
        r = x.round(p, "nearest")
        err = x.round_error(r)
        assert err.to_fraction() == abs(x.to_fraction() - r.to_fraction())
        assert err.to_fraction() <= Fraction(2) ** (x.exp - p - 1)


def test_cmp_abs():
    a = BigFloat.from_man_exp(3, 0)
    b = BigFloat.from_man_exp(5, -1)
    assert a.cmp_abs(b) == 1 and b.cmp_abs(a) == -1
    assert a.cmp_abs(BigFloat.from_man_exp(3, 0, -1)) == 0


def test_specials():
    assert BigFloat.inf(1).is_inf() and BigFloat.inf(-1).sign == -1
    assert BigFloat.nan().is_nan()
    assert parse_number("inf").is_inf()
    assert parse_number("-inf").sign == -1
    assert parse_number("nan").is_nan()
    assert BigFloat.zero().is_zero()


def test_to_float():
    assert BigFloat.from_int(3).to_float() == 3.0
    assert abs(parse_number("0.1", 200).to_float() - 0.1) < 1e-17
    assert BigFloat.from_man_exp(1, 10000).to_float() == float("inf")


def test_decimal_str():
    x = BigFloat.from_int(1)
    assert x.decimal_str(5) == "1.0000e+0"
    x = parse_number("0x1.921fb54442d18p+1")  # pi to 53 bits
    s = x.decimal_str(17)
    assert s.startswith("3.1415926535897931") or s.startswith("3.1415926535897932")


def test_ball_radius_rounds_up_to_32_bits():
    mid = BigFloat.from_int(1)
    rad = BigFloat.from_man_exp((1 << 60) + 1, -120)
    b = Ball(mid, rad)
    assert b.rad.man.bit_length() <= 32
    assert b.rad.to_fraction() >= rad.to_fraction()


def test_ball_containment_and_intersection():
    b = Ball(BigFloat.from_int(4), BigFloat.from_man_exp(1, -2))
    assert b.contains(Fraction(4))
    assert b.contains(Fraction(17, 4)) and not b.contains(Fraction(9, 2))
    c = Ball(BigFloat.from_man_exp(9, -1), BigFloat.from_man_exp(1, -2))
    assert b.intersects(c)
    d = Ball(BigFloat.from_int(6), BigFloat.from_man_exp(1, -4))
    assert not b.intersects(d)
    assert b.width() == Fraction(1, 2)

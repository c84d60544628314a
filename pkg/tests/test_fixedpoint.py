"""Arithmetic on hundredths against an arbitrary-precision Fraction oracle."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hmiv import fixedpoint as fp


def oracle_mul(a: int, b: int) -> int:
    # exact product in hundredths, truncated toward zero
    return int(Fraction(a, 100) * Fraction(b, 100) * 100)


def oracle_div(a: int, b: int) -> int:
    return int(Fraction(a, 100) / Fraction(b, 100) * 100)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_mul_matches_fraction_oracle(a, b):
    assert fp.mul(a, b) == oracle_mul(a, b)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6).filter(lambda x: x != 0))
def test_div_matches_fraction_oracle(a, b):
    assert fp.div(a, b) == oracle_div(a, b)


def test_bulk_agreement_with_oracle():
    rng = random.Random(0)
    for _ in range(10_000):
        a = rng.randint(-10**6, 10**6)
        b = rng.randint(-10**6, 10**6)
        assert fp.mul(a, b) == oracle_mul(a, b)
        if b != 0:
            assert fp.div(a, b) == oracle_div(a, b)
        assert fp.add(a, b) == a + b
        assert fp.sub(a, b) == a - b


def test_trunc_div_toward_zero():
    assert fp.trunc_div(7, 2) == 3
    assert fp.trunc_div(-7, 2) == -3
    assert fp.trunc_div(7, -2) == -3
    assert fp.trunc_div(-7, -2) == 3


def test_division_by_zero():
    with pytest.raises(fp.DivisionByZero):
        fp.div(100, 0)


def test_parse_literal():
    assert fp.parse_literal("1013.25") == 101325
    assert fp.parse_literal("22") == 2200
    assert fp.parse_literal("32.4") == 3240
    assert fp.parse_literal("-0.05") == -5
    with pytest.raises(ValueError):
        fp.parse_literal("1.234")
    with pytest.raises(ValueError):
        fp.parse_literal("abc")


def test_format_value():
    assert fp.format_value(101321) == "1013.21"
    assert fp.format_value(-5) == "-0.05"
    assert fp.format_value(0) == "0.00"


@given(st.integers(-10**8, 10**8))
def test_format_parse_round_trip(v):
    assert fp.parse_literal(fp.format_value(v)) == v


def test_half_up():
    assert fp.half_up(5, 10) == 1       # 0.5 rounds up
    assert fp.half_up(4, 10) == 0
    assert fp.half_up(15, 10) == 2
    assert fp.to_whole_half_up(101350) == 1014
    assert fp.to_whole_half_up(101349) == 1013

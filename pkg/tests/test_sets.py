from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from combcontracts.errors import CapacityError, InputError, ParseError
from combcontracts.sets import (
    check_n,
    check_set,
    format_rational,
    from_members,
    members,
    parse_rational,
    scaled_integers,
    size,
    subsets,
    subsets_of_size,
    to_rational,
)


@given(st.fractions())
def test_rational_round_trip(r):
    assert parse_rational(format_rational(r)) == r


@given(st.integers(), st.integers(min_value=1))
def test_parse_reduces_to_lowest_terms(p, q):
    r = parse_rational(f"{p}/{q}")
    assert r == Fraction(p, q)
    assert r.denominator > 0


@pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "", "1/-2", "--1"])
def test_malformed_rationals(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_to_rational_rejects_floats_and_bools():
    with pytest.raises(ParseError):
        to_rational(0.5)
    with pytest.raises(ParseError):
        to_rational(True)
    assert to_rational(3) == 3
    assert to_rational(" 2 / 4 ") == Fraction(1, 2)


def test_format_always_has_denominator():
    assert format_rational(Fraction(0)) == "0/1"
    assert format_rational(Fraction(-6, 4)) == "-3/2"


@given(st.sets(st.integers(0, 62)))
def test_members_round_trip(s):
    S = from_members(s)
    assert members(S) == sorted(s)
    assert size(S) == len(s)


def test_check_set_and_capacity():
    check_set(0b101, 3)
    with pytest.raises(InputError):
        check_set(0b1000, 3)
    with pytest.raises(InputError):
        check_set(-1, 3)
    with pytest.raises(CapacityError):
        check_n(64)


def test_subset_enumeration():
    assert list(subsets(0b101)) == [0, 1, 4, 5]
    assert sorted(subsets_of_size(0b1111, 2)) == [3, 5, 6, 9, 10, 12]


@given(st.lists(st.fractions(), min_size=1, max_size=8))
def test_scaled_integers(values):
    ints, L = scaled_integers(values)
    assert all(Fraction(i, L) == v for i, v in zip(ints, values))

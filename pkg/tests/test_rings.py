from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from spindlehom.rings import GF, QQ, ZZ, Ring


def test_parse():
    assert Ring.parse("Z") == ZZ
    assert Ring.parse("Q") == QQ
    assert Ring.parse("Fp:7") == GF(7)
    assert Ring.parse("F2") == GF(2)
    with pytest.raises(ValueError):
        Ring.parse("Fp:4")
    with pytest.raises(ValueError):
        Ring.parse("R")


def test_str_round_trip():
    for R in (ZZ, QQ, GF(2), GF(101)):
        assert Ring.parse(str(R)) == R


def test_coerce():
    assert GF(5).coerce(-1) == 4
    assert QQ.coerce("3/6") == Fraction(1, 2)
    assert ZZ.coerce(-7) == -7


@given(st.integers(1, 10**6), st.sampled_from([2, 3, 5, 7, 101, 2**31 - 1]))
def test_field_inverse(a, p):
    R = GF(p)
    if a % p == 0:
        assert not R.is_unit(a)
    else:
        assert R.coerce(a * R.inverse(a)) == 1


def test_units_of_z():
    assert ZZ.is_unit(-1) and ZZ.is_unit(1) and not ZZ.is_unit(2)

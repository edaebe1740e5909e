from fractions import Fraction

import pytest

from svo.rational import dot, fmt, fmt_vec, inverse, lincomb, q, rank, to_fraction, transpose


def test_parsing():
    assert q("3/6") == q(1) / 2
    assert q(Fraction(-2, 4)) == q("-1/2")
    assert q(" 7 ") == 7


def test_format():
    assert fmt(q("4/2")) == "2"
    assert fmt(q("-3/9")) == "-1/3"
    assert fmt_vec([1, q("1/2")]) == ["1", "1/2"]
    assert to_fraction(q("5/3")) == Fraction(5, 3)


def test_dot_length_check():
    with pytest.raises(ValueError):
        dot((1, 2), (1,))


def test_inverse_and_rank():
    inv = inverse([[2, 1], [1, 1]])
    assert inv == [(1, -1), (-1, 2)]
    assert inverse([[1, 2], [2, 4]]) is None
    assert rank([[1, 2], [2, 4], [0, 1]]) == 2
    assert transpose([[1, 2], [3, 4]]) == [(1, 3), (2, 4)]


def test_lincomb():
    assert lincomb([1, q("1/2")], [(2, 0), (0, 2)]) == (2, 1)
    assert lincomb([], [], n=2) == (0, 0)

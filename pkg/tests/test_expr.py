from __future__ import annotations

from fractions import Fraction

import pytest

from unipotent.base import GF, QQ, RationalFunctionField
from unipotent.errors import ParseError
from unipotent.expr import evaluate, parse_base


def test_parse_rationals():
    assert parse_base("(1/2)^-2 + 1", QQ) == Fraction(5)
    assert parse_base("-1", QQ) == -1


def test_parse_function_field():
    F = RationalFunctionField(GF(5, 2))
    t = F.t
    z = F(GF(5, 2).gen)
    assert parse_base("z*t^2 + (4*z+1)/t", F) == z * t ** 2 + (z * 4 + 1) / t


@pytest.mark.parametrize("bad", ["", "1/(", "t.x", "__import__('os')", "2**t", "1/0", "s+1",
                                 "1.5", "lambda: 1", "t[0]"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_base(bad, RationalFunctionField(GF(2)))


def test_env_names():
    assert evaluate("x*y", {"x": 2, "y": 3}, int) == 6
    with pytest.raises(ParseError):
        parse_base("z", RationalFunctionField(GF(2)))

"""Rational function fields and the class tests over base fields."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, strategies as st

from unipotent.base import (
    QQ, GF, RationalFunctionField, as_independent, as_reduce, as_reduce_certified,
    base_field_from_descriptor, kummer_dependence, kummer_independent, pth_root,
    root_of_unity, valuation_vector, wp,
)
from unipotent.errors import DivisionByZero, ParseError, ZeroElement
from unipotent.expr import parse_base

F2t = RationalFunctionField(GF(2))
F3t = RationalFunctionField(GF(3))
F25t = RationalFunctionField(GF(5, 2))


def ratfuncs(F, max_deg=3):
    K = F.K
    els = K.elements()
    poly = st.lists(st.sampled_from(els), min_size=1, max_size=max_deg + 1).map(
        lambda cs: F.from_poly(tuple(cs)))
    return st.tuples(poly, poly).filter(lambda nd: bool(nd[1])).map(lambda nd: nd[0] / nd[1])


def test_spec_sum():
    t = F2t.t
    assert 1 / t + 1 / (t + 1) == 1 / (t ** 2 + t)
    assert QQ(1) / QQ(1) == 1


@given(ratfuncs(F3t), ratfuncs(F3t), ratfuncs(F3t))
def test_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x - x == F3t.zero
    if x:
        assert x * x.inverse() == F3t.one
        assert (y / x) * x == y


@given(ratfuncs(F3t), ratfuncs(F3t))
def test_against_sympy_cancel(x, y):
    """Cross-multiplied equality against sympy rational functions over GF(3)."""
    t = sympy.symbols("t")

    def sym(r):
        n = sum(int(c.v) * t ** i for i, c in enumerate(r.num))
        d = sum(int(c.v) * t ** i for i, c in enumerate(r.den))
        return n, d

    s = x * y + x
    sn, sd = sym(s)
    xn, xd = sym(x)
    yn, yd = sym(y)
    lhs = sympy.Poly(sn * xd * yd, t, modulus=3)
    rhs = sympy.Poly((xn * yn + xn * yd) * sd, t, modulus=3)
    assert lhs == rhs
    assert s.den[-1] == F3t.K.one  # monic denominator


def test_canonical_form_and_expr_roundtrip():
    t = F25t.t
    x = (t ** 2 - 1) / (t - 1) * F25t(GF(5, 2).gen)
    assert x.den == (GF(5, 2).one,)
    assert parse_base(x.to_expr(), F25t) == x
    with pytest.raises(DivisionByZero):
        F2t.zero.inverse()


@given(ratfuncs(F25t))
def test_to_expr_roundtrip(x):
    assert parse_base(x.to_expr(), F25t) == x


def test_descriptors():
    for d in ("Q", "GF(5)", "GF(5^2)", "GF(25)", "Q(t)", "GF(2)(t)"):
        F = base_field_from_descriptor(d)
        assert base_field_from_descriptor(F.descriptor()) is F
    assert base_field_from_descriptor("GF(25)") is base_field_from_descriptor("GF(5^2)")
    for bad in ("GF(6)", "R", "GF(2)(x)"):
        with pytest.raises(ParseError):
            base_field_from_descriptor(bad)


# valuations and Kummer classes


def test_valuation_examples():
    assert valuation_vector(Fraction(2), 2).as_dict() == {2: 1}
    assert valuation_vector(Fraction(-1), 2).as_dict() == {"sign": 1}
    t = F2t.t
    v = valuation_vector(1 / t, 2).as_dict()
    assert v == {(GF(2).zero, GF(2).one): 1, "inf": 1}
    with pytest.raises(ZeroElement):
        valuation_vector(Fraction(0), 2)


def _is_power_oracle(x: Fraction, p: int) -> bool:
    r = sympy.Rational(x.numerator, x.denominator)
    if r < 0:
        return p % 2 == 1 and sympy.real_root(-r, p).is_rational
    return sympy.root(r, p).is_rational


@given(st.lists(st.integers(-30, 30).filter(bool), min_size=1, max_size=3),
       st.sampled_from([2, 3]))
def test_kummer_independent_against_sympy(vals, p):
    elems = [Fraction(v) for v in vals]
    dependent = any(
        _is_power_oracle(Fraction(sympy.prod([sympy.Integer(v) ** e for v, e in zip(vals, ex)])), p)
        for ex in product(range(p), repeat=len(vals)) if any(ex))
    assert kummer_independent(elems, p) == (not dependent)
    w = kummer_dependence(elems, p)
    if w is not None:
        ex, root = w
        acc = Fraction(1)
        for v, e in zip(elems, ex):
            acc *= v ** e
        assert root ** p == acc


def test_kummer_examples():
    assert kummer_independent([Fraction(2), Fraction(-1), Fraction(5)], 2)
    ex, root = kummer_dependence([Fraction(4), Fraction(3)], 2)
    assert ex == (1, 0) and root ** 2 == 4
    t = F2t.t
    assert not kummer_independent([t + 1, t + 1], 3)
    F7t = RationalFunctionField(GF(7))
    s = F7t.t
    assert kummer_independent([s, s + 1, s + 2], 3)
    assert not kummer_independent([s, s ** 4], 3)


@given(ratfuncs(F25t), st.sampled_from([2, 3]))
def test_pth_root_of_powers(x, p):
    if x:
        r = pth_root(x ** p, p)
        assert r is not None and r ** p == x ** p


def test_root_of_unity():
    assert root_of_unity(QQ, 2) == -1
    assert root_of_unity(QQ, 3) is None
    assert root_of_unity(F2t, 2) is None
    xi = root_of_unity(F25t, 3)
    assert xi ** 3 == 1 and xi != 1


# Artin-Schreier classes


def test_as_reduce_examples():
    t = F2t.t
    assert as_reduce(t ** 2) == t
    assert as_reduce(t ** 4) == t
    assert as_reduce(1 / t) == 1 / t
    assert as_independent([1 / t, 1 / (t + 1), t])
    assert not as_independent([1 / t, wp(t) + 1 / t])
    assert not as_independent([F2t.zero])


@pytest.mark.parametrize("F", [F2t, F3t, F25t])
@given(data=st.data())
def test_as_reduce_is_a_class_invariant(F, data):
    x = data.draw(ratfuncs(F, 2))
    y = data.draw(ratfuncs(F, 2))
    r, g = as_reduce_certified(x)
    assert x - r == wp(g)
    assert as_reduce(x + wp(y)) == r
    assert as_reduce(r) == r


def test_as_independent_oracle_over_f2():
    """Against brute force: x in wp(F) iff some y of small height has y^2 + y = x."""
    t = F2t.t
    small = [F2t.from_poly(tuple(GF(2)(c) for c in cs)) for n in range(1, 4)
             for cs in product((0, 1), repeat=n)]
    small = [a / b for a in small for b in small if b]
    image = {wp(y) for y in small}
    for x in (t, t ** 2 + t, 1 / t, 1 / (t ** 2 + t), t ** 3):
        assert (as_reduce(x) == 0) == (x in image)

"""Finite fields and polynomials against sympy's galoistools and Poly."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import GF as SGF, Poly, symbols
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_rem

from unipotent import poly as P
from unipotent.errors import DivisionByZero, Unsupported
from unipotent.gf import GF, first_irreducible, is_irreducible_prime_poly

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4)]
T = symbols("t")


def oracle_mul(K, a, b):
    """Product of codes via sympy polynomials mod the modulus (high-first lists)."""
    da = list(reversed(K.digits(a)))
    db = list(reversed(K.digits(b)))
    mod = list(reversed(K.modulus))
    r = gf_rem(gf_mul(da, db, K.p, ZZ), mod, K.p, ZZ)
    r = [int(c) for c in reversed(r)] + [0] * K.k
    return K(r[:K.k])


@st.composite
def field_and_elems(draw, n=2):
    p, k = draw(st.sampled_from(FIELDS))
    K = GF(p, k)
    return K, [K.elements()[draw(st.integers(0, K.q - 1))] for _ in range(n)]


@given(field_and_elems(3))
def test_field_axioms(data):
    K, (x, y, z) = data
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == K.zero
    assert x * K.one == x
    if x:
        assert x * x.inverse() == K.one
        assert (y / x) * x == y


@given(field_and_elems(2))
def test_mul_matches_sympy(data):
    K, (x, y) = data
    assert x * y == oracle_mul(K, x, y)


@given(field_and_elems(1), st.integers(0, 40))
def test_pow_and_frobenius(data, e):
    K, (x,) = data
    acc = K.one
    for _ in range(e):
        acc = acc * x
    assert x ** e == acc
    assert K.frob(x) == x ** K.p
    assert K.frob(x, K.k) == x
    assert (K.frob(x + x * x) == K.frob(x) + K.frob(x) ** 2)


@given(field_and_elems(1), st.sampled_from([2, 3, 5]))
def test_pth_root(data, n):
    K, (x,) = data
    y = K.pth_root(x, n)
    brute = [c for c in K.elements() if c ** n == x]
    assert (y is None) == (not brute)
    if y is not None:
        assert y ** n == x


def test_trace_is_sum_of_conjugates():
    K = GF(5, 2)
    for x in K.elements():
        assert K.trace(x) == x + x ** 5
        assert K.trace(x) ** 5 == K.trace(x)


def test_roots_of_unity():
    assert GF(5, 2).root_of_unity(3) ** 3 == GF(5, 2).one
    assert GF(5, 2).root_of_unity(3) != GF(5, 2).one
    assert GF(5).root_of_unity(3) is None
    assert GF(7).root_of_unity(3) is not None


def test_small_arithmetic():
    F3 = GF(3)
    assert F3(2) * F3(2) == F3(1)
    assert F3(Fraction(1, 2)) == F3(2)
    with pytest.raises(DivisionByZero):
        F3.zero.inverse()


def test_modulus_checks():
    for p, k in FIELDS:
        m = first_irreducible(p, k)
        assert Poly(list(reversed(m)), T, modulus=p).is_irreducible
        assert is_irreducible_prime_poly(list(m), p)
    with pytest.raises(Unsupported):
        GF(4)
    with pytest.raises(Unsupported):
        GF(2, 2, modulus=(1, 0, 1))
    with pytest.raises(Unsupported):
        GF(2, 9)


# polynomials over GF(p) and Q


def to_sympy(a, p=None):
    coeffs = [c.v if p else c for c in reversed(a)]
    if p:
        return Poly(coeffs or [0], T, modulus=p)
    return Poly(coeffs or [0], T, domain="QQ")


def gf_poly(p, max_deg=8):
    K = GF(p)
    return st.lists(st.integers(0, p - 1), max_size=max_deg + 1).map(
        lambda cs: P.trim(tuple(K(c) for c in cs)))


qq_poly = st.lists(st.builds(Fraction, st.integers(-20, 20), st.integers(1, 5)),
                   max_size=6).map(lambda cs: P.trim(tuple(cs)))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@given(data=st.data())
def test_gf_poly_ops(p, data):
    a = data.draw(gf_poly(p))
    b = data.draw(gf_poly(p))
    sa, sb = to_sympy(a, p), to_sympy(b, p)
    assert to_sympy(P.mul(a, b), p) == sa * sb
    assert to_sympy(P.add(a, b), p) == sa + sb
    if b:
        q, r = P.divmod_(a, b)
        sq, sr = sa.div(sb)
        assert (to_sympy(q, p), to_sympy(r, p)) == (sq, sr)
        g = P.gcd(a, b)
        assert to_sympy(g, p) == sa.gcd(sb).monic()
        g2, s, t = P.xgcd(a, b, GF(p))
        assert P.add(P.mul(s, a), P.mul(t, b)) == g2 == g


@given(qq_poly, qq_poly)
def test_qq_poly_ops(a, b):
    sa, sb = to_sympy(a), to_sympy(b)
    assert to_sympy(P.mul(a, b)) == sa * sb
    if b:
        q, r = P.divmod_(a, b)
        assert (to_sympy(q), to_sympy(r)) == sa.div(sb)
        if a:
            assert to_sympy(P.gcd(a, b)) == sa.gcd(sb).monic()


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (5, 2), (2, 2)])
@given(data=st.data())
def test_factor_gf(p, k, data):
    K = GF(p, k)
    n = data.draw(st.integers(1, 7))
    f = P.trim(tuple(K.elements()[data.draw(st.integers(0, K.q - 1))] for _ in range(n))
               + (K.one,))
    facs = P.factor_gf(f, K)
    prod = (K.one,)
    for g, e in facs:
        assert g[-1] == K.one
        prod = P.mul(prod, P.power(g, e, K))
        if k == 1:
            assert to_sympy(g, p).is_irreducible
    assert prod == f
    if k == 1:
        expect = sorted((tuple(int(c) % p for c in reversed(g.all_coeffs())), e)
                        for g, e in to_sympy(f, p).factor_list()[1])
        got = sorted((tuple(c.v for c in g), e) for g, e in facs)
        assert got == expect


def test_large_gf_kernels_agree_with_generic():
    """The packed-integer fast paths against plain coefficient arithmetic."""
    K = GF(5, 2)
    import random

    rng = random.Random(3)
    els = K.elements()
    for _ in range(30):
        a = P.trim(tuple(rng.choice(els) for _ in range(rng.randrange(1, 30))))
        b = P.trim(tuple(rng.choice(els) for _ in range(rng.randrange(1, 30))))
        naive = [K.zero] * (len(a) + len(b))
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                naive[i + j] = naive[i + j] + x * y
        assert P.mul(a, b) == P.trim(tuple(naive))
        if b:
            q, r = P.divmod_(a, b)
            assert P.add(P.mul(q, b), r) == a and len(r) < len(b)

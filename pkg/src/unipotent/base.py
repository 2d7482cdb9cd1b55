"""Base fields of towers and the class tests that live over them.

The supported base fields are Q, GF(p^k) with k <= 4, and K(t) for K one of
those.  This module adds, on top of the raw arithmetic:

* p-th root extraction (exact),
* valuation vectors modulo p,
* independence modulo p-th powers (Kummer classes),
* canonical representatives modulo the Artin-Schreier image (as_reduce),
* independence modulo the Artin-Schreier image.

>>> F = RationalFunctionField(GF(2))
>>> t = F.t
>>> as_reduce(t ** 4)
t
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from sympy import factorint, integer_nthroot

from . import poly as P
from .errors import FieldMismatch, ParseError, Undecided, Unsupported, WrongCharacteristic, ZeroElement
from .gf import GF, GFElem
from .ratfunc import QQ, RatFunc, RationalFunctionField, Rationals

__all__ = [
    "QQ", "GF", "RationalFunctionField", "base_field_from_descriptor", "is_finite_field",
    "is_function_field", "pth_root", "ValuationVector", "valuation_vector",
    "kummer_independent", "kummer_dependence", "as_reduce", "as_reduce_certified",
    "as_independent", "wp", "frobenius_on", "root_of_unity",
]


def is_finite_field(F) -> bool:
    return isinstance(F, GF)


def is_function_field(F) -> bool:
    return isinstance(F, RationalFunctionField)


_DESC = re.compile(r"^\s*(Q|GF\((\d+)(?:\^(\d+))?\))\s*(\(t\))?\s*$")


def base_field_from_descriptor(desc: str):
    """Parse 'Q', 'GF(5)', 'GF(5^2)', 'GF(25)', 'Q(t)', 'GF(2)(t)'.

    'GF(q)' with q a prime power picks the default (lexicographically first)
    modulus.
    """
    m = _DESC.match(desc)
    if not m:
        raise ParseError(f"unknown base field descriptor {desc!r}")
    if m.group(1) == "Q":
        K = QQ
    else:
        n = int(m.group(2))
        if m.group(3):
            p, k = n, int(m.group(3))
        else:
            fac = factorint(n)
            if len(fac) != 1:
                raise ParseError(f"{n} is not a prime power")
            (p, k), = fac.items()
        K = GF(p, k)
    return RationalFunctionField(K) if m.group(4) else K


def coefficient_field(F):
    return F.K if is_function_field(F) else F


def frobenius_on(F, j: int):
    """The coefficient map x -> x^(p^j) acting on finite field constants.

    Identity for Q and Q(t); on K(t) it acts on coefficients only.
    """
    K = coefficient_field(F)
    if not isinstance(K, GF) or j % K.k == 0:
        return lambda x: x
    if is_function_field(F):
        return lambda x: x.map_coeffs(lambda c: K.frob(c, j))
    return lambda x: K.frob(x, j)


def frobenius_order(F) -> int:
    K = coefficient_field(F)
    return K.k if isinstance(K, GF) else 1


def root_of_unity(F, p: int):
    """A primitive p-th root of unity in F, or None."""
    K = coefficient_field(F)
    if K is QQ:
        return F(-1) if p == 2 else None
    if K.p == p:
        return None
    xi = K.root_of_unity(p)
    return None if xi is None else F(xi)


# p-th roots


def _int_root(n: int, p: int):
    if n < 0:
        if p % 2 == 0:
            return None
        r = _int_root(-n, p)
        return None if r is None else -r
    r, exact = integer_nthroot(n, p)
    return r if exact else None


def _poly_pth_root(f, K, p):
    """g with g^p = f for a polynomial f over K, or None."""
    if not f:
        return ()
    lc = f[-1]
    if K is QQ:
        rn = _int_root(lc.numerator, p)
        rd = _int_root(lc.denominator, p)
        if rn is None or rd is None:
            return None
        root_lc = Fraction(rn, rd)
        facs = P.factor_qq(P.monic(f)) if len(f) > 1 else []
    else:
        root_lc = K.pth_root(lc, p)
        if root_lc is None:
            return None
        facs = P.factor_gf(f, K) if len(f) > 1 else []
    g = (root_lc,)
    for h, e in facs:
        if e % p:
            return None
        g = P.mul(g, P.power(h, e // p, K))
    return g


def pth_root(x, p: int):
    """Exact p-th root of a base element, or None if x is not a p-th power."""
    if isinstance(x, Fraction):
        rn = _int_root(x.numerator, p)
        rd = _int_root(x.denominator, p)
        if rn is None or rd is None:
            return None
        return Fraction(rn, rd)
    if isinstance(x, GFElem):
        return x.field.pth_root(x, p)
    if isinstance(x, RatFunc):
        F = x.field
        if not x.num:
            return x
        n = _poly_pth_root(x.num, F.K, p)
        if n is None:
            return None
        d = _poly_pth_root(x.den, F.K, p)
        if d is None:
            return None
        return F.from_poly(n, d)
    raise FieldMismatch(f"unsupported element {x!r}")


# valuations


@dataclass(frozen=True)
class ValuationVector:
    """Exponents mod p at finitely many places; zero entries are dropped.

    Places are primes of Z or 'sign' (over Q), monic irreducible polynomials
    (as coefficient tuples) or 'inf' (over K(t)).
    """

    p: int
    entries: tuple

    @classmethod
    def make(cls, p, mapping) -> "ValuationVector":
        items = [(k, v % p) for k, v in mapping.items() if v % p]
        items.sort(key=lambda kv: _place_key(kv[0]))
        return cls(p, tuple(items))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __add__(self, other: "ValuationVector") -> "ValuationVector":
        d = self.as_dict()
        for k, v in other.entries:
            d[k] = d.get(k, 0) + v
        return ValuationVector.make(self.p, d)

    def scale(self, n: int) -> "ValuationVector":
        return ValuationVector.make(self.p, {k: v * n for k, v in self.entries})

    def is_zero(self) -> bool:
        return not self.entries


def _place_key(place):
    if place == "sign":
        return (0, 0, ())
    if place == "inf":
        return (2, 0, ())
    if isinstance(place, int):
        return (1, place, ())
    return (1, len(place), tuple(c.v if isinstance(c, GFElem) else c for c in place))


def valuation_vector(x, p: int) -> ValuationVector:
    """Valuations of x at every place, reduced mod p."""
    if not x:
        raise ZeroElement("valuation vector of zero")
    if isinstance(x, Fraction):
        d = {}
        for q, e in factorint(abs(x.numerator)).items():
            d[q] = d.get(q, 0) + e
        for q, e in factorint(x.denominator).items():
            d[q] = d.get(q, 0) - e
        if p == 2 and x < 0:
            d["sign"] = 1
        return ValuationVector.make(p, d)
    if isinstance(x, RatFunc):
        K = x.field.K
        fac = P.factor_qq if K is QQ else (lambda f: P.factor_gf(f, K))
        d = {}
        for g, e in (fac(x.num) if len(x.num) > 1 else []):
            d[g] = d.get(g, 0) + e
        for g, e in (fac(x.den) if len(x.den) > 1 else []):
            d[g] = d.get(g, 0) - e
        d["inf"] = x.val_inf()
        return ValuationVector.make(p, d)
    raise Unsupported("valuation vectors need Q or K(t)")


def _rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def valuation_rank(elems, p: int) -> int:
    vecs = [valuation_vector(x, p) for x in elems]
    places = sorted({k for v in vecs for k, _ in v.entries}, key=_place_key)
    rows = [[v.as_dict().get(pl, 0) for pl in places] for v in vecs]
    return _rank_mod_p(rows, p) if places else 0


def kummer_dependence(elems, p: int):
    """A witness (exponents, root) with prod x_i^e_i = root^p, or None.

    Exhaustive over all nonzero exponent tuples in [0, p)^n, using exact
    p-th root extraction, so None certifies independence.
    """
    elems = list(elems)
    for x in elems:
        if not x:
            raise ZeroElement("kummer classes of zero")
    vecs = [valuation_vector(x, p) for x in elems] if _has_valuations(elems) else None
    for exps in product(range(p), repeat=len(elems)):
        if not any(exps):
            continue
        if vecs is not None:
            acc = ValuationVector.make(p, {})
            for v, e in zip(vecs, exps):
                if e:
                    acc = acc + v.scale(e)
            if not acc.is_zero():
                continue
        prod_ = None
        for x, e in zip(elems, exps):
            if e:
                prod_ = x ** e if prod_ is None else prod_ * x ** e
        root = pth_root(prod_, p)
        if root is not None:
            return exps, root
    return None


def _has_valuations(elems) -> bool:
    return all(isinstance(x, (Fraction, RatFunc)) for x in elems)


def kummer_independent(elems, p: int) -> bool:
    """True iff the classes of elems in F^x/(F^x)^p are F_p-independent.

    The valuation rank is tried first; when it is deficient the exhaustive
    exponent search with exact root extraction decides.
    """
    elems = list(elems)
    if not elems:
        return True
    for x in elems:
        if not x:
            raise ZeroElement("kummer classes of zero")
    F0 = elems[0]
    if not isinstance(F0, (Fraction, RatFunc, GFElem)):
        raise Undecided("no class test for this field")
    if _has_valuations(elems) and valuation_rank(elems, p) == len(elems):
        return True
    return kummer_dependence(elems, p) is None


# Artin-Schreier reduction


def wp(x, p=None):
    """The Artin-Schreier map x -> x^p - x."""
    if p is None:
        p = _char_of(x)
    return x ** p - x


def _char_of(x) -> int:
    if isinstance(x, RatFunc):
        return x.field.characteristic
    if isinstance(x, GFElem):
        return x.field.p
    raise WrongCharacteristic("Artin-Schreier theory needs positive characteristic")


def _constant_complement(K: GF):
    """First basis vector z^i of K over F_p with nonzero absolute trace."""
    for i in range(K.k):
        e = GFElem(K, K.p ** i)
        tr = K.trace(e)
        if tr:
            return e, tr
    raise Unsupported("trace form vanishes identically")  # pragma: no cover


def _wp_preimage_const(K: GF, c: GFElem) -> GFElem:
    for y in K.elements():
        if y ** K.p - y == c:
            return y
    raise Unsupported("constant not in the Artin-Schreier image")  # pragma: no cover


def _residue_pth_root(r, pi, K: GF):
    """s with s^p = r mod pi, in the perfect field K[t]/(pi)."""
    qd = K.q ** (len(pi) - 1)
    return P.powmod(r, qd // K.p, pi, K)


def as_reduce_certified(x):
    """(r, g) with x - r = wp(g) and r the canonical representative of x.

    r has, at every pole including infinity, only principal-part digits of
    order prime to p; its constant term lies in the fixed complement of
    wp(K), namely the F_p-span of the first basis vector of K with nonzero
    trace.
    """
    if not isinstance(x, RatFunc):
        raise WrongCharacteristic("as_reduce works on K(t) with K finite")
    F = x.field
    K = F.K
    if not isinstance(K, GF):
        raise WrongCharacteristic("as_reduce needs positive characteristic")
    p = K.p
    g = F.zero
    r = x
    # finite poles
    if len(r.den) > 1:
        for pi, _ in P.factor_gf(r.den, K):
            while True:
                m = _pole_order(r, pi)
                top = None
                for j in range(m, 0, -1):
                    if j % p == 0:
                        dig = _principal_digit(r, pi, m, j, K)
                        if dig:
                            top = (j, dig)
                            break
                if top is None:
                    break
                j, dig = top
                s = _residue_pth_root(dig, pi, K)
                h = F.from_poly(s, P.power(pi, j // p, K))
                r = r - wp(h, p)
                g = g + h
    # pole at infinity: polynomial part
    while True:
        q, _ = P.divmod_(r.num, r.den)
        hit = None
        for j in range(len(q) - 1, 0, -1):
            if j % p == 0 and q[j]:
                hit = j
                break
        if hit is None:
            break
        c = K.pth_root(q[hit], p)
        h = F.from_poly(P.monomial(K, hit // p, c))
        r = r - wp(h, p)
        g = g + h
    # constant term
    q, _ = P.divmod_(r.num, r.den)
    c0 = q[0] if q else K.zero
    e, tr_e = _constant_complement(K)
    keep = e * (K.trace(c0) / tr_e)
    diff = c0 - keep
    if diff:
        y = _wp_preimage_const(K, diff)
        r = r - F(diff)
        g = g + F(y)
    return r, g


def _pole_order(r: RatFunc, pi) -> int:
    m = 0
    d = r.den
    while len(d) > 1:
        qq, rem = P.divmod_(d, pi)
        if rem:
            break
        d = qq
        m += 1
    return m


def _principal_digit(r: RatFunc, pi, m: int, j: int, K):
    """Digit of order j (1 <= j <= m) in the pi-adic principal part of r."""
    K1 = (K.one,)
    pim = P.power(pi, m, K)
    dprime = P.exact_div(r.den, pim)
    # U = num * dprime^{-1} mod pi^m
    _, s, _ = P.xgcd(dprime, pim, K)
    U = P.mod(P.mul(r.num, s), pim)
    # pi-adic digit u_{m-j} of U
    k = m - j
    cur = U
    for _ in range(k):
        cur, _ = P.divmod_(cur, pi)
    del K1
    return P.mod(cur, pi)


def as_reduce(x):
    """Canonical representative of the class of x modulo wp(F)."""
    return as_reduce_certified(x)[0]


def as_independent(elems) -> bool:
    """True iff no nonzero F_p-combination of elems lies in wp(F).

    Decided by reducing each of the p^n - 1 combinations.
    """
    elems = list(elems)
    if not elems:
        return True
    x0 = elems[0]
    p = _char_of(x0)
    for coeffs in product(range(p), repeat=len(elems)):
        if not any(coeffs):
            continue
        comb = None
        for x, c in zip(elems, coeffs):
            if c:
                term = x * c
                comb = term if comb is None else comb + term
        if isinstance(comb, RatFunc):
            if not as_reduce(comb):
                return False
        elif isinstance(comb, GFElem):
            if not comb.field.trace(comb):
                return False
        else:
            raise WrongCharacteristic("unsupported field for as_independent")
    return True


def is_rationals(F) -> bool:
    return isinstance(F, Rationals)

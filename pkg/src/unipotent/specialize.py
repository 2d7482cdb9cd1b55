"""Ring homomorphisms from towers to finite fields.

A specialization sends the base field to a finite residue field (reduction
mod a prime l for Q, evaluation t -> t0 for K(t)) and each generator to a
root of its specialized defining equation.  Used to certify that a defining
equation is irreducible: if every earlier step is etale at the chosen point,
the local ring is normal, so a p-th root (or Artin-Schreier root) upstairs
would specialize to one downstairs.
"""

from __future__ import annotations

from fractions import Fraction

from sympy import primerange

from .errors import DivisionByZero
from .gf import GF, GFElem
from .ratfunc import QQ, RationalFunctionField


class Point:
    """A base-field specialization: residue field R and the map F -> R."""

    def __init__(self, R: GF, label: str, fn):
        self.R = R
        self.label = label
        self._fn = fn

    def __call__(self, x):
        """Image of a base element, or None when x has a pole here."""
        try:
            return self._fn(x)
        except DivisionByZero:
            return None

    def __repr__(self):
        return f"Point({self.label} in {self.R.descriptor()})"


def _qq_point(ell: int) -> Point:
    R = GF(ell)

    def fn(x: Fraction):
        if x.denominator % ell == 0:
            raise DivisionByZero("pole")
        return R(x.numerator) / R(x.denominator)

    return Point(R, f"mod {ell}", fn)


def _embedding(K: GF, R: GF):
    """A field embedding K -> R as a function on elements."""
    if K.k == 1:
        return lambda c: R(c.v)
    # a root of K's modulus inside R
    step = (R.q - 1) // (K.q - 1)
    mod_ = K.modulus
    for j in range(K.q - 1):
        cand = R.exp(j * step)
        acc = R.zero
        for c in reversed(mod_):
            acc = acc * cand + c
        if not acc:
            root = cand
            break
    else:  # pragma: no cover
        raise ValueError("no embedding")

    def emb(c: GFElem):
        acc = R.zero
        for d in reversed(K.digits(c)):
            acc = acc * root + d
        return acc

    return emb


def _fq_points(F: RationalFunctionField, max_ext: int, max_size: int):
    K = F.K
    for f in range(1, max_ext + 1):
        deg = K.k * f
        if K.p ** deg > max_size:
            return
        R = GF(K.p, deg, max_degree=max(deg, 4))
        emb = _embedding(K, R)
        for t0 in R.elements():
            # points of smaller degree were already visited
            if f > 1 and any(R.frob(t0, K.k * g) == t0 for g in range(1, f) if f % g == 0):
                continue

            def fn(x, t0=t0, emb=emb):
                return x.evaluate(t0, emb)

            yield Point(R, f"t={t0.to_expr()}", fn)


def points(F, p: int, *, max_prime: int = 20000, max_ext: int = 12, max_size: int = 5000):
    """Deterministic sequence of specializations of F suitable for degree p."""
    if F is QQ:
        for ell in primerange(3, max_prime):
            if ell != p and (ell - 1) % p == 0:
                yield _qq_point(ell)
    elif isinstance(F, RationalFunctionField):
        yield from _fq_points(F, max_ext, max_size)


def eval_data(T, k, d, vals, pt: Point, cache=None):
    """Image of level-k data of tower T under pt and generator values vals."""
    R = pt.R
    if k == 0:
        v = pt(d)
        if v is None:
            raise DivisionByZero("pole")
        return v
    x = vals[k - 1]
    acc = R.zero
    for e, c in d.items():
        acc = acc + eval_data(T, k - 1, c, vals, pt) * x ** e
    return acc

"""Independent oracles shared by the tests (sympy and brute force only)."""

from __future__ import annotations

from functools import reduce
from itertools import product

import sympy

X = sympy.Symbol("X")
S2, S5 = sympy.sqrt(2), sympy.sqrt(5)


def to_sympy_q25(x):
    """An element of Q(ra, rc) with ra^2 = 2, rc^2 = 5 as a sympy number."""
    return sympy.Integer(0) + sum(
        sympy.Rational(c.numerator, c.denominator) * S2 ** i * S5 ** j
        for (i, j), c in x.coeffs().items())


def is_square_q25(x) -> bool:
    """x is a square in Q(sqrt2, sqrt5) iff X^2 - x factors there."""
    facs = sympy.factor_list(X ** 2 - to_sympy_q25(x), X, extension=[S2, S5])[1]
    return len(facs) > 1 or facs[0][1] == 2


def same_square_classes(xs, ys) -> bool:
    """<xs> == <ys> in E^x/(E^x)^2 for E = Q(sqrt2, sqrt5)."""
    def in_span(y, gens):
        one = y.tower.one
        for ex in product((0, 1), repeat=len(gens)):
            prod_ = reduce(lambda a, b: a * b, [g ** e for g, e in zip(gens, ex)], one)
            if is_square_q25(y * prod_):
                return True
        return False

    return all(in_span(y, xs) for y in ys) and all(in_span(x, ys) for x in xs)


def matrix_orders(n: int, p: int) -> list:
    """Sorted element orders of U_n(F_p), by plain integer matrix powers."""
    idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for vals in product(range(p), repeat=len(idx)):
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for (i, j), v in zip(idx, vals):
            m[i][j] = v
        ident = [[int(i == j) for j in range(n)] for i in range(n)]
        acc, k = m, 1
        while acc != ident:
            acc = [[sum(acc[i][t] * m[t][j] for t in range(n)) % p for j in range(n)]
                   for i in range(n)]
            k += 1
        out.append(k)
    return sorted(out)


def tower_elems(T, coeff):
    """Hypothesis strategy: tower elements with coefficients drawn from ``coeff``."""
    from hypothesis import strategies as st

    basis = T.basis()
    return st.lists(coeff, min_size=len(basis), max_size=len(basis)).map(
        lambda cs: T.from_coeffs(dict(zip(basis, cs))))

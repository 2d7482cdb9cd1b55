"""Dense univariate polynomials over an exact coefficient field.

A polynomial is a tuple of coefficients in ascending degree with no trailing
zeros; the zero polynomial is ``()``.  Coefficients are field elements that
support the arithmetic operators (``Fraction`` or ``GFElem``).  Functions
that need constants take the coefficient field ``K`` (anything with ``zero``
and ``one``).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import DivisionByZero
from .gf import GFElem


def trim(c) -> tuple:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def deg(a) -> int:
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = out[i] + y
    return trim(out)


def neg(a):
    return tuple(-x for x in a)


def sub(a, b):
    out = list(a) + [None] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = -y if out[i] is None else out[i] - y
    return trim(out)


def scale(a, s):
    if not s:
        return ()
    return trim([x * s for x in a])


def mul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        return scale(b, a[0])
    if len(b) == 1:
        return scale(a, b[0])
    if type(a[0]) is GFElem and len(a) + len(b) > 8:
        return _gf_mul(a, b, a[0].field)
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            t = x * y
            k = i + j
            out[k] = t if out[k] is None else out[k] + t
    zero = a[0] * 0
    return trim([zero if c is None else c for c in out])


def shift(a, n):
    """Multiply by t^n."""
    if not a:
        return ()
    zero = a[0] * 0
    return (zero,) * n + tuple(a)


def monomial(K, n, c=None):
    c = K.one if c is None else c
    return (K.zero,) * n + (c,) if c else ()


def divmod_(a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    if len(a) < len(b):
        return (), tuple(a)
    if type(b[0]) is GFElem and _gf_fast(b[0].field):
        F = b[0].field
        q, r = _gf_divmod([c.v for c in a], [c.v for c in b], F)
        return _to_elems(q, F), _to_elems(r, F)
    inv = 1 / b[-1] if not hasattr(b[-1], "inverse") else b[-1].inverse()
    r = list(a)
    db = len(b) - 1
    q = [None] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if not c:
            q[i - db] = c
            continue
        c = c * inv
        q[i - db] = c
        for j in range(db):
            r[i - db + j] = r[i - db + j] - c * b[j]
        r[i] = c * 0
    return trim(q), trim(r[:db])


def mod(a, b):
    return divmod_(a, b)[1]


def exact_div(a, b):
    q, r = divmod_(a, b)
    if r:
        raise ValueError("inexact polynomial division")
    return q


def monic(a):
    if not a or a[-1] == 1:
        return tuple(a)
    inv = a[-1].inverse() if hasattr(a[-1], "inverse") else 1 / a[-1]
    return tuple(x * inv for x in a[:-1]) + (a[-1] * inv,)


def gcd(a, b):
    """Monic gcd."""
    a, b = tuple(a), tuple(b)
    x = a[0] if a else (b[0] if b else None)
    if type(x) is GFElem and _gf_fast(x.field):
        F = x.field
        return _to_elems(_gf_gcd([c.v for c in a], [c.v for c in b], F), F)
    while b:
        a, b = b, mod(a, b)
    return monic(a)


def xgcd(a, b, K):
    """(g, s, t) with s*a + t*b = g monic."""
    r0, r1 = tuple(a), tuple(b)
    s0, s1 = (K.one,), ()
    t0, t1 = (), (K.one,)
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return (), (), ()
    lc = r0[-1]
    inv = lc.inverse() if hasattr(lc, "inverse") else 1 / lc
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


# finite-field kernels on integer codes


def _gf_fast(F) -> bool:
    return F.k == 1 or F.p == 2 or F._addt is not None


def _to_elems(codes, F):
    n = len(codes)
    while n and not codes[n - 1]:
        n -= 1
    return tuple(GFElem(F, v) for v in codes[:n])


def _pack(vals, nbytes):
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in vals), "little")


def _unpack(x, nbytes, count):
    raw = x.to_bytes(nbytes * count, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(count)]


def _kron_data(F):
    """Digit vectors of codes and reductions of z^j, j < 2k - 1."""
    data = getattr(F, "_kron", None)
    if data is None:
        digs = [F._digits(c) for c in range(F.q)]
        z = F.p if F.k > 1 else 1
        red = [F._digits(F.pow_code(z, j)) for j in range(2 * F.k - 1)]
        data = (digs, red)
        F._kron = data
    return data


def _gf_mul(a, b, F):
    """Product via Kronecker substitution into Python integers."""
    p, k = F.p, F.k
    n_out = len(a) + len(b) - 1
    if k == 1:
        bound = min(len(a), len(b)) * (p - 1) ** 2
        nb = bound.bit_length() // 8 + 1
        prod_ = _unpack(_pack([c.v for c in a], nb) * _pack([c.v for c in b], nb), nb, n_out)
        return _to_elems([x % p for x in prod_], F)
    digs, red = _kron_data(F)
    slot = 2 * k - 1
    pad = [0] * (k - 1)
    bound = min(len(a), len(b)) * k * (p - 1) ** 2
    nb = bound.bit_length() // 8 + 1
    fa = [d for c in a for d in digs[c.v] + pad]
    fb = [d for c in b for d in digs[c.v] + pad]
    flat = _unpack(_pack(fa, nb) * _pack(fb, nb), nb, n_out * slot)
    out = []
    for i in range(n_out):
        chunk = flat[i * slot:(i + 1) * slot]
        acc = [0] * k
        for j, cj in enumerate(chunk):
            if cj:
                for m, r in enumerate(red[j]):
                    if r:
                        acc[m] += cj * r
        code = 0
        for m in range(k - 1, -1, -1):
            code = code * p + acc[m] % p
        out.append(code)
    return _to_elems(out, F)


def _gf_ops(F):
    p = F.p
    if F.k == 1:
        return (lambda x, y: (x * y) % p, lambda x, y: (x - y) % p, lambda x: pow(x, -1, p))
    exp, log = F._exp, F._log
    if p == 2:
        def sub_(x, y):
            return x ^ y
    else:
        addt, negt = F._addt, F._negt

        def sub_(x, y):
            return addt[x][negt[y]]

    def mul_(x, y):
        return exp[log[x] + log[y]] if x and y else 0

    return mul_, sub_, F.inv_code


def _gf_divmod(a, b, F):
    r = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    bb = b[:db]
    p = F.p
    if F.k == 1:
        inv = pow(b[-1], -1, p)
        nz = [(j, y) for j, y in enumerate(bb) if y]
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i] % p
            if not c:
                continue
            c = (c * inv) % p
            q[i - db] = c
            base = i - db
            for j, y in nz:
                r[base + j] -= c * y
            r[i] = 0
        return q, [x % p for x in r[:db]]
    exp, log = F._exp, F._log
    inv_log = log[F.inv_code(b[-1])]
    nz = [(j, log[y]) for j, y in enumerate(bb) if y]
    if p == 2:
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i]
            if not c:
                continue
            lc = log[c] + inv_log
            if lc >= F.q - 1:
                lc -= F.q - 1
            q[i - db] = exp[lc]
            base = i - db
            for j, ly in nz:
                r[base + j] ^= exp[lc + ly]
            r[i] = 0
        return q, r[:db]
    addt, negt = F._addt, F._negt
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if not c:
            continue
        lc = log[c] + inv_log
        if lc >= F.q - 1:
            lc -= F.q - 1
        q[i - db] = exp[lc]
        base = i - db
        for j, ly in nz:
            r[base + j] = addt[r[base + j]][negt[exp[lc + ly]]]
        r[i] = 0
    return q, r[:db]


def _gf_gcd(a, b, F):
    def trim_(c):
        n = len(c)
        while n and not c[n - 1]:
            n -= 1
        return c[:n]

    a, b = trim_(a), trim_(b)
    while b:
        rem = trim_(_gf_divmod(a, b, F)[1]) if len(a) >= len(b) else a
        a, b = b, rem
    if not a:
        return a
    mul_, _, inv_ = _gf_ops(F)
    inv = inv_(a[-1])
    return [mul_(x, inv) for x in a]


def deriv(a):
    return trim([a[i] * i for i in range(1, len(a))])


def evaluate(a, x, zero=None):
    """Horner evaluation; x may live in any ring containing the coefficients."""
    if not a:
        return zero if zero is not None else x * 0
    acc = a[-1]
    for c in reversed(a[:-1]):
        acc = acc * x + c
    return acc


def power(a, n, K):
    result = (K.one,)
    base = tuple(a)
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def powmod(a, n, m, K):
    result = (K.one,)
    base = mod(a, m)
    while n:
        if n & 1:
            result = mod(mul(result, base), m)
        n >>= 1
        if n:
            base = mod(mul(base, base), m)
    return result


def map_coeffs(a, f):
    return trim([f(c) for c in a])


# factorization over finite fields


def _frob_root_poly(a, F):
    """For a in F[t] with a(t) = b(t^p), return b with coefficients p-th rooted."""
    p = F.p
    return trim([F.frob(a[i], F.k - 1) for i in range(0, len(a), p)])


def squarefree_decomposition_gf(f, F):
    """List of (g, e) with f = lc * prod g^e, g monic squarefree, over GF."""
    f = monic(f)
    if len(f) <= 1:
        return []
    out = []
    d = deriv(f)
    if not d:
        return [(g, e * F.p) for g, e in squarefree_decomposition_gf(_frob_root_poly(f, F), F)]
    c = gcd(f, d)
    w = exact_div(f, c)
    i = 1
    while len(w) > 1:
        y = gcd(w, c)
        z = exact_div(w, y)
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = exact_div(c, y)
    if len(c) > 1:
        for g, e in squarefree_decomposition_gf(_frob_root_poly(c, F), F):
            out.append((g, e * F.p))
    return out


def _ddf(f, F):
    """Distinct-degree factorization of a monic squarefree f."""
    out = []
    q = F.q
    x = (F.zero, F.one)
    h = x
    i = 0
    g = f
    while len(g) - 1 >= 2 * (i + 1):
        i += 1
        h = powmod(h, q, g, F)
        d = gcd(g, sub(h, x))
        if len(d) > 1:
            out.append((d, i))
            g = exact_div(g, d)
            h = mod(h, g)
    if len(g) > 1:
        out.append((g, len(g) - 1))
    return out


def _edf(f, d, F, rng):
    """Equal-degree splitting (Cantor-Zassenhaus)."""
    n = len(f) - 1
    if n == d:
        return [f]
    q = F.q
    while True:
        a = trim([F.exp(rng.randrange(q - 1)) if rng.random() < 0.9 else F.zero
                  for _ in range(n)])
        if len(a) <= 1:
            continue
        if F.p == 2:
            b = a
            acc = a
            for _ in range(d * F.k - 1):
                b = mod(mul(b, b), f)
                acc = add(acc, b)
            g = gcd(f, acc)
        else:
            g = gcd(f, sub(powmod(a, (q ** d - 1) // 2, f, F), (F.one,)))
        if 1 < len(g) < len(f):
            return _edf(g, d, F, rng) + _edf(exact_div(f, g), d, F, rng)


def factor_gf(f, F):
    """Monic irreducible factorization over GF: list of (g, e), sorted."""
    rng = random.Random(0x5EED)
    out = []
    for g, e in squarefree_decomposition_gf(f, F):
        for h, d in _ddf(g, F):
            for irr in _edf(h, d, F, rng):
                out.append((irr, e))
    merged = {}
    for g, e in out:
        merged[g] = merged.get(g, 0) + e
    return sorted(merged.items(), key=lambda ge: (len(ge[0]), [c.v for c in ge[0]]))


def factor_qq(f):
    """Monic irreducible factorization over Q via sympy: list of (g, e)."""
    from sympy import Poly, Rational, symbols

    t = symbols("t")
    expr = sum(Rational(c.numerator, c.denominator) * t ** i for i, c in enumerate(f))
    _, facs = Poly(expr, t).factor_list()
    out = []
    for g, e in facs:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
        out.append((monic(trim(coeffs)), e))
    return sorted(out, key=lambda ge: (len(ge[0]), ge[0]))

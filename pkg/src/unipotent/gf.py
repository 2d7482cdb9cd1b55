"""Finite fields GF(p^k) with table-driven arithmetic.

An element c_0 + c_1 z + ... + c_{k-1} z^(k-1), where z is a root of the
field's modulus, is encoded as the integer sum c_i p^i.  Multiplication goes
through discrete log tables, so fields are meant to be small (a few thousand
elements at most).

>>> F = GF(5, 2)
>>> z = F.gen
>>> (z ** 24) == F.one
True
"""

from __future__ import annotations

from itertools import product

from sympy import isprime

from .errors import DivisionByZero, FieldMismatch, Unsupported

_ADD_TABLE_LIMIT = 1024


def _pp_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pp_mod(a, m, p):
    """Remainder of a modulo monic m, coefficient lists over the prime field."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _pp_trim([x % p for x in a[:dm]])


def _pp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pp_trim(out)


def _pp_gcd(a, b, p):
    a, b = _pp_trim(list(a)), _pp_trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        bm = [(x * inv) % p for x in b]
        a, b = b, _pp_mod(a, bm, p)
    return a


def _pp_powmod(base, e, m, p):
    result = [1]
    base = _pp_mod(base, m, p)
    while e:
        if e & 1:
            result = _pp_mod(_pp_mul(result, base, p), m, p)
        base = _pp_mod(_pp_mul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible_prime_poly(m, p) -> bool:
    """Rabin's test for a monic polynomial over F_p (ascending coefficients)."""
    k = len(m) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    x = [0, 1]
    for r in {k // q for q in range(2, k + 1) if k % q == 0 and isprime(q)}:
        h = _pp_powmod(x, p ** r, m, p)
        diff = _pp_trim([(a - b) % p for a, b in _zip_pad(h, x)])
        g = _pp_gcd(m, diff, p)
        if len(g) > 1:
            return False
    h = _pp_powmod(x, p ** k, m, p)
    return _pp_trim([(a - b) % p for a, b in _zip_pad(h, x)]) == []


def _has_small_factor(m, p) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= k/2."""
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _pp_mod(m, list(low) + [1], p):
                return True
    return False


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def first_irreducible(p: int, k: int):
    """Lexicographically first monic irreducible of degree k over F_p."""
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        m = low + [1]
        if is_irreducible_prime_poly(m, p):
            return tuple(m)
    raise Unsupported(f"no irreducible of degree {k} over F_{p}")


class GF:
    """The finite field with p**k elements.

    ``max_degree`` guards the user-facing constructor: base fields are limited
    to k <= 4, and their modulus is checked by exhaustive factor search.
    Larger fields (used internally as residue fields) are checked with
    Rabin's test.
    """

    _cache: dict = {}

    def __new__(cls, p, k=1, modulus=None, *, max_degree=4):
        key = (p, k, tuple(modulus) if modulus is not None else None)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        self._setup(p, k, modulus, max_degree)
        cls._cache[key] = self
        if modulus is None:
            cls._cache[(p, k, self.modulus)] = self
        return self

    def _setup(self, p, k, modulus, max_degree):
        if not isprime(p):
            raise Unsupported(f"characteristic {p} is not prime")
        if k < 1 or k > max_degree:
            raise Unsupported(f"extension degree {k} outside 1..{max_degree}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.characteristic = p
        if modulus is None:
            modulus = first_irreducible(p, k) if k > 1 else (0, 1)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise Unsupported("modulus must be monic of the field degree")
        if k > 1:
            bad = _has_small_factor(list(modulus), p) if k <= 4 else \
                not is_irreducible_prime_poly(list(modulus), p)
            if bad:
                raise Unsupported(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._build_tables()
        self.zero = GFElem(self, 0)
        self.one = GFElem(self, 1)
        self.gen = GFElem(self, p if k > 1 else 0)

    # table construction
    def _digits(self, code):
        return [(code // self.p ** i) % self.p for i in range(self.k)]

    def _encode(self, digits):
        return sum((d % self.p) * self.p ** i for i, d in enumerate(digits))

    def _slow_mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        prod_ = _pp_mul(self._digits(a), self._digits(b), self.p)
        return self._encode(_pp_mod(prod_, list(self.modulus), self.p))

    def _build_tables(self):
        q, p = self.q, self.p
        order = q - 1
        exp = None
        for g in range(2, q) if q > 2 else [1]:
            seq = [1]
            x = 1
            for _ in range(order - 1):
                x = self._slow_mul(x, g)
                if x == 1:
                    break
                seq.append(x)
            if len(seq) == order:
                exp = seq
                self.primitive = g
                break
        self._exp = exp + exp
        self._log = [0] * q
        for i, x in enumerate(exp):
            self._log[x] = i
        if self.k == 1:
            self._addt = None
        elif p == 2:
            self._addt = None
        elif q <= _ADD_TABLE_LIMIT:
            digs = [self._digits(c) for c in range(q)]
            self._addt = [[self._encode([x + y for x, y in zip(da, db)])
                           for db in digs] for da in digs]
        else:
            self._addt = None
        self._negt = [self._encode([-d for d in self._digits(c)]) for c in range(q)]

    # raw code arithmetic
    def add_codes(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._addt is not None:
            return self._addt[a][b]
        return self._encode([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def neg_code(self, a):
        return self._negt[a]

    def mul_codes(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv_code(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero in " + self.descriptor())
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow_code(self, a, e):
        if a == 0:
            if e < 0:
                raise DivisionByZero("inverse of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    # public API
    def __call__(self, x) -> "GFElem":
        if isinstance(x, GFElem):
            if x.field is self:
                return x
            if x.field.p == self.p and x.field.k == 1:
                return GFElem(self, x.v)
            raise FieldMismatch(f"{x.field.descriptor()} -> {self.descriptor()}")
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return GFElem(self, x % self.p)
        if isinstance(x, (list, tuple)):
            return GFElem(self, self._encode(list(x)))
        try:
            from fractions import Fraction
            if isinstance(x, Fraction):
                return self(x.numerator) / self(x.denominator)
        except ImportError:  # pragma: no cover
            pass
        raise FieldMismatch(f"cannot coerce {x!r} into {self.descriptor()}")

    def elements(self):
        return [GFElem(self, c) for c in range(self.q)]

    def digits(self, x: "GFElem"):
        return self._digits(x.v)

    def frob(self, x: "GFElem", j: int = 1) -> "GFElem":
        """x -> x^(p^j)."""
        return GFElem(self, self.pow_code(x.v, self.p ** (j % self.k)))

    def log(self, x: "GFElem") -> int:
        if not x.v:
            raise DivisionByZero("log of zero")
        return self._log[x.v]

    def exp(self, n: int) -> "GFElem":
        return GFElem(self, self._exp[n % (self.q - 1)])

    def root_of_unity(self, n: int):
        """A primitive n-th root of unity, or None if n does not divide q-1."""
        if (self.q - 1) % n:
            return None
        return self.exp((self.q - 1) // n)

    def pth_root(self, x: "GFElem", n: int):
        """Some y with y**n == x, or None."""
        if not x.v:
            return self.zero
        if n % self.p == 0:
            m = n
            y = x
            while m % self.p == 0:
                y = self.frob(y, self.k - 1)
                m //= self.p
            return self.pth_root(y, m) if m > 1 else y
        L = self._log[x.v]
        order = self.q - 1
        from math import gcd
        g = gcd(n, order)
        if L % g:
            return None
        k = (L // g) * pow(n // g, -1, order // g) % (order // g) if order // g > 1 else 0
        return self.exp(k)

    def trace(self, x: "GFElem") -> "GFElem":
        """Absolute trace to the prime field."""
        acc = x
        y = x
        for _ in range(self.k - 1):
            y = self.frob(y)
            acc = acc + y
        return acc

    def is_prime_field(self) -> bool:
        return self.k == 1

    def descriptor(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def __repr__(self):
        return self.descriptor()

    def __reduce__(self):
        return (_rebuild_gf, (self.p, self.k, self.modulus))


class GFElem:
    """Element of a finite field, with the usual operators."""

    __slots__ = ("field", "v")

    def __init__(self, field: GF, v: int):
        self.field = field
        self.v = v

    def _coerce(self, other):
        if isinstance(other, GFElem):
            if other.field is not self.field:
                if other.field.p == self.field.p and (other.field.k == 1 or self.field.k == 1):
                    if other.field.k == 1:
                        return other.v
                    return NotImplemented
                raise FieldMismatch(
                    f"{self.field.descriptor()} vs {other.field.descriptor()}")
            return other.v
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElem(self.field, self.field.add_codes(self.v, o))

    __radd__ = __add__

    def __neg__(self):
        return GFElem(self.field, self.field.neg_code(self.v))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElem(self.field, self.field.add_codes(self.v, self.field.neg_code(o)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElem(self.field, self.field.add_codes(o, self.field.neg_code(self.v)))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElem(self.field, self.field.mul_codes(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElem(self.field, self.field.mul_codes(self.v, self.field.inv_code(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElem(self.field, self.field.mul_codes(o, self.field.inv_code(self.v)))

    def __pow__(self, e: int):
        return GFElem(self.field, self.field.pow_code(self.v, e))

    def inverse(self):
        return GFElem(self.field, self.field.inv_code(self.v))

    def __eq__(self, other):
        if isinstance(other, GFElem):
            if other.field is self.field:
                return self.v == other.v
            if other.field.p != self.field.p:
                return False
            if other.field.k == 1 or self.field.k == 1:
                return self.v == other.v and self.v < self.field.p
            return False
        if isinstance(other, int) and not isinstance(other, bool):
            return self.v == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return self.to_expr()

    def to_expr(self) -> str:
        """Expression-grammar form; z names the generator of GF(p^k)."""
        F = self.field
        if F.k == 1:
            return str(self.v)
        terms = []
        for i, d in enumerate(F._digits(self.v)):
            if d:
                mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
                if not mono:
                    terms.append(str(d))
                elif d == 1:
                    terms.append(mono)
                else:
                    terms.append(f"{d}*{mono}")
        if not terms:
            return "0"
        return "+".join(reversed(terms)) if len(terms) > 1 else terms[0]

    def to_json(self):
        if self.field.k == 1:
            return self.v
        return self.field._digits(self.v)


def _rebuild_gf(p, k, modulus):
    return GF(p, k, modulus, max_degree=k)

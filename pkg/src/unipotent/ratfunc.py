"""The rational numbers and rational function fields K(t).

Rationals are plain ``fractions.Fraction`` values; ``QQ`` is the field
object that describes them.  Elements of K(t) are ``RatFunc`` values kept in
canonical form: numerator and denominator coprime, denominator monic.
"""

from __future__ import annotations

from fractions import Fraction

from . import poly as P
from .errors import DivisionByZero, FieldMismatch
from .gf import GF, GFElem


class Rationals:
    """The field Q; elements are ``Fraction`` instances."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)
    kind = "Rationals"

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise FieldMismatch(f"cannot coerce {x!r} into Q")

    def descriptor(self) -> str:
        return "Q"

    def __repr__(self):
        return "Q"

    def __reduce__(self):
        return (_qq, ())


QQ = Rationals()


def _qq():
    return QQ


def coeff_to_expr(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return c.to_expr()


def coeff_to_json(c):
    if isinstance(c, Fraction):
        return str(c)
    return c.to_json()


def coeff_from_json(K, v):
    if K is QQ:
        if not isinstance(v, str):
            raise FieldMismatch("rational coefficients are serialized as strings")
        return Fraction(v)
    if isinstance(v, bool) or not isinstance(v, (int, list)):
        raise FieldMismatch(f"bad finite field coefficient {v!r}")
    return K(v)


class RationalFunctionField:
    """K(t) for K = Q or a finite field."""

    kind = "RationalFunctions"
    _cache: dict = {}

    def __new__(cls, K):
        hit = cls._cache.get(id(K))
        if hit is not None:
            return hit
        self = super().__new__(cls)
        if not (K is QQ or isinstance(K, GF)):
            raise FieldMismatch("coefficient field must be Q or a finite field")
        self.K = K
        self.characteristic = K.characteristic
        self.zero = RatFunc(self, (), (K.one,), _canon=False)
        self.one = RatFunc(self, (K.one,), (K.one,), _canon=False)
        self.t = RatFunc(self, (K.zero, K.one), (K.one,), _canon=False)
        cls._cache[id(K)] = self
        return self

    def __call__(self, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            if x.field is not self:
                raise FieldMismatch("rational function from another field")
            return x
        if isinstance(x, tuple):
            return RatFunc(self, P.trim(x), (self.K.one,))
        c = self.K(x)
        return RatFunc(self, P.trim((c,)), (self.K.one,), _canon=False)

    def from_poly(self, num, den=None) -> "RatFunc":
        den = (self.K.one,) if den is None else den
        return RatFunc(self, P.trim(num), P.trim(den))

    def descriptor(self) -> str:
        return f"{self.K.descriptor()}(t)"

    def __repr__(self):
        return self.descriptor()

    def __reduce__(self):
        return (RationalFunctionField, (self.K,))


def _coerce(F: RationalFunctionField, other):
    if isinstance(other, RatFunc):
        if other.field is not F:
            raise FieldMismatch(f"{F.descriptor()} vs {other.field.descriptor()}")
        return other
    if isinstance(other, (int, Fraction, GFElem)):
        return F(other)
    return None


class RatFunc:
    """Element num/den of K(t)."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den, _canon=True):
        self.field = field
        self._hash = None
        if _canon:
            num, den = _canonical(field, num, den)
        self.num = num
        self.den = den

    # structure
    def is_poly(self) -> bool:
        return len(self.den) == 1

    def deg_num(self) -> int:
        return len(self.num) - 1

    def deg_den(self) -> int:
        return len(self.den) - 1

    def val_inf(self) -> int:
        """v_inf(f/g) = deg g - deg f."""
        if not self.num:
            raise DivisionByZero("valuation of zero")
        return self.deg_den() - self.deg_num()

    def is_constant(self) -> bool:
        return len(self.den) == 1 and len(self.num) <= 1

    def constant_value(self):
        return self.num[0] if self.num else self.field.K.zero

    # arithmetic
    def __add__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        F = self.field
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            n = P.add(self.num, o.num)
            if len(self.den) == 1:
                return RatFunc(F, n, self.den, _canon=False)
            return RatFunc(F, n, self.den)
        if len(o.den) == 1:
            return RatFunc(F, P.add(self.num, P.mul(o.num, self.den)), self.den, _canon=False)
        if len(self.den) == 1:
            return RatFunc(F, P.add(o.num, P.mul(self.num, o.den)), o.den, _canon=False)
        g = P.gcd(self.den, o.den)
        if len(g) == 1:
            n = P.add(P.mul(self.num, o.den), P.mul(o.num, self.den))
            return RatFunc(F, n, P.mul(self.den, o.den), _canon=False)
        d1 = P.exact_div(self.den, g)
        d2 = P.exact_div(o.den, g)
        n = P.add(P.mul(self.num, d2), P.mul(o.num, d1))
        return RatFunc(F, n, P.mul(d1, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, P.neg(self.num), self.den, _canon=False)

    def __sub__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        F = self.field
        if not self.num or not o.num:
            return F.zero
        if len(self.den) == 1 and len(o.den) == 1:
            return RatFunc(F, P.mul(self.num, o.num), self.den, _canon=False)
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        g1 = P.gcd(n1, d2) if len(d2) > 1 else (F.K.one,)
        g2 = P.gcd(n2, d1) if len(d1) > 1 else (F.K.one,)
        if len(g1) > 1:
            n1, d2 = P.exact_div(n1, g1), P.exact_div(d2, g1)
        if len(g2) > 1:
            n2, d1 = P.exact_div(n2, g2), P.exact_div(d1, g2)
        num = P.mul(n1, n2)
        den = P.mul(d1, d2)
        lc = den[-1]
        if lc != 1:
            inv = lc.inverse() if hasattr(lc, "inverse") else 1 / lc
            num, den = P.scale(num, inv), P.scale(den, inv)
        return RatFunc(F, num, den, _canon=False)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero in " + self.field.descriptor())
        lc = self.num[-1]
        inv = lc.inverse() if hasattr(lc, "inverse") else 1 / lc
        return RatFunc(self.field, P.scale(self.den, inv), P.scale(self.num, inv), _canon=False)

    def __truediv__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(self.field, other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        K = self.field.K
        return RatFunc(self.field, P.power(self.num, e, K), P.power(self.den, e, K),
                       _canon=False) if self.num or e else self.field.one

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, GFElem)):
            try:
                return self == self.field(other)
            except FieldMismatch:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def map_coeffs(self, f):
        """Apply a field automorphism of K coefficientwise."""
        return RatFunc(self.field, P.map_coeffs(self.num, f), P.map_coeffs(self.den, f))

    def evaluate(self, x, embed=None):
        """Value at t = x, coefficients pushed through ``embed`` first."""
        emb = embed or (lambda c: c)
        num = P.evaluate(tuple(emb(c) for c in self.num), x)
        den = P.evaluate(tuple(emb(c) for c in self.den), x)
        if not den:
            raise DivisionByZero("evaluation at a pole")
        return num / den

    # printing
    def __repr__(self):
        return self.to_expr()

    def to_expr(self) -> str:
        n = poly_to_expr(self.num)
        if len(self.den) == 1:
            return n
        d = poly_to_expr(self.den)
        return f"({n})/({d})"

    def to_json(self):
        return {"n": [coeff_to_json(c) for c in self.num],
                "d": [coeff_to_json(c) for c in self.den]}


def _canonical(F, num, den):
    num = P.trim(num)
    den = P.trim(den)
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return (), (F.K.one,)
    if len(den) > 1:
        g = P.gcd(num, den)
        if len(g) > 1:
            num, den = P.exact_div(num, g), P.exact_div(den, g)
    lc = den[-1]
    if lc != 1:
        inv = lc.inverse() if hasattr(lc, "inverse") else 1 / lc
        num, den = P.scale(num, inv), P.scale(den, inv)
    return num, den


def poly_to_expr(a) -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        cs = coeff_to_expr(c)
        atom = cs if _is_atom(cs) else f"({cs})"
        if i == 0:
            terms.append(atom)
            continue
        mono = "t" if i == 1 else f"t^{i}"
        if c == 1:
            terms.append(mono)
        else:
            terms.append(f"{atom}*{mono}")
    return join_terms(terms)


def join_terms(terms) -> str:
    """Join signed terms: ['a', '-b'] -> 'a-b'."""
    out = terms[0]
    for s in terms[1:]:
        out += s if s.startswith("-") else "+" + s
    return out


def _is_atom(s: str) -> bool:
    return s.lstrip("-").isdigit() or (s.replace("z", "").replace("^", "").isdigit()
                                       and "+" not in s and "*" not in s)


def ratfunc_from_json(F: RationalFunctionField, v) -> RatFunc:
    if not isinstance(v, dict) or set(v) != {"n", "d"}:
        raise FieldMismatch("rational function must be {'n': [...], 'd': [...]}")
    num = tuple(coeff_from_json(F.K, c) for c in v["n"])
    den = tuple(coeff_from_json(F.K, c) for c in v["d"])
    return RatFunc(F, num, den)

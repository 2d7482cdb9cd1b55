"""Iterated Kummer and Artin-Schreier extensions of a base field.

A ``Tower`` is a base field with an ordered list of generators.  Generator
k satisfies either ``x^p = r`` (Kummer) or ``x^p - x = r`` (Artin-Schreier)
with ``r`` an element of the tower below it.  Adjoining returns a new tower
whose parent is the old one; elements of the parent embed unchanged.

Element data is nested and sparse: level 0 is a base field value, level k is
a dict ``{exponent: level k-1 data}`` without zero entries.  The top
generator is the outermost key.

>>> from fractions import Fraction
>>> from unipotent.ratfunc import QQ
>>> T = Tower(QQ, 2).adjoin("r2", "kummer", 2)
>>> r = T.gen(0)
>>> (1 + r) * (r - 1)
1
>>> (1 + r).inverse()
r2-1
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from . import poly as P
from .base import coefficient_field, root_of_unity
from .errors import (
    FieldMismatch, MissingImage, MissingRootOfUnity, NotAField, TowerMismatch,
    WrongCharacteristic, ZeroInverse,
)
from .gf import GFElem
from .ratfunc import RatFunc, coeff_from_json, coeff_to_expr, coeff_to_json, join_terms, ratfunc_from_json

KUMMER = "kummer"
ARTIN_SCHREIER = "artin-schreier"
_KIND_ALIASES = {"kummer": KUMMER, "as": ARTIN_SCHREIER, "artin-schreier": ARTIN_SCHREIER,
                 "artinschreier": ARTIN_SCHREIER}


class Generator:
    """A tower generator: name, kind and defining element one level down."""

    __slots__ = ("name", "kind", "rhs", "level")

    def __init__(self, name: str, kind: str, rhs: "TowerElem", level: int):
        self.name = name
        self.kind = kind
        self.rhs = rhs
        self.level = level

    def __repr__(self):
        rel = "^p = " if self.kind == KUMMER else "^p - x = "
        return f"{self.name}{rel}{self.rhs.to_expr()}"


class Tower:
    """The base field F with generators x_1, ..., x_n adjoined in order."""

    def __init__(self, base, p: int, xi=None, *, _parent=None, _gen=None):
        self.base = base
        self.p = p
        self.parent = _parent
        if _parent is None:
            self.gens: tuple = ()
            if xi is not None:
                xi = base(xi)
                if xi == base.one or xi ** p != base.one:
                    raise MissingRootOfUnity(f"{xi} is not a primitive {p}-th root of unity")
            self.xi = xi
            self._root = self
        else:
            self.gens = _parent.gens + (_gen,)
            self.xi = _parent.xi
            self._root = _parent._root
        self.n = len(self.gens)
        self._zero_base = base.zero
        self._one_base = base.one
        self._rels = [(g.kind, g.rhs.data) for g in self.gens]
        self._prefixes = (_parent._prefixes if _parent is not None else []) + [self]
        self.certificate = None

    # structure
    @property
    def degree(self) -> int:
        return self.p ** self.n

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    def names(self) -> list:
        return [g.name for g in self.gens]

    def prefix(self, k: int) -> "Tower":
        """The tower with the first k generators."""
        return self._prefixes[k]

    def is_prefix_of(self, other: "Tower") -> bool:
        return self.n <= other.n and other._prefixes[self.n] is self

    def index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.n:
                raise MissingImage(f"no generator {name}")
            return name
        for i, g in enumerate(self.gens):
            if g.name == name:
                return i
        raise MissingImage(f"no generator named {name!r}")

    def adjoin(self, name: str, kind: str, rhs) -> "Tower":
        """New tower with one more generator; raises on impossible kinds."""
        kind = _KIND_ALIASES.get(kind.lower().replace("_", "-"), kind)
        char = self.characteristic
        if kind == KUMMER:
            if char == self.p:
                raise WrongCharacteristic("Kummer generators need characteristic prime to p")
            if self.xi is None:
                xi = root_of_unity(self.base, self.p)
                if xi is None:
                    raise MissingRootOfUnity(
                        f"{self.base.descriptor()} has no primitive {self.p}-th root of unity")
                self._root.xi = xi
                for t in self._prefixes:
                    t.xi = xi
                self.xi = xi
        elif kind == ARTIN_SCHREIER:
            if char != self.p:
                raise WrongCharacteristic("Artin-Schreier generators need characteristic p")
        else:
            raise FieldMismatch(f"unknown generator kind {kind!r}")
        if not name.isidentifier() or name in self.names() or name in ("t", "z"):
            raise FieldMismatch(f"bad or duplicate generator name {name!r}")
        r = self(rhs)
        if kind == KUMMER and not r:
            raise NotAField("zero radicand")
        return Tower(self.base, self.p, _parent=self, _gen=Generator(name, kind, r, self.n + 1))

    def descriptor(self) -> str:
        parts = [f"{g.name}" for g in self.gens]
        return f"{self.base.descriptor()}({', '.join(parts)})"

    def __repr__(self):
        return f"Tower<{self.descriptor()}, p={self.p}, degree {self.degree}>"

    def same_as(self, other: "Tower") -> bool:
        if self is other:
            return True
        if self.base is not other.base or self.p != other.p or self.n != other.n:
            return False
        return all(a.name == b.name and a.kind == b.kind and a.rhs.data == b.rhs.data
                   for a, b in zip(self.gens, other.gens))

    # elements
    def __call__(self, x) -> "TowerElem":
        if isinstance(x, TowerElem):
            if x.tower is self:
                return x
            if x.tower.is_prefix_of(self):
                return TowerElem(self, self.embed_data(x.data, x.tower.n))
            if x.tower.same_as(self):
                return TowerElem(self, x.data)
            raise TowerMismatch(f"{x.tower.descriptor()} is not inside {self.descriptor()}")
        if isinstance(x, str):
            return self.parse(x)
        c = self.base(x)
        return TowerElem(self, self.embed_data(c, 0))

    @property
    def zero(self) -> "TowerElem":
        return TowerElem(self, self._zero_data(self.n))

    @property
    def one(self) -> "TowerElem":
        return TowerElem(self, self.embed_data(self._one_base, 0))

    def gen(self, i) -> "TowerElem":
        i = self.index(i)
        d = {1: self._one_data(i)}
        return TowerElem(self, self.embed_data(d, i + 1))

    def gens_elems(self) -> list:
        return [self.gen(i) for i in range(self.n)]

    def env(self) -> dict:
        from .expr import base_env

        env = {k: self(v) for k, v in base_env(self.base).items()}
        for i, g in enumerate(self.gens):
            env[g.name] = self.gen(i)
        return env

    def parse(self, text: str) -> "TowerElem":
        from .expr import evaluate

        return self(evaluate(text, self.env(), self))

    def basis(self) -> list:
        """Monomial basis, p^n exponent tuples in lexicographic order."""
        return list(product(range(self.p), repeat=self.n))

    def from_coeffs(self, coeffs: dict) -> "TowerElem":
        """Element from a flat map exponent-tuple -> base element."""
        acc = self._zero_data(self.n)
        for exps, c in coeffs.items():
            if len(exps) != self.n or any(not 0 <= e < self.p for e in exps):
                raise FieldMismatch(f"bad exponent tuple {exps}")
            c = self.base(c)
            if not c:
                continue
            d = c
            for e in exps:
                d = {e: d}
            acc = self._add(self.n, acc, d)
        return TowerElem(self, acc)

    # data plumbing
    def _zero_data(self, k):
        return self._zero_base if k == 0 else {}

    def embed_data(self, d, k, to=None):
        """Wrap level-k data as level-``to`` data (default: this tower)."""
        for _ in range((self.n if to is None else to) - k):
            d = {0: d} if (d if isinstance(d, dict) else bool(d)) else {}
        return d

    @staticmethod
    def _nz(d) -> bool:
        return bool(d)

    def _add(self, k, x, y):
        if k == 0:
            return x + y
        if not x:
            return y
        if not y:
            return x
        out = dict(x)
        for e, c in y.items():
            if e in out:
                s = self._add(k - 1, out[e], c)
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return out

    def _neg(self, k, x):
        if k == 0:
            return -x
        return {e: self._neg(k - 1, c) for e, c in x.items()}

    def _scale(self, k, x, c):
        """Multiply by a base element c != 0."""
        if k == 0:
            return x * c
        return {e: self._scale(k - 1, v, c) for e, v in x.items()}

    def _mul(self, k, x, y):
        if k == 0:
            return x * y
        if not x or not y:
            return {}
        if len(x) == 1 and 0 in x:
            c = x[0]
            out = {}
            for e, v in y.items():
                w = self._mul(k - 1, c, v)
                if w:
                    out[e] = w
            return out
        if len(y) == 1 and 0 in y:
            return self._mul(k, y, x)
        acc = {}
        for i, a in x.items():
            for j, b in y.items():
                m = i + j
                w = self._mul(k - 1, a, b)
                if m in acc:
                    acc[m] = self._add(k - 1, acc[m], w)
                else:
                    acc[m] = w
        p = self.p
        kind, r = self._rels[k - 1]
        for m in range(2 * p - 2, p - 1, -1):
            c = acc.pop(m, None)
            if not c:
                continue
            if kind == KUMMER:
                tgt = [(m - p, self._mul(k - 1, c, r))]
            else:
                tgt = [(m - p + 1, c), (m - p, self._mul(k - 1, c, r))]
            for e, w in tgt:
                acc[e] = self._add(k - 1, acc[e], w) if e in acc else w
        return {e: c for e, c in acc.items() if c}

    def _inv(self, k, x):
        if k == 0:
            if not x:
                raise ZeroInverse("inverse of zero")
            return 1 / x if isinstance(x, Fraction) else x.inverse()
        if not x:
            raise ZeroInverse("inverse of zero")
        if len(x) == 1 and 0 in x:
            return {0: self._inv(k - 1, x[0])}
        kind, r = self._rels[k - 1]
        if kind == KUMMER:
            return self._kummer_inv(k, x)
        lower = self.prefix(k - 1)
        coeffs = P.trim(tuple(TowerElem(lower, x.get(e, lower._zero_data(k - 1)))
                              for e in range(self.p)))
        kind, r = self._rels[k - 1]
        one = lower.one
        rr = TowerElem(lower, r)
        mod_ = [-rr] + [lower.zero] * (self.p - 1) + [one]
        if kind == ARTIN_SCHREIER:
            mod_[1] = -one
        g, s, _ = P.xgcd(coeffs, tuple(mod_), lower)
        if len(g) != 1:
            raise NotAField(f"zero divisor: common factor of degree {len(g) - 1}",
                            factor=[c.to_expr() for c in g])
        return {e: c.data for e, c in enumerate(s) if c}

    def _kummer_inv(self, k, x):
        """x^-1 = (product of the p-1 other conjugates) / norm, avoiding xgcd."""
        xi = self.xi
        prod = None
        for i in range(1, self.p):
            conj = {e: self._scale(k - 1, c, xi ** (i * e % self.p)) for e, c in x.items()}
            prod = conj if prod is None else self._mul(k, prod, conj)
        norm = self._mul(k, x, prod)
        if not norm:
            raise NotAField("zero divisor: the norm vanishes")
        if set(norm) != {0}:  # pragma: no cover
            raise NotAField("norm left the lower field")
        return self._mul(k, prod, {0: self._inv(k - 1, norm[0])})

    def _pow(self, k, x, e):
        result = self._one_data(k)
        base = x
        while e:
            if e & 1:
                result = self._mul(k, result, base)
            e >>= 1
            if e:
                base = self._mul(k, base, base)
        return result

    def _one_data(self, k):
        d = self._one_base
        for _ in range(k):
            d = {0: d}
        return d

    def _flat(self, k, d, suffix, out):
        if k == 0:
            out[suffix] = d
            return
        for e, c in d.items():
            self._flat(k - 1, c, (e,) + suffix, out)

    def _key(self, k, d):
        if k == 0:
            return d
        return tuple(sorted((e, self._key(k - 1, c)) for e, c in d.items()))


def _coerce(tower: Tower, other):
    if isinstance(other, TowerElem):
        if other.tower is tower:
            return other.data
        return tower(other).data
    if isinstance(other, (int, Fraction, GFElem, RatFunc)):
        return tower.embed_data(tower.base(other), 0)
    return None


class TowerElem:
    """An element of a tower, with field operators."""

    __slots__ = ("tower", "data", "_keyc")

    def __init__(self, tower: Tower, data):
        self.tower = tower
        self.data = data
        self._keyc = None

    def _lift(self, other):
        """Bring self and other into a common tower."""
        if isinstance(other, TowerElem) and other.tower is not self.tower:
            if self.tower.is_prefix_of(other.tower):
                return other.tower(self), other
            if other.tower.is_prefix_of(self.tower):
                return self, self.tower(other)
            if other.tower.same_as(self.tower):
                return self, TowerElem(self.tower, other.data)
            raise TowerMismatch(f"{self.tower.descriptor()} vs {other.tower.descriptor()}")
        return self, other

    def __add__(self, other):
        a, b = self._lift(other)
        d = _coerce(a.tower, b)
        if d is None:
            return NotImplemented
        return TowerElem(a.tower, a.tower._add(a.tower.n, a.data, d))

    __radd__ = __add__

    def __neg__(self):
        return TowerElem(self.tower, self.tower._neg(self.tower.n, self.data))

    def __sub__(self, other):
        a, b = self._lift(other)
        d = _coerce(a.tower, b)
        if d is None:
            return NotImplemented
        T = a.tower
        return TowerElem(T, T._add(T.n, a.data, T._neg(T.n, d)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._lift(other)
        T = a.tower
        if isinstance(b, (int, Fraction, GFElem, RatFunc)):
            c = T.base(b)
            if not c:
                return T.zero
            return TowerElem(T, T._scale(T.n, a.data, c))
        d = _coerce(T, b)
        if d is None:
            return NotImplemented
        return TowerElem(T, T._mul(T.n, a.data, d))

    __rmul__ = __mul__

    def inverse(self) -> "TowerElem":
        T = self.tower
        return TowerElem(T, T._inv(T.n, self.data))

    def __truediv__(self, other):
        a, b = self._lift(other)
        if isinstance(b, TowerElem):
            return a * b.inverse()
        d = _coerce(a.tower, b)
        if d is None:
            return NotImplemented
        return a * TowerElem(a.tower, d).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        T = self.tower
        if e < 0:
            return self.inverse() ** (-e)
        return TowerElem(T, T._pow(T.n, self.data, e))

    def __eq__(self, other):
        if isinstance(other, TowerElem):
            try:
                a, b = self._lift(other)
            except TowerMismatch:
                return False
            return a.data == b.data
        if isinstance(other, (int, Fraction, GFElem, RatFunc)):
            try:
                return self.data == _coerce(self.tower, other)
            except FieldMismatch:
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __bool__(self):
        return bool(self.data)

    def key(self):
        if self._keyc is None:
            self._keyc = self.tower._key(self.tower.n, self.data)
        return self._keyc

    # views
    def coeffs(self) -> dict:
        """Flat map from exponent tuples (first generator first) to base elements."""
        out = {}
        self.tower._flat(self.tower.n, self.data, (), out)
        return out

    def base_value(self):
        """The base field value if self lies in the base field, else None."""
        d = self.data
        for _ in range(self.tower.n):
            if not d:
                return self.tower._zero_base
            if len(d) != 1 or 0 not in d:
                return None
            d = d[0]
        return d

    def in_base(self) -> bool:
        return self.base_value() is not None

    def level(self) -> int:
        """Index of the highest generator occurring (0 for base elements)."""
        d = self.data
        for k in range(self.tower.n, 0, -1):
            if set(d) - {0}:
                return k
            if not d:
                return 0
            d = d[0]
        return 0

    def lower_to(self, k: int) -> "TowerElem":
        """The same element viewed in prefix(k); requires level() <= k."""
        d = self.data
        for _ in range(self.tower.n - k):
            if not d:
                return self.tower.prefix(k).zero
            if set(d) - {0}:
                raise TowerMismatch("element does not lie in the requested subtower")
            d = d[0]
        return TowerElem(self.tower.prefix(k), d)

    def substitute(self, images, base_map=None, target: Tower | None = None) -> "TowerElem":
        """Replace generators by images and push coefficients through base_map."""
        T = self.tower
        target = target or T
        imgs = _image_list(T, images, target)
        bm = base_map or (lambda c: c)
        pw = {}

        def powers(k):
            if k not in pw:
                img = imgs[k - 1]
                if img is None:
                    raise MissingImage(f"no image for generator {T.gens[k - 1].name}")
                lst = [target.one, img]
                for _ in range(T.p - 2):
                    lst.append(lst[-1] * img)
                pw[k] = lst
            return pw[k]

        def ev(k, d):
            if k == 0:
                return TowerElem(target, target.embed_data(target.base(bm(d)), 0))
            acc = None
            for e, c in d.items():
                term = ev(k - 1, c)
                if e:
                    term = term * powers(k)[e]
                acc = term if acc is None else acc + term
            return acc if acc is not None else target.zero

        return ev(T.n, self.data)

    # printing and serialization
    def __repr__(self):
        return self.to_expr()

    def to_expr(self) -> str:
        names = self.tower.names()
        items = sorted(self.coeffs().items(), key=lambda kv: tuple(reversed(kv[0])), reverse=True)
        if not items:
            return "0"
        terms = []
        for exps, c in items:
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)
            cs = coeff_to_expr(c)
            if not mono:
                terms.append(cs if _simple(cs) else f"({cs})")
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{cs}*{mono}" if _simple(cs) else f"({cs})*{mono}")
        return join_terms(terms)

    def to_json(self) -> list:
        items = sorted(self.coeffs().items())
        return [[list(e), coeff_to_json(c)] for e, c in items]


def _simple(s: str) -> bool:
    return s.lstrip("-").isdigit()


def _image_list(T: Tower, images, target: Tower) -> list:
    if isinstance(images, dict):
        lst = [None] * T.n
        for k, v in images.items():
            lst[T.index(k)] = target(v)
        return lst
    lst = [target(v) if v is not None else None for v in images]
    if len(lst) < T.n:
        lst += [None] * (T.n - len(lst))
    return lst


def elem_from_json(T: Tower, v) -> TowerElem:
    """Inverse of TowerElem.to_json."""
    if not isinstance(v, list):
        raise FieldMismatch("tower element must be a list of [exponents, coefficient]")
    coeffs = {}
    for item in v:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], list):
            raise FieldMismatch("bad tower element entry")
        exps = tuple(item[0])
        if exps in coeffs:
            raise FieldMismatch("duplicate exponent tuple")
        coeffs[exps] = base_from_json(T.base, item[1])
    return T.from_coeffs(coeffs)


def base_from_json(F, v):
    from .ratfunc import RationalFunctionField

    if isinstance(F, RationalFunctionField):
        return ratfunc_from_json(F, v)
    return coeff_from_json(coefficient_field(F), v)

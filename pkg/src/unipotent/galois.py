"""Automorphisms of towers, the groups they generate, and U_n(F_p).

An ``Automorphism`` is given by the images of the tower generators and a
power of Frobenius acting on finite-field coefficients of the base field.
Relation preservation is checked at construction, so every instance is a
genuine field endomorphism (hence an automorphism of the finite extension).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

from .base import frobenius_on, frobenius_order
from .errors import (
    BadIndex, CapExceeded, InvalidAutomorphism, NotBijective, NotWellDefined,
    OverCap, TowerMismatch,
)
from .tower import KUMMER, Tower, TowerElem


class Automorphism:
    """A field automorphism of a tower, determined by generator images.

    ``base_map`` is the exponent k of the coefficient map c -> c^(p^k) on
    finite-field constants (0 is the identity).
    """

    __slots__ = ("tower", "images", "base_map", "_bm", "_key")

    def __init__(self, tower: Tower, images, base_map: int = 0, *, check: bool = True):
        self.tower = tower
        if isinstance(images, dict):
            lst = [None] * tower.n
            for k, v in images.items():
                lst[tower.index(k)] = tower(v)
            for i, v in enumerate(lst):
                if v is None:
                    lst[i] = tower.gen(i)
            images = lst
        images = tuple(tower(v) for v in images)
        if len(images) != tower.n:
            raise InvalidAutomorphism(f"expected {tower.n} images, got {len(images)}")
        self.images = images
        self.base_map = base_map % frobenius_order(tower.base)
        self._bm = frobenius_on(tower.base, self.base_map)
        self._key = None
        if check:
            self.check_relations()

    @classmethod
    def identity(cls, tower: Tower) -> "Automorphism":
        return cls(tower, tower.gens_elems(), 0, check=False)

    def check_relations(self):
        T = self.tower
        for k, g in enumerate(T.gens):
            lhs = self.images[k] ** T.p
            if g.kind != KUMMER:
                lhs = lhs - self.images[k]
            rhs = g.rhs.substitute(self.images[:k], self._bm, target=T)
            if lhs != rhs:
                raise InvalidAutomorphism(f"image of {g.name} violates its defining relation")

    def __call__(self, x) -> TowerElem:
        x = self.tower(x)
        return x.substitute(self.images, self._bm, target=self.tower)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self o other."""
        if other.tower is not self.tower and not other.tower.same_as(self.tower):
            raise TowerMismatch("automorphisms of different towers")
        imgs = [self(v) for v in other.images]
        return Automorphism(self.tower, imgs, self.base_map + other.base_map, check=False)

    __mul__ = compose

    def __pow__(self, n: int) -> "Automorphism":
        if n < 0:
            return self.inverse() ** (-n)
        result = Automorphism.identity(self.tower)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_identity(self) -> bool:
        return self.base_map == 0 and all(
            img == self.tower.gen(i) for i, img in enumerate(self.images))

    def order(self, cap: int = 64) -> int:
        """Least k <= cap with self^k = 1."""
        if cap < 1:
            raise OverCap("cap must be positive")
        f = self
        for k in range(1, cap + 1):
            if f.is_identity():
                return k
            f = f * self
        raise OverCap(f"order exceeds {cap}")

    def inverse(self, cap: int = 81) -> "Automorphism":
        """Inverse by power search: self^(order-1)."""
        n = self.order(cap)
        return self ** (n - 1) if n > 1 else self

    def key(self):
        if self._key is None:
            self._key = (self.base_map, tuple(v.key() for v in self.images))
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.base_map == other.base_map and self.images == other.images

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        parts = [f"{g.name} -> {v.to_expr()}" for g, v in zip(self.tower.gens, self.images)
                 if v != self.tower.gen(g.level - 1)]
        if self.base_map:
            parts.append(f"frob^{self.base_map}")
        return "Aut(" + ", ".join(parts or ["id"]) + ")"

    def restrict(self, sub: Tower) -> "Automorphism":
        """Restriction to a tower whose generators are a subset (by name)."""
        imgs = [transport(self.images[self.tower.index(g.name)], sub) for g in sub.gens]
        return Automorphism(sub, imgs, self.base_map)


def transport(x: TowerElem, target: Tower) -> TowerElem:
    """Move x into a tower that shares the generators x actually uses."""
    names = x.tower.names()
    pos = {n: i for i, n in enumerate(target.names())}
    out = {}
    for exps, c in x.coeffs().items():
        new = [0] * target.n
        for n, e in zip(names, exps):
            if e:
                if n not in pos:
                    raise TowerMismatch(f"generator {n} is not in the target tower")
                new[pos[n]] = e
        out[tuple(new)] = c
    return target.from_coeffs(out)


def commutator(f: Automorphism, g: Automorphism, cap: int = 81) -> Automorphism:
    """[f, g] = f g f^-1 g^-1."""
    return f * g * f.inverse(cap) * g.inverse(cap)


class GroupTable:
    """A finite group of automorphisms with index-based multiplication.

    ``words[i]`` lists generator indices whose composition (left to right)
    is element i; ``rmul[i][s]`` is the index of element_i o gen_s.
    """

    def __init__(self, gens, elements, words, rmul):
        self.gens = list(gens)
        self.elements = elements
        self.words = words
        self.rmul = rmul
        self.identity = 0
        self._index = {e: i for i, e in enumerate(elements)}
        self._mul = None

    def __len__(self):
        return len(self.elements)

    def index(self, f: Automorphism) -> int:
        return self._index[f]

    def mul(self, i: int, j: int) -> int:
        if self._mul is not None:
            return self._mul[i][j]
        for s in self.words[j]:
            i = self.rmul[i][s]
        return i

    def table(self):
        """Full multiplication table; mul(i, j) is element_i o element_j."""
        if self._mul is None:
            n = len(self)
            self._mul = [[self.mul(i, j) for j in range(n)] for i in range(n)]
        return self._mul

    def inverse(self, i: int) -> int:
        row = self.table()[i]
        return row.index(self.identity)

    def order_of(self, i: int) -> int:
        k, j = 1, i
        while j != self.identity:
            j = self.mul(j, i)
            k += 1
        return k

    def center(self) -> list:
        tab = self.table()
        n = len(self)
        return [i for i in range(n) if all(tab[i][j] == tab[j][i] for j in range(n))]


def enumerate_group(gens, cap: int = 1000, threads: int = 1) -> GroupTable:
    """Breadth-first closure of gens under composition."""
    gens = list(gens)
    if not gens:
        raise CapExceeded("no generators")
    T = gens[0].tower
    ident = Automorphism.identity(T)
    elements = [ident]
    words = [[]]
    index = {ident: 0}
    rmul = []
    frontier = [0]
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while frontier:
            nxt = []
            jobs = [(i, s) for i in frontier for s in range(len(gens))]
            if pool is not None:
                prods = list(pool.map(lambda js: elements[js[0]] * gens[js[1]], jobs))
            else:
                prods = [elements[i] * gens[s] for i, s in jobs]
            for (i, s), y in zip(jobs, prods):
                while len(rmul) <= i:
                    rmul.append([None] * len(gens))
                j = index.get(y)
                if j is None:
                    j = len(elements)
                    if j >= cap:
                        raise CapExceeded(f"group has more than {cap} elements")
                    elements.append(y)
                    words.append(words[i] + [s])
                    index[y] = j
                    nxt.append(j)
                rmul[i][s] = j
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return GroupTable(gens, elements, words, rmul)


# unipotent matrices


class UnipotentMatrix:
    """Upper unitriangular n x n matrix over F_p."""

    __slots__ = ("n", "p", "entries")

    def __init__(self, n: int, p: int, entries=None):
        self.n = n
        self.p = p
        if entries is None:
            entries = {}
        if isinstance(entries, dict):
            ent = tuple(tuple(1 if i == j else (entries.get((i + 1, j + 1), 0) % p if j > i else 0)
                              for j in range(n)) for i in range(n))
        else:
            ent = tuple(tuple(int(v) % p for v in row) for row in entries)
            for i in range(n):
                for j in range(n):
                    if (i == j and ent[i][j] != 1) or (i > j and ent[i][j]):
                        raise ValueError("matrix is not upper unitriangular")
        self.entries = ent

    @classmethod
    def identity(cls, n, p):
        return cls(n, p)

    @classmethod
    def elementary(cls, n, p, i, j, c=1):
        return cls(n, p, {(i, j): c})

    def __mul__(self, other: "UnipotentMatrix") -> "UnipotentMatrix":
        n, p = self.n, self.p
        a, b = self.entries, other.entries
        rows = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(i, j + 1)) % p if j >= i else 0
                           for j in range(n)) for i in range(n))
        m = UnipotentMatrix.__new__(UnipotentMatrix)
        m.n, m.p, m.entries = n, p, rows
        return m

    def inverse(self) -> "UnipotentMatrix":
        m = self
        result = UnipotentMatrix.identity(self.n, self.p)
        # (1 + N)^-1 = sum (-N)^k, and N is nilpotent; use powers of m instead
        k = self.order()
        for _ in range(k - 1):
            result = result * m
        return result

    def order(self) -> int:
        k, m = 1, self
        ident = UnipotentMatrix.identity(self.n, self.p)
        while m != ident:
            m = m * self
            k += 1
        return k

    def proj(self, i: int, j: int) -> int:
        """Entry (i, j), 1-based, for i < j."""
        if not (1 <= i < j <= self.n):
            raise BadIndex(f"need 1 <= i < j <= {self.n}, got ({i}, {j})")
        return self.entries[i - 1][j - 1]

    def __eq__(self, other):
        return isinstance(other, UnipotentMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "U" + repr([list(r) for r in self.entries])

    def to_json(self):
        return [list(r) for r in self.entries]


def unipotent_proj(m: UnipotentMatrix, i: int, j: int) -> int:
    return m.proj(i, j)


def all_unipotent(n: int, p: int) -> list:
    """Every element of U_n(F_p), by direct enumeration of entries."""
    slots = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return [UnipotentMatrix(n, p, dict(zip(slots, vals)))
            for vals in product(range(p), repeat=len(slots))]


# presentations and the explicit isomorphism

RELATION_NAMES = [
    "s1^p=1", "s2^p=1", "s3^p=1", "[s1,s3]=1",
    "[s1,[s1,s2]]=1", "[s2,[s1,s2]]=1",
    "[s2,[s2,s3]]=1", "[s3,[s2,s3]]=1",
    "[[s1,s2],[s2,s3]]=1",
]


@dataclass
class PresentationReport:
    relations: list
    central: bool = None  # [[s1,s2],s3] != 1

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.relations)

    def as_json(self) -> dict:
        return {"relations": [{"name": n, "pass": ok} for n, ok in self.relations]}


def verify_presentation_U4(s1: Automorphism, s2: Automorphism, s3: Automorphism,
                           p: int) -> PresentationReport:
    """Check the defining relations of U_4(F_p) on three automorphisms.

    [x, y] = 1 is tested as xy = yx; inverses are s^(p-1) once s^p = 1.
    """
    invs, orders = [], []
    for s in (s1, s2, s3):
        q = s ** (p - 1)
        invs.append(q)
        orders.append((q * s).is_identity())
    i1, i2, i3 = invs

    def comm(x, y):
        return x * y == y * x

    s12 = s1 * s2 * i1 * i2
    s23 = s2 * s3 * i2 * i3
    checks = orders + [
        comm(s1, s3),
        comm(s1, s12), comm(s2, s12),
        comm(s2, s23), comm(s3, s23),
        comm(s12, s23),
    ]
    central = not comm(s12, s3)
    return PresentationReport(list(zip(RELATION_NAMES, checks)), central)


def verify_presentation_U3(s1: Automorphism, s2: Automorphism, p: int) -> PresentationReport:
    """Relations of the Heisenberg group U_3(F_p): orders p, [s1,s2] central."""
    cap = p * p
    s12 = commutator(s1, s2, cap)
    checks = [
        ("s1^p=1", (s1 ** p).is_identity()), ("s2^p=1", (s2 ** p).is_identity()),
        ("[s1,[s1,s2]]=1", commutator(s1, s12, cap).is_identity()),
        ("[s2,[s1,s2]]=1", commutator(s2, s12, cap).is_identity()),
    ]
    if p == 2:
        checks.append(("[s1,s2]^2=1", (s12 ** 2).is_identity()))
    return PresentationReport(checks, not s12.is_identity())


@dataclass
class UnipotentRepresentation:
    """Group table with a matrix for each element."""

    table: GroupTable
    n: int
    p: int
    images: list

    def __call__(self, i: int) -> UnipotentMatrix:
        return self.images[i]

    def entry(self, i: int, a: int, b: int) -> int:
        return self.images[i].proj(a, b)


def iso_to_U(table: GroupTable, n: int, p: int) -> UnipotentRepresentation:
    """Send generator k to E_{k,k+1} and verify a bijective homomorphism."""
    if len(table.gens) != n - 1:
        raise NotWellDefined(f"need {n - 1} generators")
    expected = p ** (n * (n - 1) // 2)
    if len(table) != expected:
        raise NotBijective(f"group has {len(table)} elements, U_{n}(F_{p}) has {expected}")
    gm = [UnipotentMatrix.elementary(n, p, k + 1, k + 2) for k in range(n - 1)]
    images = []
    for w in table.words:
        m = UnipotentMatrix.identity(n, p)
        for s in w:
            m = m * gm[s]
        images.append(m)
    tab = table.table()
    for i in range(len(table)):
        mi = images[i]
        row = tab[i]
        for j in range(len(table)):
            if images[row[j]] != mi * images[j]:
                raise NotWellDefined(f"phi(g{i} g{j}) != phi(g{i}) phi(g{j})")
    if len(set(images)) != expected:
        raise NotBijective("matrix images are not distinct")
    return UnipotentRepresentation(table, n, p, images)


def iso_to_U4(table: GroupTable) -> UnipotentRepresentation:
    return iso_to_U(table, 4, table_p(table))


def iso_to_U3(table: GroupTable) -> UnipotentRepresentation:
    return iso_to_U(table, 3, table_p(table))


def table_p(table: GroupTable) -> int:
    return table.gens[0].tower.p


@dataclass
class U4Certificate:
    """Outcome of the group-theoretic checks on (s1, s2, s3)."""

    presentation: PresentationReport
    group_order: int
    route: str
    representation: UnipotentRepresentation | None = None

    def as_json(self) -> dict:
        out = self.presentation.as_json()
        out["groupOrder"] = self.group_order
        out["route"] = self.route
        out["isoVerified"] = self.representation is not None
        if self.representation is not None:
            rep = self.representation
            out["matrixImages"] = {f"s{k + 1}": rep.images[rep.table.index(g)].to_json()
                                   for k, g in enumerate(rep.table.gens)}
        return out


def u4_certificate(s1, s2, s3, p: int, tower_degree: int, *, enumerate_limit: int = 64,
                   threads: int = 1) -> U4Certificate:
    """Certify <s1, s2, s3> = Gal(M/F) and is isomorphic to U_4(F_p).

    Small groups are enumerated and matched against matrices.  Otherwise the
    counting route: the relations make the group a quotient of U_4(F_p), the
    element [[s1,s2],s3] spans the order-p center of U_4(F_p) and is not the
    identity, so the quotient map has trivial kernel; and a group of
    p^6 automorphisms of an extension of degree p^6 is its full Galois group.
    """
    rep = verify_presentation_U4(s1, s2, s3, p)
    if not rep.ok:
        from .errors import RelationFailed

        bad = [n for n, ok in rep.relations if not ok]
        raise RelationFailed("relations fail: " + ", ".join(bad))
    order = p ** 6
    if tower_degree != order:
        raise NotBijective(f"tower degree {tower_degree} differs from p^6")
    if order <= enumerate_limit:
        table = enumerate_group([s1, s2, s3], cap=order + 1, threads=threads)
        if len(table) != order:
            raise NotBijective(f"enumerated {len(table)} elements")
        return U4Certificate(rep, len(table), "enumeration", iso_to_U4(table))
    if not rep.central:
        raise NotBijective("[[s1,s2],s3] is trivial, the group is a proper quotient")
    return U4Certificate(rep, order, "counting")

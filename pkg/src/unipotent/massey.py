"""Inhomogeneous cochains over finite groups and triple Massey products.

Conventions: (da)(g, h) = a(g) - a(gh) + a(h) and (x u y)(g, h) = x(g) y(h),
with values in F_p.  Groups are ``GroupTable`` objects (index-based, with
generators and words).

For a representation rho into U_4(F_p), multiplying out rho(gh) = rho(g) rho(h)
gives d(rho_13) = -rho_12 u rho_23, d(rho_24) = -rho_23 u rho_34 and
d(rho_14) = -rho_12 u rho_24 - rho_13 u rho_34.  Hence the defining system
x = rho_12, y = rho_23, z = rho_34, a12 = -rho_13, a23 = -rho_24 has value
d(rho_14).  The negated triple (-x, -y, -z) uses the same a12, a23 and
witness -rho_14.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    GroupMismatch, InvalidDefiningSystem, NotACocycle, NotAHomomorphism, NotSurjective,
    SignTableBroken,
)
from .galois import GroupTable, UnipotentMatrix


# groups


def matrix_group_table(n: int, p: int) -> GroupTable:
    """U_n(F_p) as a GroupTable generated by the elementary E_{k,k+1}."""
    gens = [UnipotentMatrix.elementary(n, p, k, k + 1) for k in range(1, n)]
    ident = UnipotentMatrix.identity(n, p)
    elements = [ident]
    words = [[]]
    index = {ident: 0}
    rmul = []
    i = 0
    while i < len(elements):
        row = []
        for s, g in enumerate(gens):
            m = elements[i] * g
            j = index.get(m)
            if j is None:
                j = len(elements)
                index[m] = j
                elements.append(m)
                words.append(words[i] + [s])
            row.append(j)
        rmul.append(row)
        i += 1
    return GroupTable(gens, elements, words, rmul)


def group_p(G: GroupTable) -> int:
    """Exponent prime of a p-group table (order of a generator)."""
    return G.order_of(G.rmul[G.identity][0])


# cochains


class Cochain1:
    """F_p-valued function on the elements of G."""

    def __init__(self, G: GroupTable, p: int, values):
        self.G = G
        self.p = p
        self.values = [v % p for v in values]
        if len(self.values) != len(G):
            raise ValueError("cochain must be total on the group")

    @classmethod
    def zero(cls, G, p):
        return cls(G, p, [0] * len(G))

    def _same(self, other):
        if self.G is not other.G or self.p != other.p:
            raise GroupMismatch("cochains live on different groups")

    def __add__(self, other):
        self._same(other)
        return Cochain1(self.G, self.p, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._same(other)
        return Cochain1(self.G, self.p, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return Cochain1(self.G, self.p, [-a for a in self.values])

    def __rmul__(self, lam: int):
        return Cochain1(self.G, self.p, [lam * a for a in self.values])

    def __eq__(self, other):
        return isinstance(other, Cochain1) and self.G is other.G and self.values == other.values

    def __getitem__(self, i):
        return self.values[i]

    def is_zero(self) -> bool:
        return not any(self.values)

    def is_homomorphism(self) -> bool:
        return coboundary1(self).is_zero()

    def __repr__(self):
        return f"Cochain1({self.values[:8]}{'...' if len(self.values) > 8 else ''})"


class Cochain2:
    """F_p-valued function on G x G, stored row by row."""

    def __init__(self, G: GroupTable, p: int, rows):
        self.G = G
        self.p = p
        self.rows = [[v % p for v in r] for r in rows]

    @classmethod
    def zero(cls, G, p):
        n = len(G)
        return cls(G, p, [[0] * n for _ in range(n)])

    def _same(self, other):
        if self.G is not other.G or self.p != other.p:
            raise GroupMismatch("cochains live on different groups")

    def __add__(self, other):
        self._same(other)
        return Cochain2(self.G, self.p, [[a + b for a, b in zip(r, s)]
                                         for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._same(other)
        return Cochain2(self.G, self.p, [[a - b for a, b in zip(r, s)]
                                         for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Cochain2(self.G, self.p, [[-a for a in r] for r in self.rows])

    def __rmul__(self, lam: int):
        return Cochain2(self.G, self.p, [[lam * a for a in r] for r in self.rows])

    def __eq__(self, other):
        return isinstance(other, Cochain2) and self.G is other.G and self.rows == other.rows

    def __call__(self, g: int, h: int) -> int:
        return self.rows[g][h]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def mismatches(self, other) -> int:
        """Number of (g, h) pairs where two 2-cochains differ."""
        return sum(a != b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))


def cup11(x: Cochain1, y: Cochain1) -> Cochain2:
    x._same(y)
    yv = y.values
    return Cochain2(x.G, x.p, [[a * b for b in yv] for a in x.values])


def coboundary1(a: Cochain1) -> Cochain2:
    tab = a.G.table()
    v = a.values
    return Cochain2(a.G, a.p, [[v[g] - v[gh] + v[h] for h, gh in enumerate(row)]
                               for g, row in enumerate(tab)])


def coboundary2(c: Cochain2, thirds=None) -> list:
    """(dc)(g, h, k) = c(h,k) - c(gh,k) + c(g,hk) - c(g,h), as nested lists.

    ``thirds`` restricts k (default: all elements).
    """
    tab = c.G.table()
    n = len(c.G)
    ks = range(n) if thirds is None else thirds
    p = c.p
    r = c.rows
    out = []
    for g in range(n):
        tg = tab[g]
        block = []
        for h in range(n):
            gh = tg[h]
            th = tab[h]
            block.append([(r[h][k] - r[gh][k] + r[g][th[k]] - r[g][h]) % p for k in ks])
        out.append(block)
    return out


def is_cocycle(c: Cochain2) -> bool:
    """dc = 0, checked for k in {1} and the generators.

    Sufficient: (ddc)(g, h, k, s) = 0 expresses (dc)(g, h, ks) through values
    with last argument k or s, so induction on word length covers every k.
    """
    G = c.G
    thirds = [G.identity] + [G.rmul[G.identity][s] for s in range(len(G.gens))]
    return all(not any(v) for block in coboundary2(c, thirds) for v in block)


def _solve_mod_p(rows, p):
    """Row-reduce augmented rows [coeffs..., rhs] over F_p; solution or None."""
    pivots = []  # (col, row)
    basis = []
    for r in rows:
        r = [v % p for v in r]
        for col, b in pivots:
            if r[col]:
                f = r[col]
                r = [(x - f * y) % p for x, y in zip(r, b)]
        lead = next((i for i, v in enumerate(r[:-1]) if v), None)
        if lead is None:
            if r[-1]:
                return None
            continue
        inv = pow(r[lead], -1, p)
        r = [(v * inv) % p for v in r]
        new = []
        for col, b in pivots:
            if b[lead]:
                f = b[lead]
                b = [(x - f * y) % p for x, y in zip(b, r)]
            new.append((col, b))
        pivots = new + [(lead, r)]
    k = len(rows[0]) - 1 if rows else 0
    sol = [0] * k
    for col, b in pivots:
        sol[col] = b[-1]
    return sol


def is_coboundary(c: Cochain2):
    """A 1-cochain a with da = c, or None.

    a(1) = c(1, 1) and a(gs) = a(g) + a(s) - c(g, s) express a affinely in
    the unknown values on generators; the remaining identities form a small
    linear system over F_p, and the solution is re-checked on all pairs.
    """
    if not is_cocycle(c):
        raise NotACocycle("input is not a 2-cocycle")
    G, p = c.G, c.p
    n = len(G)
    k = len(G.gens)
    e = G.identity
    gen_idx = [G.rmul[e][s] for s in range(k)]
    # affine forms: [coeff_1..coeff_k, const]
    form = [None] * n
    form[e] = [0] * k + [c(e, e)]
    for s, gi in enumerate(gen_idx):
        if gi != e and form[gi] is None:
            form[gi] = [1 if t == s else 0 for t in range(k)] + [0]
    queue = deque([e])
    seen = {e}
    while queue:
        g = queue.popleft()
        for s in range(k):
            h = G.rmul[g][s]
            if h in seen:
                continue
            seen.add(h)
            if form[h] is None:
                fs = form[gen_idx[s]]
                form[h] = [x + y for x, y in zip(form[g], fs)]
                form[h][-1] -= c(g, gen_idx[s])
            queue.append(h)
    # equations a(g) - a(gs) + a(s) = c(g, s) for generator edges
    rows = []
    for g in range(n):
        for s, gi in enumerate(gen_idx):
            h = G.rmul[g][s]
            lhs = [x - y + z for x, y, z in zip(form[g], form[h], form[gi])]
            rows.append(lhs[:-1] + [c(g, gi) - lhs[-1]])
    sol = _solve_mod_p(rows, p)
    if sol is None:
        return None
    a = Cochain1(G, p, [sum(x * y for x, y in zip(f[:-1], sol)) + f[-1] for f in form])
    if coboundary1(a) != c:
        return None
    return a


# defining systems


@dataclass
class DefiningSystem:
    x: Cochain1
    y: Cochain1
    z: Cochain1
    a12: Cochain1
    a23: Cochain1

    def check(self) -> bool:
        return (coboundary1(self.a12) == cup11(self.x, self.y)
                and coboundary1(self.a23) == cup11(self.y, self.z))


def massey_value(D: DefiningSystem) -> Cochain2:
    """The 2-cocycle x u a23 + a12 u z."""
    if not D.check():
        raise InvalidDefiningSystem("d a12 != x u y or d a23 != y u z")
    v = cup11(D.x, D.a23) + cup11(D.a12, D.z)
    if not is_cocycle(v):  # pragma: no cover - follows from the check above
        raise InvalidDefiningSystem("Massey value is not a cocycle")
    return v


class UnipotentRep:
    """A homomorphism G -> U_n(F_p), given by images of all elements."""

    def __init__(self, G: GroupTable, images, *, check: bool = True):
        self.G = G
        self.images = list(images)
        self.n = self.images[0].n
        self.p = self.images[0].p
        if check:
            tab = G.table()
            imgs = self.images
            for g, row in enumerate(tab):
                ig = imgs[g]
                for h, gh in enumerate(row):
                    if ig * imgs[h] != imgs[gh]:
                        raise NotAHomomorphism(f"rho(g h) != rho(g) rho(h) at ({g}, {h})")

    @classmethod
    def from_generators(cls, G: GroupTable, gen_images, *, check: bool = True):
        """Extend along the words of G; the exhaustive check catches ill-defined data."""
        n, p = gen_images[0].n, gen_images[0].p
        imgs = []
        for w in G.words:
            m = UnipotentMatrix.identity(n, p)
            for s in w:
                m = m * gen_images[s]
            imgs.append(m)
        return cls(G, imgs, check=check)

    @classmethod
    def trivial(cls, G: GroupTable, n: int, p: int):
        return cls(G, [UnipotentMatrix.identity(n, p)] * len(G), check=False)

    def entry(self, i: int, j: int) -> Cochain1:
        return Cochain1(self.G, self.p, [m.proj(i, j) for m in self.images])

    def image_size(self) -> int:
        return len(set(self.images))


@dataclass
class VanishingWitness:
    system: DefiningSystem
    witness: Cochain1
    negated: bool
    checks: dict = field(default_factory=dict)


def vanishing_witness(rho: UnipotentRep, *, negated: bool = False) -> VanishingWitness:
    """Defining system for <x,y,z> (or <-x,-y,-z>) with value d(witness)."""
    r = rho.entry
    sgn = -1 if negated else 1
    x, y, z = sgn * r(1, 2), sgn * r(2, 3), sgn * r(3, 4)
    D = DefiningSystem(x, y, z, -r(1, 3), -r(2, 4))
    w = sgn * r(1, 4)
    checks = {
        "d(a12)=x u y": coboundary1(D.a12) == cup11(x, y),
        "d(a23)=y u z": coboundary1(D.a23) == cup11(y, z),
    }
    checks["value=d(witness)"] = all(checks.values()) and massey_value(D) == coboundary1(w)
    if not all(checks.values()):
        raise SignTableBroken("sign table fails: " + ", ".join(k for k, v in checks.items() if not v))
    return VanishingWitness(D, w, negated, checks)


def flip_signs(D: DefiningSystem) -> DefiningSystem:
    """From a system for (-x, -y, -z) to one for (x, y, z).

    Scaling the middle slot by -1 gives (-x, y, -z) with
    a12, a23 negated; negating the outer slots then leaves a12, a23 as they
    are and multiplies the value by 1.
    """
    mid = scalar_system(D, -1)
    out = DefiningSystem(-mid.x, mid.y, -mid.z, -mid.a12, -mid.a23)
    if not out.check():
        raise InvalidDefiningSystem("sign flip failed")
    return out


def scalar_system(D: DefiningSystem, lam: int) -> DefiningSystem:
    return DefiningSystem(D.x, lam * D.y, D.z, lam * D.a12, lam * D.a23)


def scalar_check(D: DefiningSystem, lam: int) -> dict:
    """{lam a12, lam a23} defines <x, lam y, z> with value lam * value(D)."""
    v = massey_value(D)
    D2 = scalar_system(D, lam)
    ok_sys = D2.check()
    ok_val = ok_sys and massey_value(D2) == lam * v
    return {"system": ok_sys, "value": ok_val, "ok": ok_sys and ok_val}


def additivity_check(D: DefiningSystem, D2: DefiningSystem) -> dict:
    """<x, y+y', z> contains value(D) + value(D') via the summed system."""
    if D.x != D2.x or D.z != D2.z:
        raise InvalidDefiningSystem("outer cochains must agree")
    v1, v2 = massey_value(D), massey_value(D2)
    S = DefiningSystem(D.x, D.y + D2.y, D.z, D.a12 + D2.a12, D.a23 + D2.a23)
    ok_sys = S.check()
    diff = massey_value(S) - (v1 + v2) if ok_sys else None
    ok_val = ok_sys and is_coboundary(diff) is not None
    return {"system": ok_sys, "value": ok_val, "ok": ok_sys and ok_val}


# characters


def homomorphisms(G: GroupTable, p: int, gen_values) -> Cochain1:
    """The homomorphism G -> F_p with given values on generators."""
    vals = [sum(gen_values[s] for s in w) for w in G.words]
    h = Cochain1(G, p, vals)
    if not h.is_homomorphism():
        raise NotAHomomorphism("generator values do not define a homomorphism")
    return h


def random_homomorphism(G: GroupTable, p: int, rng: random.Random) -> Cochain1:
    """Uniform among homomorphisms factoring through the generator words, by retry."""
    while True:
        try:
            return homomorphisms(G, p, [rng.randrange(p) for _ in G.gens])
        except NotAHomomorphism:
            continue


def solve_defining_system(x, y, z):
    """Defining system for (x, y, z) by solving for a12 and a23, or None."""
    a12 = is_coboundary(cup11(x, y))
    a23 = is_coboundary(cup11(y, z))
    if a12 is None or a23 is None:
        return None
    return DefiningSystem(x, y, z, a12, a23)


@dataclass
class CharacterExtraction:
    chars: tuple
    independent: bool
    cup_witnesses: tuple
    checks: dict


def extract_chars(rho: UnipotentRep) -> CharacterExtraction:
    """Super-diagonal characters of a surjective rho with cup-product witnesses."""
    p, n = rho.p, rho.n
    full = p ** (n * (n - 1) // 2)
    if rho.image_size() != full:
        raise NotSurjective(f"image has {rho.image_size()} elements, expected {full}")
    chars = tuple(rho.entry(k, k + 1) for k in range(1, n))
    homs = all(ch.is_homomorphism() for ch in chars)
    triples = {tuple(ch[g] for ch in chars) for g in range(len(rho.G))}
    independent = len(triples) == p ** len(chars)
    wit = tuple(-rho.entry(k, k + 2) for k in range(1, n - 1))
    cups = [coboundary1(w) == cup11(chars[i], chars[i + 1]) for i, w in enumerate(wit)]
    checks = {"homomorphisms": homs, "independent": independent,
              **{f"chi{i + 1} u chi{i + 2}=d(-rho{i + 1}{i + 3})": ok for i, ok in enumerate(cups)}}
    return CharacterExtraction(chars, independent, wit, checks)

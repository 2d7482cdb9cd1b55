"""Certificates that a tower is a field of degree p^n.

Generators whose defining element lies in the base field are handled
together by the exact class tests of ``base``.  Every other generator is
certified by a specialization witness: a homomorphism to a finite field,
etale along the earlier steps, under which the defining element is not a
p-th power (Kummer) or has nonzero absolute trace (Artin-Schreier).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .base import as_reduce_certified, kummer_dependence, pth_root
from .errors import DivisionByZero, NotAField, Undecided
from .gf import GF, GFElem
from .ratfunc import RatFunc
from .specialize import eval_data, points
from .tower import KUMMER, Tower, TowerElem


@dataclass
class GeneratorCertificate:
    name: str
    method: str
    detail: dict = field(default_factory=dict)


@dataclass
class TowerCertificate:
    """Per-generator evidence that each adjunction has degree p."""

    degree: int
    entries: list

    def as_json(self) -> dict:
        return {"degree": self.degree,
                "generators": [{"name": e.name, "method": e.method,
                                "detail": {k: str(v) for k, v in e.detail.items()}}
                               for e in self.entries]}


_WP_TABLES: dict = {}


def _wp_table(R: GF) -> dict:
    tab = _WP_TABLES.get(id(R))
    if tab is None:
        tab = {}
        for y in R.elements():
            tab.setdefault((y ** R.p - y).v, y)
        _WP_TABLES[id(R)] = tab
    return tab


def _base_block(T: Tower) -> int:
    k = 0
    while k < T.n and T.gens[k].rhs.in_base():
        k += 1
    return k


def _block_check(T: Tower, k: int) -> GeneratorCertificate:
    """Certify generator k (0-based) inside the leading base block."""
    g = T.gens[k]
    rs = [T.gens[j].rhs.base_value() for j in range(k + 1)]
    p = T.p
    sub = T.prefix(k)
    if g.kind == KUMMER:
        dep = kummer_dependence(rs, p)
        if dep is None:
            return GeneratorCertificate(g.name, "kummer-classes-independent")
        exps, root = dep
        # r_k^{e_k} = root^p * prod_{j<k} x_j^{-p e_j}
        ek = exps[k]
        f = pow(ek, -1, p)
        m = (ek * f - 1) // p
        y = sub(root)
        for j in range(k):
            if exps[j]:
                y = y * sub.gen(j) ** (-exps[j])
        y = y ** f * sub(rs[k]) ** (-m)
        raise NotAField(f"{g.name}: radicand is a p-th power", witness=y.to_expr())
    for coeffs in product(range(p), repeat=k):
        comb = rs[k]
        for c, r in zip(coeffs, rs):
            if c:
                comb = comb + r * c
        if isinstance(comb, RatFunc):
            red, h = as_reduce_certified(comb)
            if red:
                continue
        elif isinstance(comb, GFElem):
            if comb.field.trace(comb):
                continue
            h = next(y for y in comb.field.elements() if y ** p - y == comb)
        else:
            raise Undecided("unsupported base field for Artin-Schreier classes")
        # r_k = wp(h - sum c_j theta_j)
        y = sub(h)
        for j, c in enumerate(coeffs):
            if c:
                y = y - sub.gen(j) * c
        raise NotAField(f"{g.name}: defining element lies in the Artin-Schreier image",
                        witness=y.to_expr())
    return GeneratorCertificate(g.name, "artin-schreier-classes-independent")


def _specialization(T: Tower, k: int, max_points: int):
    """Search a witness for generator k (0-based); returns detail dict or None."""
    p = T.p
    rels = [(g.kind, g.rhs.data) for g in T.gens[: k + 1]]
    tried = 0
    for pt in points(T.base, p):
        tried += 1
        if tried > max_points:
            return None
        R = pt.R
        xi = R.root_of_unity(p) if rels[k][0] == KUMMER or any(r[0] == KUMMER for r in rels) else None
        tab = _wp_table(R) if any(r[0] != KUMMER for r in rels) else None

        def dfs(j, vals):
            kind, d = rels[j]
            try:
                v = eval_data(T, j, d, vals, pt)
            except DivisionByZero:
                return None
            if j == k:
                if kind == KUMMER:
                    ok = bool(v) and R.pth_root(v, p) is None
                else:
                    ok = bool(R.trace(v))
                return (vals, v) if ok else None
            if kind == KUMMER:
                if not v:
                    return None
                root = R.pth_root(v, p)
                if root is None:
                    return None
                choices = [root * xi ** i for i in range(p)]
            else:
                y = tab.get(v.v)
                if y is None:
                    return None
                choices = [y + i for i in range(p)]
            for c in choices:
                w = dfs(j + 1, vals + [c])
                if w is not None:
                    return w
            return None

        hit = dfs(0, [])
        if hit is not None:
            vals, img = hit
            return {"point": pt.label, "field": R.descriptor(),
                    "values": "[" + ", ".join(v.to_expr() for v in vals) + "]",
                    "image": img.to_expr()}
    return None


def _monomial_root(T: Tower, k: int):
    """A root y = c * (monomial) of generator k's equation, or None."""
    g = T.gens[k]
    sub = T.prefix(k)
    p = T.p
    r = sub(g.rhs)
    if g.kind == KUMMER:
        for fs in product(range(p), repeat=k):
            prod_ = sub.one
            for j, f in enumerate(fs):
                if f:
                    prod_ = prod_ * sub(T.gens[j].rhs) ** f
            ratio = _proportional(r, prod_)
            if ratio is None:
                continue
            c = pth_root(ratio, p)
            if c is None:
                continue
            y = sub(c)
            for j, f in enumerate(fs):
                if f:
                    y = y * sub.gen(j) ** f
            return y
        return None
    for cs in product(range(p), repeat=k):
        s = sub.zero
        rest = r
        for j, c in enumerate(cs):
            if c:
                s = s + sub.gen(j) * c
                rest = rest - sub(T.gens[j].rhs) * c
        v = rest.base_value()
        if v is None:
            continue
        if isinstance(v, RatFunc):
            red, h = as_reduce_certified(v)
            if not red:
                return sub(h) + s
    return None


def _proportional(x: TowerElem, y: TowerElem):
    cx, cy = x.coeffs(), y.coeffs()
    if set(cx) != set(cy) or not cx:
        return None
    key = next(iter(cx))
    c = cx[key] / cy[key]
    return c if all(cx[e] == cy[e] * c for e in cx) else None


def validate_tower(T: Tower, *, max_points: int | None = None,
                   known: dict | None = None) -> TowerCertificate:
    """Certify every adjunction of T, or raise NotAField / Undecided.

    ``known`` maps generator names to certificates obtained elsewhere (for
    instance a span-dimension argument); those generators are not searched.
    """
    known = known or {}
    if max_points is None:
        # residue fields over Q cost O(l) each; function-field points are cheap
        max_points = 300 if T.characteristic == 0 else 3000
    entries = []
    block = _base_block(T)
    for k in range(block):
        entries.append(_block_check(T, k))
    for k in range(block, T.n):
        if T.gens[k].name in known:
            entries.append(known[T.gens[k].name])
            continue
        detail = _specialization(T, k, max_points)
        if detail is not None:
            entries.append(GeneratorCertificate(T.gens[k].name, "specialization", detail))
            continue
        y = _monomial_root(T, k)
        if y is not None:
            raise NotAField(f"{T.gens[k].name}: defining equation has a root", witness=y.to_expr())
        raise Undecided(f"no certificate found for generator {T.gens[k].name}")
    cert = TowerCertificate(T.degree, entries)
    T.certificate = cert
    return cert

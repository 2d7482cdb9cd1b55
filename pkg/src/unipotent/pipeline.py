"""From traces to representations and back.

``representation_of`` turns the three generators of a verified trace into
rho: Gal(M/F) -> U_4(F_p).  Small groups are enumerated from the field
automorphisms themselves; larger ones use the matrix group, which the
presentation certificate identifies with Gal(M/F) through s_k -> E_{k,k+1}.

``roundtrip`` reads the super-diagonal characters of rho, matches each with
the Kummer or Artin-Schreier class it cuts out, and rebuilds the
construction from those classes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from .artin_schreier import ASTrace, u4_as_build
from .errors import NotSurjective, PreconditionFailed
from .galois import enumerate_group, iso_to_U4, verify_presentation_U4
from .kummer import KummerTrace, make_instance, u4_build
from .massey import (
    UnipotentRep, additivity_check, extract_chars, flip_signs, matrix_group_table,
    random_homomorphism, scalar_check, solve_defining_system, vanishing_witness,
)
from .tower import KUMMER

@dataclass
class TraceRepresentation:
    rho: UnipotentRep
    route: str  # "enumeration" or "presentation"
    automorphisms: list | None  # element i of G as a field automorphism (enumeration only)


def u4_part(tr):
    """The Kummer or Artin-Schreier trace carrying the U_4 generators."""
    return getattr(tr, "twisted", tr)


def representation_of(tr, *, enumerate_limit: int = 64, threads: int = 1) -> TraceRepresentation:
    tr = u4_part(tr)
    s1, s2, s3 = tr.sigma_a, tr.sigma_b, tr.sigma_c
    p = tr.p
    order = p ** 6
    if order <= enumerate_limit:
        table = enumerate_group([s1, s2, s3], cap=order + 1, threads=threads)
        rep = iso_to_U4(table)
        rho = UnipotentRep(table, rep.images)
        return TraceRepresentation(rho, "enumeration", list(table.elements))
    pres = verify_presentation_U4(s1, s2, s3, p)
    if not pres.ok or not pres.central:
        raise PreconditionFailed("the generators do not satisfy the U_4 presentation")
    G = matrix_group_table(4, p)
    return TraceRepresentation(UnipotentRep(G, list(G.elements), check=False), "presentation",
                               None)


def field_character(M, name: str, autos) -> list:
    """g -> log_xi(g(r)/r) (Kummer) or g(theta) - theta (Artin-Schreier)."""
    k = M.index(name)
    r = M.gen(k)
    p = M.p
    if M.gens[k].kind == KUMMER:
        shifts = [r * M.xi ** j for j in range(p)]
    else:
        shifts = [r + j for j in range(p)]
    out = []
    for g in autos:
        img = g(r)
        hit = next((j for j, v in enumerate(shifts) if v == img), None)
        if hit is None:
            raise NotSurjective(f"{name} is not moved by a root of unity or a constant")
        out.append(hit)
    return out


def generator_names(tr) -> tuple:
    return ("ta", "tb", "tc") if isinstance(tr, ASTrace) else ("ra", "rb", "rc")


def match_characters(chars, M, autos, names) -> list:
    """For each character, the exponents (i, j, k) with chi = i chi_a + j chi_b + k chi_c."""
    p = M.p
    basis = [field_character(M, n, autos) for n in names]
    out = []
    for ch in chars:
        vals = list(ch.values)
        hit = None
        for ex in product(range(p), repeat=len(basis)):
            if all(sum(e * b[g] for e, b in zip(ex, basis)) % p == v for g, v in enumerate(vals)):
                hit = ex
                break
        if hit is None:
            raise NotSurjective("a character is not cut out by the tower generators")
        out.append(hit)
    return out


def _class_element(tr, ex):
    """prod x_i^(e_i) (Kummer) or sum e_i x_i (Artin-Schreier) over (a, b, c)."""
    if isinstance(tr, ASTrace):
        vals = (tr.a, tr.b, tr.c)
        acc = tr.F.zero
        for e, v in zip(ex, vals):
            acc = acc + v * e
        return acc
    inst = tr.instance
    acc = inst.F.one
    for e, v in zip(ex, (inst.a, inst.b, inst.c)):
        acc = acc * v ** e
    return acc


@dataclass
class RoundTrip:
    exponents: list
    elements: tuple
    extraction: object
    rebuilt: object
    checks: dict


def roundtrip(tr, *, threads: int = 1) -> RoundTrip:
    """extract_chars on rho, back to field data, then rebuild and verify."""
    trep = representation_of(tr, threads=threads)
    if trep.automorphisms is None:
        raise PreconditionFailed("round trip needs an enumerated group")
    ext = extract_chars(trep.rho)
    M = tr.tower
    exps = match_characters(ext.chars, M, trep.automorphisms, generator_names(tr))
    elems = tuple(_class_element(tr, ex) for ex in exps)
    if isinstance(tr, ASTrace):
        rebuilt = u4_as_build(tr.F, *elems, threads=threads)
    elif isinstance(tr, KummerTrace):
        inst = tr.instance
        if elems != (inst.a, inst.b, inst.c):
            raise PreconditionFailed("extracted classes differ from the stored elements")
        rebuilt = u4_build(make_instance(inst.F, inst.p, *elems, inst.alpha, inst.gamma),
                           tr.variant, xi_powers=tr.xi_powers, threads=threads)
    else:
        raise PreconditionFailed("round trip is for Artin-Schreier and Kummer traces")
    checks = {**ext.checks, **{f"rebuilt:{k}": v for k, v in rebuilt.checks.items()}}
    return RoundTrip(exps, elems, ext, rebuilt, checks)


# Massey report


def _table(c) -> list:
    return list(c.values)


def massey_report(tr, *, threads: int = 1, rng: random.Random | None = None) -> dict:
    """Vanishing witnesses of <chi1, chi2, chi3> for the trace representation.

    With ``rng``, additivity is also checked against a random middle character.
    """
    trep = representation_of(tr, threads=threads)
    rho = trep.rho
    out = {"route": trep.route, "groupOrder": len(rho.G), "checks": []}

    def add(name, ok, witness=None):
        out["checks"].append({"name": name, "status": "pass" if ok else "fail",
                              **({"witness": witness} if witness is not None else {})})

    for negated in (False, True):
        tag = "negated" if negated else "direct"
        vw = vanishing_witness(rho, negated=negated)
        D = vw.system
        for k, ok in vw.checks.items():
            add(f"{tag}:{k}", ok)
        add(f"{tag}:tables", True, {"x": _table(D.x), "y": _table(D.y), "z": _table(D.z),
                                    "a12": _table(D.a12), "a23": _table(D.a23),
                                    "witness": _table(vw.witness)})
    D = vanishing_witness(rho).system
    for k, ok in scalar_check(D, 2 if rho.p > 2 else 1).items():
        add(f"scalar:{k}", ok)
    add("flip-signs", flip_signs(vanishing_witness(rho, negated=True).system).check())
    for k, ok in additivity_check(D, D).items():
        add(f"additivity:{k}", ok)
    if rng is not None:
        D2 = None
        while D2 is None:
            D2 = solve_defining_system(D.x, random_homomorphism(rho.G, rho.p, rng), D.z)
        for k, ok in additivity_check(D, D2).items():
            add(f"additivity-random:{k}", ok)
    ext = extract_chars(rho)
    for k, ok in ext.checks.items():
        add(f"extract:{k}", ok)
    out["status"] = "pass" if all(c["status"] == "pass" for c in out["checks"]) else "fail"
    return out

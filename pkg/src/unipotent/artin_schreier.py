"""Heisenberg and U_4(F_p) extensions in characteristic p.

With theta_x a root of X^p - X = x, the U_4 tower over E = F(theta_a,
theta_c) uses A = b*theta_a, C = b*theta_c and delta = b*theta_a*theta_c,
and the generators act additively:

    sigma_a: theta_a + 1, theta_A + theta_b, theta_delta + theta_C
    sigma_c: theta_c + 1, theta_C + theta_b, theta_delta + theta_A
    sigma_b: theta_b + 1
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .base import as_independent, is_function_field
from .errors import DimensionDeficient, IdentityViolated, PreconditionFailed, WrongCharacteristic
from .galois import (
    Automorphism, commutator, enumerate_group, iso_to_U3, u4_certificate,
    verify_presentation_U3,
)
from .tower import ARTIN_SCHREIER, Tower
from .validate import validate_tower

GEN_NAMES = ("ta", "tc", "tb", "tA", "tC", "td")


@dataclass
class ASTrace:
    """Everything produced by the characteristic-p U_4 construction."""

    F: object
    a: object
    b: object
    c: object
    tower: Tower
    A: object
    C: object
    delta: object
    sigma_a: Automorphism
    sigma_b: Automorphism
    sigma_c: Automorphism
    checks: dict = field(default_factory=dict)
    certificate: object = None

    @property
    def p(self) -> int:
        return self.tower.p

    @property
    def E(self) -> Tower:
        return self.tower.prefix(2)


def _check_instance(F, elems):
    if not is_function_field(F) or F.characteristic == 0:
        raise WrongCharacteristic("Artin-Schreier constructions need F_q(t)")
    if not as_independent(elems):
        raise PreconditionFailed("elements are dependent modulo the Artin-Schreier image")


def heisenberg_as_build(F, a, b, *, verify: bool = True):
    """L = F(theta_a, theta_b, theta_A) with A = b*theta_a and its group.

    Returns (L, sigma_a, sigma_b, sigma_A) with sigma_A = [sigma_a, sigma_b].
    """
    a, b = F(a), F(b)
    _check_instance(F, [a, b])
    p = F.characteristic
    T = Tower(F, p).adjoin("ta", ARTIN_SCHREIER, a).adjoin("tb", ARTIN_SCHREIER, b)
    ta, tb = T.gens_elems()
    L = T.adjoin("tA", ARTIN_SCHREIER, ta * b)
    ta, tb, tA = L.gens_elems()
    sa = Automorphism(L, [ta + 1, tb, tA + tb])
    sb = Automorphism(L, [ta, tb + 1, tA])
    sA = commutator(sa, sb, p * p)
    if verify:
        validate_tower(L)
        rep = verify_presentation_U3(sa, sb, p)
        if not rep.ok:
            from .errors import RelationFailed

            raise RelationFailed("Heisenberg relations fail")
        table = enumerate_group([sa, sb], cap=p ** 3 + 1)
        iso_to_U3(table)
    return L, sa, sb, sA


def build_as_tower(F, a, b, c) -> Tower:
    p = F.characteristic
    E = Tower(F, p).adjoin("ta", ARTIN_SCHREIER, a).adjoin("tc", ARTIN_SCHREIER, c)
    ta, tc = E.gens_elems()
    T = E.adjoin("tb", ARTIN_SCHREIER, b)
    T = T.adjoin("tA", ARTIN_SCHREIER, ta * b)
    T = T.adjoin("tC", ARTIN_SCHREIER, tc * b)
    return T.adjoin("td", ARTIN_SCHREIER, ta * tc * b)


def as_automorphisms(M: Tower):
    ta, tc, tb, tA, tC, td = M.gens_elems()
    sa = Automorphism(M, [ta + 1, tc, tb, tA + tb, tC, td + tC])
    sc = Automorphism(M, [ta, tc + 1, tb, tA, tC + tb, td + tA])
    sb = Automorphism(M, [ta, tc, tb + 1, tA, tC, td])
    return sa, sb, sc


def u4_as_build(F, a, b, c, *, verify: bool = True, threads: int = 1) -> ASTrace:
    """Construct M = E(theta_delta, theta_A, theta_C, theta_b) and its group."""
    a, b, c = F(a), F(b), F(c)
    _check_instance(F, [a, b, c])
    M = build_as_tower(F, a, b, c)
    E = M.prefix(2)
    ta, tc = E.gens_elems()
    sa, sb, sc = as_automorphisms(M)
    trace = ASTrace(F, a, b, c, M, ta * b, tc * b, ta * tc * b, sa, sb, sc)
    if verify:
        verify_as_trace(trace, threads=threads)
    return trace


def as_identities(trace: ASTrace) -> dict:
    """The four difference identities and the invariance facts behind them."""
    sa, sc = trace.sigma_a, trace.sigma_c
    A, C, d, b = trace.A, trace.C, trace.delta, trace.b
    return {
        "sigma_a(delta)-delta=C": sa(d) - d == C,
        "sigma_c(delta)-delta=A": sc(d) - d == A,
        "sigma_a(A)-A=b": sa(A) - A == b,
        "sigma_c(C)-C=b": sc(C) - C == b,
        "sigma_c(A)=A": sc(A) == A,
        "sigma_a(C)=C": sa(C) == C,
    }


def wstar_dimension_as(trace: ASTrace) -> int:
    """dim of the span of [b], [A], [C], [delta] in E/wp(E); 4 or an error.

    Apply (sigma_a-1)(sigma_c-1), then sigma_a-1 and sigma_c-1, to a relation
    l_b b + l_A A + l_C C + l_d delta in wp(E): each step isolates one
    coefficient times b, and b is not in wp(E) because a, b, c are
    independent modulo wp(F).
    """
    sa, sc = trace.sigma_a, trace.sigma_c
    b = trace.E(trace.b)
    A, C, d = trace.E(trace.A), trace.E(trace.C), trace.E(trace.delta)

    def dd(s, x):
        return s(x) - x

    steps = [
        ("(sa-1)(sc-1)delta=b", dd(sa, dd(sc, d)) == b),
        ("(sa-1)(sc-1)A=0", not dd(sa, dd(sc, A))),
        ("(sa-1)(sc-1)C=0", not dd(sa, dd(sc, C))),
        ("(sa-1)A=b", dd(sa, A) == b),
        ("(sa-1)C=0", not dd(sa, C)),
        ("(sc-1)C=b", dd(sc, C) == b),
        ("(sc-1)A=0", not dd(sc, A)),
        ("[b]_E!=0", as_independent([trace.a, trace.b, trace.c])),
    ]
    bad = [n for n, ok in steps if not ok]
    if bad:
        raise DimensionDeficient("W* dimension below 4: " + ", ".join(bad), failed=bad)
    return 4


def verify_as_trace(trace: ASTrace, threads: int = 1) -> dict:
    """Recompute every certificate of an Artin-Schreier trace."""
    ids = as_identities(trace)
    bad = [k for k, ok in ids.items() if not ok]
    if bad:
        raise IdentityViolated("identities fail: " + ", ".join(bad))
    cert = validate_tower(trace.tower)
    dim = wstar_dimension_as(trace)
    u4 = u4_certificate(trace.sigma_a, trace.sigma_b, trace.sigma_c, trace.p,
                        trace.tower.degree, threads=threads)
    trace.checks = {**ids, "wstar": dim == 4, "relations": u4.presentation.ok}
    trace.certificate = {"tower": cert, "u4": u4}
    return trace.checks


def heisenberg_restriction(trace: ASTrace):
    """The U_4 generators restricted to H^{a,b} = F(theta_a, theta_b, theta_A)."""
    F = trace.F
    p = F.characteristic
    H = Tower(F, p).adjoin("ta", ARTIN_SCHREIER, trace.a).adjoin("tb", ARTIN_SCHREIER, trace.b)
    H = H.adjoin("tA", ARTIN_SCHREIER, H.gen(0) * trace.b)
    return H, trace.sigma_a.restrict(H), trace.sigma_b.restrict(H)

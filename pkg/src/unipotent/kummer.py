"""Heisenberg and U_4(F_p) extensions over fields containing mu_p.

Pipeline for F with a primitive p-th root of unity xi:

1. E = F(ra, rc) with ra^p = a, rc^p = c; sigma_a moves ra, sigma_c moves rc.
2. B = gamma/alpha for norm data N(alpha) = b = N(gamma).
3. Hilbert 90 along sigma_a sigma_c gives e with sigma_a sigma_c(e)/e = B.
4. (C1, C2) from e, then A = N_{sigma_c}(C1) and C = N_{sigma_a}(C2).
5. A bicyclic Hilbert 90 step gives delta with sigma_c(delta)/delta =
   A C1^-p and sigma_a(delta)/delta = C C2^-p.
6. M = E(rb, rA, rC, rd) with generators sigma_a, sigma_b, sigma_c.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .base import kummer_independent, root_of_unity
from .errors import (
    CompatibilityFailed, DimensionDeficient, IdentityViolated, MissingRootOfUnity,
    NormMismatch, NormNotOne, NotInBaseField, PreconditionFailed, RelationFailed,
    ResolventExhausted, SearchExhausted, TowerMismatch,
)
from .galois import (
    Automorphism, commutator, enumerate_group, iso_to_U3, u4_certificate,
    verify_presentation_U3,
)
from .ratfunc import QQ, RationalFunctionField
from .tower import KUMMER, Tower, TowerElem
from .validate import GeneratorCertificate, validate_tower


# generic helpers


def norm_along(sigma: Automorphism, x, order: int) -> TowerElem:
    """x * sigma(x) * ... * sigma^(order-1)(x)."""
    x = sigma.tower(x)
    if not (sigma ** order).is_identity():
        from .errors import OrderMismatch

        raise OrderMismatch(f"sigma^{order} is not the identity")
    acc = x
    y = x
    for _ in range(order - 1):
        y = sigma(y)
        acc = acc * y
    return acc


def hilbert90_solve(sigma: Automorphism, B, order: int, *, direction: str = "sigma(e)/e",
                    trials=None) -> TowerElem:
    """Nonzero e with sigma(e)/e = B (or e/sigma(e) = B), given N_sigma(B) = 1.

    Poincare resolvent: e' = sum_i B^(i) sigma^i(theta) satisfies
    sigma(e')/e' = 1/B, for each trial theta from the monomial basis.
    """
    T = sigma.tower
    B = T(B)
    if norm_along(sigma, B, order) != 1:
        raise NormNotOne("N_sigma(B) != 1")
    if trials is None:
        trials = (T.from_coeffs({e: 1}) for e in T.basis())
    for theta in trials:
        acc = T.zero
        Bi = T.one
        s_theta = theta
        for i in range(order):
            acc = acc + Bi * s_theta
            if i < order - 1:
                Bi = Bi * sigma(Bi) if i else B
                s_theta = sigma(s_theta)
        if acc:
            e = acc.inverse() if direction == "sigma(e)/e" else acc
            ok = sigma(e) / e == B if direction == "sigma(e)/e" else e / sigma(e) == B
            if not ok:  # pragma: no cover
                raise IdentityViolated("resolvent identity failed")
            return e
    raise ResolventExhausted("all trial elements gave a zero resolvent")


def a0_from_alpha(alpha, sigma_a: Automorphism, p: int) -> TowerElem:
    """prod_{i=0}^{p-2} sigma_a^i(alpha^(p-i-1))."""
    T = sigma_a.tower
    x = T(alpha)
    acc = T.one
    for i in range(p - 1):
        acc = acc * x ** (p - i - 1)
        x = sigma_a(x)
    return acc


def group_ring_identity(p: int) -> bool:
    """(s-1) sum_{i<=p-2} (p-i-1) s^i == sum_{i<p} s^i - p in Z[s]/(s^p - 1)."""
    lhs = [0] * p
    for i in range(p - 1):
        lhs[(i + 1) % p] += p - i - 1
        lhs[i] -= p - i - 1
    rhs = [1] * p
    rhs[0] -= p
    return lhs == rhs


# instances


@dataclass
class KummerInstance:
    """Base field with mu_p, elements a, b, c, and norm data alpha, gamma."""

    F: object
    p: int
    a: object
    b: object
    c: object
    alpha: TowerElem
    gamma: TowerElem
    E: Tower
    sigma_a_E: Automorphism
    sigma_c_E: Automorphism

    @property
    def xi(self):
        return self.E.xi


def build_E(F, p, a, c) -> Tower:
    if root_of_unity(F, p) is None:
        raise MissingRootOfUnity(f"{F.descriptor()} lacks a primitive {p}-th root of unity")
    return Tower(F, p).adjoin("ra", KUMMER, a).adjoin("rc", KUMMER, c)


def make_instance(F, p, a, b, c, alpha, gamma, *, check: bool = True, E: Tower | None = None
                  ) -> KummerInstance:
    """alpha, gamma may be TowerElems or expressions in ra, rc; E may be reused."""
    a, b, c = F(a), F(b), F(c)
    if check and not kummer_independent([a, b, c], p):
        raise PreconditionFailed("a, b, c are dependent modulo p-th powers")
    if E is None:
        E = build_E(F, p, a, c)
    elif not E.same_as(build_E(F, p, a, c)):
        raise TowerMismatch("E does not match a, c")
    alpha, gamma = E(alpha), E(gamma)
    ra, rc = E.gens_elems()
    xi = E.xi
    sa = Automorphism(E, [ra * xi, rc])
    sc = Automorphism(E, [ra, rc * xi])
    inst = KummerInstance(F, p, a, b, c, alpha, gamma, E, sa, sc)
    if check:
        check_instance(inst)
    return inst


def check_instance(inst: KummerInstance):
    E = inst.E
    for name, x, s, other in (("alpha", inst.alpha, inst.sigma_a_E, inst.sigma_c_E),
                              ("gamma", inst.gamma, inst.sigma_c_E, inst.sigma_a_E)):
        if other(x) != x:
            raise NormMismatch(f"{name} must lie in the cyclic subfield it is a norm from")
        if norm_along(s, x, inst.p) != E(inst.b):
            raise NormMismatch(f"N({name}) != b")


# the construction


@dataclass
class KummerTrace:
    """All data of a U_4(F_p) construction over a field with mu_p."""

    instance: KummerInstance
    variant: int
    B: TowerElem
    e: TowerElem
    C1: TowerElem
    C2: TowerElem
    A0: TowerElem
    C0: TowerElem
    A: TowerElem
    C: TowerElem
    delta: TowerElem
    f_a: object
    f_c: object
    tower: Tower
    sigma_a: Automorphism
    sigma_b: Automorphism
    sigma_c: Automorphism
    xi_powers: tuple = (0, 0)
    checks: dict = field(default_factory=dict)
    certificate: object = None

    @property
    def p(self) -> int:
        return self.instance.p

    @property
    def E(self) -> Tower:
        return self.instance.E


def c1c2_from_e(e, B, variant: int, sigma_a: Automorphism, sigma_c: Automorphism, p: int):
    """(C1, C2) with B = (sigma_a(C1)/C1) * (C2/sigma_c(C2))."""
    T = sigma_a.tower
    e, B = T(e), T(B)
    if variant == 1:
        C1, C2 = sigma_c(e), e.inverse()
    elif variant == 2:
        C1 = e
        eB = e * B
        C2 = T.one
        x = eB
        for _ in range(p - 1):
            C2 = C2 * x
            x = sigma_c(x)
    else:
        raise PreconditionFailed("variant must be 1 or 2")
    if sigma_a(C1) / C1 * (C2 / sigma_c(C2)) != B:
        raise IdentityViolated("B != sigma_a(C1)/C1 * C2/sigma_c(C2)")
    return C1, C2


def modification(C1, C2, A0, C0, sigma_a: Automorphism, sigma_c: Automorphism, p: int):
    """A = N_{sigma_c}(C1), C = N_{sigma_a}(C2) with f_a = A/A0, f_c = C/C0 in F."""
    A = norm_along(sigma_c, C1, p)
    C = norm_along(sigma_a, C2, p)
    f_a = (A / A0).base_value()
    f_c = (C / C0).base_value()
    if f_a is None or f_c is None:
        raise NotInBaseField("A/A0 or C/C0 is not in the base field")
    return A, C, f_a, f_c


def connell_delta(A, C, C1, C2, sigma_a: Automorphism, sigma_c: Automorphism, p: int):
    """delta with sigma_c(delta)/delta = A C1^-p and sigma_a(delta)/delta = C C2^-p."""
    T = sigma_a.tower
    X = T(A) * T(C1) ** (-p)
    Y = T(C) * T(C2) ** (-p)
    if norm_along(sigma_c, X, p) != 1 or norm_along(sigma_a, Y, p) != 1:
        raise NormNotOne("N_{sigma_c}(A C1^-p) or N_{sigma_a}(C C2^-p) is not 1")
    if sigma_a(X) / X != sigma_c(Y) / Y:
        raise CompatibilityFailed("sigma_a(X)/X != sigma_c(Y)/Y")
    d1 = hilbert90_solve(sigma_c, X, p)
    u = sigma_a(d1) / d1 / Y
    if sigma_c(u) != u:
        raise CompatibilityFailed("correction term is not sigma_c-fixed")
    # w in the sigma_c-fixed part with sigma_a(w)/w = u^-1
    ia = T.index("ra")
    trials = (T.from_coeffs({tuple(k if j == ia else 0 for j in range(T.n)): 1})
              for k in range(p))
    w = hilbert90_solve(sigma_a, u.inverse(), p, trials=trials)
    return normalize_delta(d1 * w)


def normalize_delta(delta: TowerElem) -> TowerElem:
    """Scale by a base constant so that delta^-1 has leading coefficient 1.

    Both defining equations for delta are invariant under base scalars, so
    this only fixes a representative.
    """
    inv = delta.inverse()
    co = inv.coeffs()
    lead = co[max(co)]
    return delta * lead


def build_M(inst: KummerInstance, A, C, delta) -> Tower:
    E = inst.E
    return E.adjoin("rb", KUMMER, inst.b).adjoin("rA", KUMMER, A) \
        .adjoin("rC", KUMMER, C).adjoin("rd", KUMMER, delta)


def kummer_automorphisms(M: Tower, inst: KummerInstance, C1, C2, xi_powers=(0, 0), *,
                         check: bool = True):
    """sigma_a, sigma_b, sigma_c on M; ``check`` verifies the defining relations."""
    ra, rc, rb, rA, rC, rd = M.gens_elems()
    xi = M.xi
    i, j = xi_powers
    alpha, gamma = M(inst.alpha), M(inst.gamma)
    sa = Automorphism(M, [ra * xi, rc, rb, rA * rb / alpha, rC,
                          rd * rC * M(C2).inverse() * xi ** i], check=check)
    sc = Automorphism(M, [ra, rc * xi, rb, rA, rC * rb / gamma,
                          rd * rA * M(C1).inverse() * xi ** j], check=check)
    sb = Automorphism(M, [ra, rc, rb * xi, rA, rC, rd], check=check)
    return sa, sb, sc


def u4_build(inst: KummerInstance, variant: int = 2, *, xi_powers=(0, 0), e=None, delta=None,
             verify: bool = True, threads: int = 1) -> KummerTrace:
    """Run the whole construction; optional e and delta override the solvers."""
    p = inst.p
    sa, sc = inst.sigma_a_E, inst.sigma_c_E
    B = inst.gamma / inst.alpha
    sac = sa * sc
    e = hilbert90_solve(sac, B, p) if e is None else inst.E(e)
    if sac(e) / e != B:
        raise IdentityViolated("sigma_a sigma_c(e)/e != B")
    C1, C2 = c1c2_from_e(e, B, variant, sa, sc, p)
    A0 = a0_from_alpha(inst.alpha, sa, p)
    C0 = a0_from_alpha(inst.gamma, sc, p)
    A, C, f_a, f_c = modification(C1, C2, A0, C0, sa, sc, p)
    delta = connell_delta(A, C, C1, C2, sa, sc, p) if delta is None else inst.E(delta)
    M = build_M(inst, A, C, delta)
    s_a, s_b, s_c = kummer_automorphisms(M, inst, C1, C2, xi_powers)
    trace = KummerTrace(inst, variant, B, e, C1, C2, A0, C0, A, C, delta, f_a, f_c,
                        M, s_a, s_b, s_c, tuple(xi_powers))
    if verify:
        verify_kummer_trace(trace, threads=threads)
    return trace


def kummer_identities(tr: KummerTrace) -> dict:
    """The four defining identities, the norm identities behind them and invariance facts."""
    inst = tr.instance
    p = inst.p
    sa, sc = inst.sigma_a_E, inst.sigma_c_E
    E = inst.E
    b = E(inst.b)
    A, C, d, C1, C2 = tr.A, tr.C, tr.delta, tr.C1, tr.C2
    alpha, gamma = inst.alpha, inst.gamma
    out = {
        "B=gamma/alpha": tr.B * alpha == gamma,
        "sigma_a sigma_c(e)/e=B": (sa * sc)(tr.e) == tr.e * tr.B,
        "B=sigma_a(C1)/C1*C2/sigma_c(C2)": sa(C1) * C2 == tr.B * C1 * sc(C2),
        "A=N_c(C1)": norm_along(sc, C1, p) == A,
        "C=N_a(C2)": norm_along(sa, C2, p) == C,
        "A0=prod sigma_a^i(alpha^(p-i-1))": a0_from_alpha(alpha, sa, p) == tr.A0,
        "C0=prod sigma_c^i(gamma^(p-i-1))": a0_from_alpha(gamma, sc, p) == tr.C0,
        "A=f_a*A0": tr.A0 * tr.f_a == A,
        "C=f_c*C0": tr.C0 * tr.f_c == C,
        "sigma_a(A0)/A0=N_c(B)": sa(tr.A0) == tr.A0 * norm_along(sc, tr.B, p),
        "sigma_c(C0)/C0=N_a(B)^-1": sc(tr.C0) * norm_along(sa, tr.B, p) == tr.C0,
        "sigma_c(delta)=delta*A*C1^-p": sc(d) * C1 ** p == d * A,
        "sigma_a(delta)=delta*C*C2^-p": sa(d) * C2 ** p == d * C,
        "sigma_a(A)=A*b/alpha^p": sa(A) * alpha ** p == A * b,
        "sigma_c(C)=C*b/gamma^p": sc(C) * gamma ** p == C * b,
        "sigma_c(A)=A": sc(A) == A,
        "sigma_a(C)=C": sa(C) == C,
    }
    return out


def wstar_dimension(tr: KummerTrace) -> int:
    """dim of <[b], [A], [C], [delta]> in E^x/(E^x)^p; 4 or DimensionDeficient.

    Operator argument, written multiplicatively: (sigma_a-1)(sigma_c-1) sends
    [delta] to [b] and kills [b], [A], [C]; then sigma_a-1 sends [A] to [b]
    and kills [C]; sigma_c-1 sends [C] to [b].  Since [b] != 0 in E (a, b, c
    independent), any relation has all exponents zero.  Each step rests on
    one exact identity below.
    """
    inst = tr.instance
    sa, sc = inst.sigma_a_E, inst.sigma_c_E
    p = inst.p
    E = inst.E
    b = E(inst.b)
    A, C, d, C1, C2 = tr.A, tr.C, tr.delta, tr.C1, tr.C2
    steps = [
        ("sigma_c(delta)/delta=A*C1^-p", bool(d) and sc(d) * C1 ** p == d * A),
        ("sigma_a(delta)/delta=C*C2^-p", bool(d) and sa(d) * C2 ** p == d * C),
        ("sigma_a(A)/A=b/alpha^p", bool(A) and sa(A) * inst.alpha ** p == A * b),
        ("sigma_c(C)/C=b/gamma^p", bool(C) and sc(C) * inst.gamma ** p == C * b),
        ("sigma_c(A)=A", sc(A) == A),
        ("sigma_a(C)=C", sa(C) == C),
        ("[b]_E!=0", kummer_independent([inst.a, inst.b, inst.c], p)),
    ]
    bad = [n for n, ok in steps if not ok]
    if bad:
        raise DimensionDeficient("W* dimension below 4: " + ", ".join(bad), failed=bad)
    return 4


def verify_kummer_trace(tr: KummerTrace, threads: int = 1) -> dict:
    """Recompute every certificate of a Kummer trace from its raw data."""
    check_instance(tr.instance)
    ids = kummer_identities(tr)
    bad = [k for k, ok in ids.items() if not ok]
    if bad:
        raise IdentityViolated("identities fail: " + ", ".join(bad))
    dim = wstar_dimension(tr)
    span = {n: GeneratorCertificate(n, "span-dimension", {"dimension": dim})
            for n in ("rA", "rC", "rd")}
    cert = validate_tower(tr.tower, known=span)
    u4 = u4_certificate(tr.sigma_a, tr.sigma_b, tr.sigma_c, tr.p, tr.tower.degree,
                        threads=threads)
    tr.checks = {**ids, "wstar": dim == 4, "relations": u4.presentation.ok}
    tr.certificate = {"tower": cert, "u4": u4}
    return tr.checks


# Heisenberg extensions


def heisenberg_build(F, p, a, b, alpha, f_a=1, *, verify: bool = True):
    """L = F(ra, rb, rA), A = f_a * A0(alpha); returns (L, sigma_a, sigma_b, sigma_A)."""
    a, b = F(a), F(b)
    if not kummer_independent([a, b], p):
        raise PreconditionFailed("a, b are dependent modulo p-th powers")
    K = Tower(F, p).adjoin("ra", KUMMER, a)
    alpha = K(alpha)
    ra = K.gen(0)
    s = Automorphism(K, [ra * K.xi])
    if norm_along(s, alpha, p) != b:
        raise NormMismatch("N(alpha) != b")
    A = a0_from_alpha(alpha, s, p) * F(f_a)
    L = K.adjoin("rb", KUMMER, b).adjoin("rA", KUMMER, A)
    ra, rb, rA = L.gens_elems()
    xi = L.xi
    sa = Automorphism(L, [ra * xi, rb, rA * rb / L(alpha)])
    sb = Automorphism(L, [ra, rb * xi, rA])
    sA = commutator(sa, sb, p * p)
    if verify:
        validate_tower(L)
        if not verify_presentation_U3(sa, sb, p).ok:
            raise RelationFailed("Heisenberg relations fail")
        iso_to_U3(enumerate_group([sa, sb], cap=p ** 3 + 1))
    return L, sa, sb, sA


# instance search


def small_elements(F, bound: int) -> list:
    """Deterministic list of small nonzero base elements of height <= bound."""
    if bound <= 0:
        return []
    if F is QQ:
        out = []
        for n in range(1, bound + 1):
            out += [Fraction(n), Fraction(-n)]
        return out
    if isinstance(F, RationalFunctionField):
        K = F.K
        consts = [c for c in K.elements() if c]
        out = [F(c) for c in consts]
        t = F.t
        for d in range(1, bound):
            for lead in consts[:1]:
                for tail in product(K.elements(), repeat=d):
                    poly = t ** d * lead
                    for i, c in enumerate(tail):
                        if c:
                            poly = poly + t ** i * c
                    out.append(poly)
        return out
    return [F(c) for c in F.elements() if c]


def _norm_linear(x, y, r, p):
    """N(x + y*root) for root^p = r."""
    return x ** p - (-y) ** p * r


def instance_generate(F, p: int, bound: int) -> KummerInstance:
    """First instance (a, c, alpha, gamma) in a fixed enumeration order.

    a and c run over small elements; alpha = x + y ra and gamma = u + v rc
    have small coefficients; the first pair with N(alpha) = N(gamma) = b and
    a, b, c independent is returned.
    """
    if root_of_unity(F, p) is None:
        raise MissingRootOfUnity(f"{F.descriptor()} lacks a primitive {p}-th root of unity")
    elems = small_elements(F, bound)
    coeffs = [F.zero] + elems if F is not QQ else [Fraction(0)] + elems
    for ia, a in enumerate(elems):
        if not kummer_independent([a], p):
            continue
        for c in elems[ia + 1:]:
            if not kummer_independent([a, c], p):
                continue
            gam = {}
            for u in coeffs:
                for v in elems:
                    n = _norm_linear(u, v, c, p)
                    if n and n not in gam:
                        gam[n] = (u, v)
            for x in coeffs:
                for y in elems:
                    b = _norm_linear(x, y, a, p)
                    if not b or b not in gam:
                        continue
                    if not kummer_independent([a, b, c], p):
                        continue
                    u, v = gam[b]
                    E = build_E(F, p, a, c)
                    ra, rc = E.gens_elems()
                    return make_instance(F, p, a, b, c, ra * y + x, rc * v + u)
    raise SearchExhausted(f"no instance with height <= {bound}")

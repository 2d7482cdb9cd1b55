"""Descent of U_4(F_p) constructions to a base field without mu_p.

F = F_0(xi) is cyclic over F_0 of degree d with generator sigma_0 and
sigma_0(xi) = xi^e.  The twist x -> x~ = [prod_i sigma_0^-i(x^(e^i))]^l,
with d*l = 1 mod p, satisfies sigma_0(x~) = x~^e * sigma_0(x^m)^p where
m = l(1 - e^d)/p, so twisted radicands span sigma_0-stable Kummer groups.

sigma_0 acts on a Kummer tower over F through the lift
r -> xi^j r^e w with sigma_0(rhs) = rhs^e w^p; the unique lift of order d
(the complement of the p-group) is found generator by generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .base import (
    coefficient_field, frobenius_on, is_function_field, kummer_independent, pth_root,
    root_of_unity,
)
from .errors import (
    AlbertConditionFailed, IdentityFailed, NotCommuting, ProjectorDegenerate, SearchExhausted,
    Unsupported, WrongCharacteristic, XiAlreadyPresent,
)
from .galois import Automorphism
from .gf import GF
from .kummer import (
    KummerTrace, build_E, make_instance, small_elements, u4_build,
)
from .ratfunc import QQ, RationalFunctionField
from .specialize import _embedding
from .tower import KUMMER, Tower, TowerElem


@dataclass
class DescentContext:
    """F = F_0(xi) over F_0 with d = [F:F_0], sigma_0(xi) = xi^e, d*l = 1 mod p."""

    F0: object
    F: object
    p: int
    d: int
    e: int
    ell: int
    base_map: int  # sigma_0 acts on constants as c -> c^(char^base_map)
    embed: object = None

    def sigma0(self, x, power: int = 1):
        """sigma_0^power on an element of F."""
        K = coefficient_field(self.F)
        k = K.k if isinstance(K, GF) else 1
        return frobenius_on(self.F, (self.base_map * power) % k)(x)

    def to_F(self, x):
        return self.embed(x) if self.embed is not None else self.F(x)

    def as_json(self) -> dict:
        return {"F0": self.F0.descriptor(), "F": self.F.descriptor(), "p": self.p,
                "d": self.d, "e": self.e, "ell": self.ell}


def build_descent_context(F0, p: int, *, allow_trivial: bool = False) -> DescentContext:
    """Adjoin mu_p to F_0; finite constant fields only (Q would need Q(xi))."""
    K0 = coefficient_field(F0)
    if K0 is QQ:
        if p == 2:
            raise XiAlreadyPresent("-1 is already in Q")
        raise Unsupported("descent over Q needs cyclotomic base fields")
    if K0.p == p:
        raise WrongCharacteristic("descent needs characteristic different from p")
    q = K0.q
    d = 1
    while pow(q, d, p) != 1:
        d += 1
    if d == 1:
        if not allow_trivial:
            raise XiAlreadyPresent(f"{K0.descriptor()} already contains the {p}-th roots of unity")
        return DescentContext(F0, F0, p, 1, 1, 1, 0)
    K = GF(K0.p, K0.k * d)
    emb_c = _embedding(K0, K)
    if is_function_field(F0):
        F = RationalFunctionField(K)

        def embed(x):
            x = F0(x)
            return F.from_poly(tuple(emb_c(c) for c in x.num), tuple(emb_c(c) for c in x.den))
    else:
        F = K

        def embed(x):
            return emb_c(F0(x))
    e = q % p
    ell = pow(d, -1, p)
    ctx = DescentContext(F0, F, p, d, e, ell, K0.k, embed)
    xi = root_of_unity(F, p)
    if ctx.sigma0(xi) != xi ** e:  # pragma: no cover
        raise IdentityFailed("sigma_0(xi) != xi^e")
    return ctx


# the twist


def _pow_lift(lift, ctx, i):
    """sigma_0^i as a callable (i may be negative)."""
    i %= ctx.d
    if lift is None:
        return lambda x: ctx.sigma0(x, i)
    f = lift ** i
    return f


def phi_apply(x, ctx: DescentContext, lift: Automorphism | None = None):
    """x~ = [prod_{i<d} sigma_0^-i(x^(e^i))]^l; lift acts on tower elements."""
    acc = None
    for i in range(ctx.d):
        y = _pow_lift(lift, ctx, -i)(x ** (ctx.e ** i))
        acc = y if acc is None else acc * y
    return acc ** ctx.ell


def twist_exponent(ctx: DescentContext) -> int:
    num = ctx.ell * (1 - ctx.e ** ctx.d)
    if num % ctx.p:
        raise IdentityFailed(f"l(1-e^d) = {num} is not divisible by p")
    return num // ctx.p


def verify_twist_relation(x, ctx: DescentContext, lift: Automorphism | None = None) -> dict:
    """sigma_0(x~)/x~^e = sigma_0(x^m)^p with m = l(1-e^d)/p; returns the witness."""
    m = twist_exponent(ctx)
    s = _pow_lift(lift, ctx, 1)
    xt = phi_apply(x, ctx, lift)
    w = s(x ** m)
    if s(xt) != xt ** ctx.e * w ** ctx.p:
        raise IdentityFailed("sigma_0(x~) != x~^e * sigma_0(x^m)^p")
    return {"exponent": m, "witness": w}


def twist_class_root(x, ctx: DescentContext) -> object:
    """beta in F with x~ = x * beta^p (base elements), or IdentityFailed."""
    beta = pth_root(phi_apply(x, ctx) / x, ctx.p)
    if beta is None:
        raise IdentityFailed("x~/x is not a p-th power")
    return beta


def albert_witness(x, ctx: DescentContext):
    """w with sigma_0(x) = x^e w^p for x in F, or AlbertConditionFailed."""
    w = pth_root(ctx.sigma0(x) / x ** ctx.e, ctx.p)
    if w is None:
        raise AlbertConditionFailed(f"sigma_0(x)/x^e is not a p-th power for x = {x}")
    return w


# lifting sigma_0 to towers


def lift_sigma0(T: Tower, ctx: DescentContext, witnesses: dict | None = None) -> Automorphism:
    """The order-d extension of sigma_0 to a Kummer tower over F.

    witnesses[name] = w with sigma_0(rhs) = rhs^e w^p for generators whose
    defining element is not in F; base radicands use albert_witness.
    """
    witnesses = witnesses or {}
    xi = T.xi
    images = []
    for k, g in enumerate(T.gens):
        if g.kind != KUMMER:
            raise Unsupported("descent is for Kummer towers")
        sub = T.prefix(k + 1)
        r = sub.gen(k)
        if g.name in witnesses:
            w = sub(witnesses[g.name])
        else:
            v = g.rhs.base_value()
            if v is None:
                raise AlbertConditionFailed(f"no witness for {g.name}")
            w = sub(albert_witness(v, ctx))
        lower = [sub(v) for v in images]
        chosen = None
        for j in range(ctx.p):
            cand = Automorphism(sub, lower + [r ** ctx.e * w * xi ** j], ctx.base_map, check=False)
            try:
                cand.check_relations()
            except Exception:
                raise AlbertConditionFailed(f"{g.name}: lift violates the defining relation")
            if (cand ** ctx.d).is_identity():
                chosen = cand
                break
        if chosen is None:  # pragma: no cover - a lift of order d always exists
            raise NotCommuting(f"no lift of order {ctx.d} on {g.name}")
        images = list(chosen.images)
    return Automorphism(T, [T(v) for v in images], ctx.base_map)


# instances


@dataclass
class DescentInstance:
    ctx: DescentContext
    a: object
    b: object
    c: object
    alpha: TowerElem
    gamma: TowerElem
    seeds: dict = field(default_factory=dict)


def albert_element(v, ctx: DescentContext):
    """v * sigma_0(v)^e, which satisfies sigma_0(x) = x^e mod p-th powers."""
    return v * ctx.sigma0(v) ** ctx.e


def _norm_linear(x, y, r, p):
    return x ** p - (-y) ** p * r


def instance_search(ctx: DescentContext, bound: int = 2) -> DescentInstance:
    """First (a, c, alpha_0, gamma_0) in a fixed order, then twisted by Phi.

    a, c range over v sigma_0(v)^e; alpha_0 = x + y ra, gamma_0 = u + w rc
    with equal norms b_0.  When b_0 fails the Albert condition, x -> x sigma_0(x)^e
    (on alpha_0, gamma_0 through the lift to E) repairs it and keeps the norms.
    """
    F, p = ctx.F, ctx.p
    elems = small_elements(F, bound)
    consts = [x for x in elems if x.is_constant()] if is_function_field(F) else elems
    cands = []
    seen = set()
    for v in elems:
        x = albert_element(v, ctx)
        if x in seen or pth_root(x, p) is not None:
            continue
        seen.add(x)
        cands.append((v, x))
    coeffs = [F.zero] + elems
    norm_tabs = []
    for v, x in cands:
        tab = {}
        for u in coeffs:
            for w in consts:
                n = _norm_linear(u, w, x, p)
                if n and n not in tab:
                    tab[n] = (u, w)
        norm_tabs.append(tab)
    # first pass keeps b_0 when it already satisfies the Albert condition
    for twist in (False, True):
        for i, (va, a) in enumerate(cands):
            for j in range(i + 1, len(cands)):
                vc, c = cands[j]
                if not kummer_independent([a, c], p):
                    continue
                tab_c = norm_tabs[j]
                for b0, (x, y) in norm_tabs[i].items():
                    if b0 not in tab_c:
                        continue
                    albert = pth_root(ctx.sigma0(b0) / b0 ** ctx.e, p) is not None
                    if albert == twist:
                        continue
                    u, w = tab_c[b0]
                    E = build_E(F, p, a, c)
                    ra, rc = E.gens_elems()
                    alpha, gamma, b = ra * y + x, rc * w + u, b0
                    if twist:
                        lift = lift_sigma0(E, ctx)
                        alpha = alpha * lift(alpha) ** ctx.e
                        gamma = gamma * lift(gamma) ** ctx.e
                        b = albert_element(b0, ctx)
                    if not kummer_independent([a, b, c], p):
                        continue
                    return DescentInstance(ctx, a, b, c, alpha, gamma,
                                           {"v_a": va, "v_c": vc, "b0": b0, "twisted": twist,
                                            "alpha0": ra * y + x, "gamma0": rc * w + u})
    raise SearchExhausted(f"no descent instance with height <= {bound}")


# the descent construction


@dataclass
class DescentTrace:
    ctx: DescentContext
    instance: DescentInstance
    base: KummerTrace
    twisted: KummerTrace
    beta: dict
    twist_rel: dict
    sigma0_E: Automorphism
    sigma0_M: Automorphism
    m0_generators: list
    char_table: list
    checks: dict = field(default_factory=dict)


def build_twisted_tower(trace: KummerTrace, ctx: DescentContext, *, verify: bool = True,
                        threads: int = 1):
    """M~ = E(rb, (A~)^(1/p), (C~)^(1/p), (delta~)^(1/p)) with its group and sigma_0 lift.

    The twisted data (a, b, c, alpha~/beta_b, gamma~/beta_b, e~, delta~)
    run through the same construction, so the full U_4 verification is
    repeated on M~.  Returns (twisted trace, lift on E, lift on M~, beta,
    twist relation certificates).
    """
    inst = trace.instance
    E = inst.E
    if ctx.d == 1:
        lift_E = Automorphism.identity(E)
        return trace, lift_E, Automorphism.identity(trace.tower), {}, {}
    for name, x in (("a", inst.a), ("b", inst.b), ("c", inst.c)):
        albert_witness(x, ctx)
    lift_E = lift_sigma0(E, ctx)
    beta = {name: twist_class_root(x, ctx) for name, x in (("a", inst.a), ("b", inst.b), ("c", inst.c))}
    alpha_t = phi_apply(inst.alpha, ctx, lift_E) / E(beta["b"])
    gamma_t = phi_apply(inst.gamma, ctx, lift_E) / E(beta["b"])
    e_t = phi_apply(trace.e, ctx, lift_E)
    d_t = phi_apply(trace.delta, ctx, lift_E)
    inst_t = make_instance(inst.F, inst.p, inst.a, inst.b, inst.c, alpha_t, gamma_t, E=E)
    tw = u4_build(inst_t, trace.variant, e=e_t, delta=d_t, verify=verify, threads=threads)
    twist_rel = {}
    for name, x in (("A", trace.A), ("C", trace.C), ("delta", trace.delta)):
        twist_rel[name] = verify_twist_relation(x, ctx, lift_E)
    # sigma_0 on M~: rA~ -> xi^j rA~^e w with w = sigma_0(A^m) from the twist relation
    wit = {"rA": twist_rel["A"]["witness"], "rC": twist_rel["C"]["witness"],
           "rd": twist_rel["delta"]["witness"]}
    # the twisted radicands differ from Phi(A), Phi(C) by base factors
    fixes = {}
    for gname, tw_x, x in (("rA", tw.A, trace.A), ("rC", tw.C, trace.C),
                           ("rd", tw.delta, trace.delta)):
        ratio = tw_x / phi_apply(x, ctx, lift_E)
        r = ratio.base_value()
        if r is None:
            raise IdentityFailed(f"twisted {gname} radicand is not Phi of the original")
        wr = albert_witness(r, ctx)
        fixes[gname] = wr
        wit[gname] = E(wit[gname]) * wr
    lift_M = lift_sigma0(tw.tower, ctx, wit)
    return tw, lift_E, lift_M, beta, twist_rel


def lift_commutation(lift: Automorphism, gens) -> dict:
    return {name: lift * g == g * lift for name, g in gens}


def invariant_element(lift: Automorphism, ctx: DescentContext, k: int, *, exponent: int = 1,
                      thetas=None) -> TowerElem:
    """sum_i sigma_0^i(theta r_k^exponent), first theta keeping generator k."""
    T = lift.tower
    r = T.gen(k)
    if thetas is None:
        K = coefficient_field(ctx.F)
        g = K.gen if isinstance(K, GF) else 1
        thetas = [ctx.F(1), ctx.F(g), ctx.F(g) ** 2]
    powers = [lift ** i for i in range(ctx.d)]
    for th in thetas:
        x = T(th) * r ** exponent
        u = x
        for f in powers[1:]:
            u = u + f(x)
        if any(ex[k] for ex in u.coeffs()):
            return u
    raise ProjectorDegenerate(f"every averaged element lost generator {T.gens[k].name}")


def descend_fixed_field(lift: Automorphism, ctx: DescentContext, gens) -> tuple:
    """H-invariant generators of M_0 and the commutation certificate.

    Each u_k is sigma_0-invariant and involves generator k, so
    F(u_1..u_k) = M~_k by induction and [F_0(u):F_0] >= [M~:F] = p^6.
    """
    comm = lift_commutation(lift, gens)
    bad = [n for n, ok in comm.items() if not ok]
    if bad:
        raise NotCommuting("sigma_0 lift does not commute with " + ", ".join(bad))
    T = lift.tower
    us = []
    for k in range(T.n):
        u = invariant_element(lift, ctx, k)
        if lift(u) != u:  # pragma: no cover
            raise ProjectorDegenerate("averaged element is not invariant")
        us.append(u)
    return us, comm


def character_table(tower: Tower, sigmas, names=("ra", "rb", "rc")) -> list:
    """[[chi_i(sigma_j)]] with chi_i(s) = log_xi(s(r_i)/r_i)."""
    xi = tower.xi
    p = tower.p
    powers = [tower.one * xi ** k for k in range(p)]
    table = []
    for n in names:
        r = tower.gen(tower.index(n))
        row = []
        for s in sigmas:
            q = s(r) / r
            row.append(next(k for k, v in enumerate(powers) if v == q))
        table.append(row)
    return table


def descent_build(ctx: DescentContext, inst: DescentInstance, variant: int = 2, *,
                  verify: bool = True, threads: int = 1) -> DescentTrace:
    kinst = make_instance(ctx.F, ctx.p, inst.a, inst.b, inst.c, inst.alpha, inst.gamma)
    base = u4_build(kinst, variant, verify=False)
    tw, lift_E, lift_M, beta, twist_rel = build_twisted_tower(base, ctx, verify=verify,
                                                              threads=threads)
    gens = (("sigma_a", tw.sigma_a), ("sigma_b", tw.sigma_b), ("sigma_c", tw.sigma_c))
    us, comm = descend_fixed_field(lift_M, ctx, gens)
    table = character_table(tw.tower, [g for _, g in gens])
    fixed = [[tw_s(u) == u for _, tw_s in gens] for u in (us[tw.tower.index(n)]
                                                          for n in ("ra", "rb", "rc"))]
    ident = [[int(i == j) for j in range(3)] for i in range(3)]
    tr = DescentTrace(ctx, inst, base, tw, beta, twist_rel, lift_E, lift_M, us, table)
    tr.checks = {
        "twist_class": all(phi_apply(x, ctx) == x * beta[n] ** ctx.p
                           for n, x in (("a", inst.a), ("b", inst.b), ("c", inst.c))),
        "twist_relation": sorted(twist_rel) == ["A", "C", "delta"],
        "commutation": all(comm.values()),
        "lift_order": (lift_M ** ctx.d).is_identity(),
        "fixed_field_invariant": all(lift_M(u) == u for u in us),
        "char_table": table == ident,
        "char_fixed_fields": fixed == [[i != j for j in range(3)] for i in range(3)],
        **{f"twisted:{k}": v for k, v in tw.checks.items()},
    }
    return tr

"""Trace files: JSON encoding of constructions and the replaying verifier.

A trace stores inputs, derived elements, towers and automorphism images,
never pass flags.  ``verify_document`` rebuilds objects from the raw data
and re-executes every certificate; ``VerificationReport`` lists the
outcome of each check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import errors as E_
from .artin_schreier import (
    ASTrace, as_automorphisms, as_identities, u4_as_build, wstar_dimension_as,
)
from .base import base_field_from_descriptor, kummer_independent
from .errors import ParseError, UnipotentError
from .expr import parse_base
from .galois import Automorphism, u4_certificate, verify_presentation_U4
from .kummer import (
    KummerTrace, build_E, build_M, check_instance, kummer_automorphisms, kummer_identities,
    make_instance, u4_build, wstar_dimension,
)
from .ratfunc import RatFunc, coeff_to_expr, coeff_to_json
from .tower import KUMMER, Tower, TowerElem, base_from_json, elem_from_json
from .validate import GeneratorCertificate, validate_tower

SCHEMA_VERSION = 1
TraceFormatError = E_._make("TraceFormatError", ParseError)


# encoding helpers


def dumps(doc: dict) -> str:
    """Canonical text: sorted keys, compact separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> dict:
    if not text.strip():
        raise TraceFormatError("empty trace")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise TraceFormatError("trace must be a JSON object")
    if doc.get("schemaVersion") != SCHEMA_VERSION:
        raise TraceFormatError(f"unsupported schemaVersion {doc.get('schemaVersion')!r}")
    return doc


def base_to_json(x):
    return x.to_json() if isinstance(x, RatFunc) else coeff_to_json(x)


def base_to_expr(x) -> str:
    return x.to_expr() if isinstance(x, RatFunc) else coeff_to_expr(x)


def tower_to_json(T: Tower) -> dict:
    return {"base": T.base.descriptor(), "p": T.p,
            "generators": [{"name": g.name, "kind": g.kind, "rhs": g.rhs.to_json()}
                           for g in T.gens]}


def tower_from_json(d: dict, F, start: Tower | None = None) -> Tower:
    """Rebuild a tower; with ``start`` the leading generators must agree with it."""
    _need(d, "generators", list)
    gens = d["generators"]
    T = start if start is not None else Tower(F, d.get("p"))
    k0 = T.n
    if len(gens) < k0:
        raise E_.TowerMismatch("tower shorter than its shared prefix")
    for k, g in enumerate(gens):
        if not isinstance(g, dict) or not {"name", "kind", "rhs"} <= set(g):
            raise TraceFormatError("generator entries need name, kind, rhs")
        if k < k0:
            have = T.gens[k]
            if (have.name, have.kind, have.rhs.to_json()) != (g["name"], g["kind"], g["rhs"]):
                raise E_.TowerMismatch(f"generator {g['name']} differs from the shared prefix")
            continue
        T = T.adjoin(g["name"], g["kind"], elem_from_json(T, g["rhs"]))
    return T


def aut_to_json(f: Automorphism) -> dict:
    return {"images": [v.to_json() for v in f.images], "baseMap": f.base_map}


def aut_from_json(T: Tower, d: dict) -> Automorphism:
    _need(d, "images", list)
    imgs = [elem_from_json(T, v) for v in d["images"]]
    return Automorphism(T, imgs, d.get("baseMap", 0), check=False)


def _need(d, key, typ):
    if not isinstance(d, dict) or key not in d or not isinstance(d[key], typ):
        raise TraceFormatError(f"missing or malformed field {key!r}")
    return d[key]


def _elem(T: Tower, d: dict, key: str) -> TowerElem:
    if key not in d:
        raise TraceFormatError(f"missing element {key!r}")
    return elem_from_json(T, d[key])


def _base(F, d: dict, key: str):
    if key not in d:
        raise TraceFormatError(f"missing element {key!r}")
    return base_from_json(F, d[key])


def _parse_field(desc):
    if not isinstance(desc, str):
        raise TraceFormatError("base descriptor must be a string")
    return base_field_from_descriptor(desc)


# trace documents


def _group_json(cert) -> dict:
    out = {"route": cert.route, "groupOrder": cert.group_order}
    if cert.representation is not None:
        rep = cert.representation
        out["matrixImages"] = [rep.images[rep.table.index(g)].to_json() for g in rep.table.gens]
    return out


def _tower_cert_json(cert) -> list:
    return cert.as_json()["generators"]


@dataclass
class StoredCertificates:
    """Certificate JSON carried through a parse so re-serializing is lossless."""

    doc: dict | None


def _certs_json(cert):
    if cert is None:
        return None
    if isinstance(cert, StoredCertificates):
        return cert.doc
    return {"tower": _tower_cert_json(cert["tower"]), "group": _group_json(cert["u4"])}


def as_trace_to_json(tr: ASTrace, *, trace_id: str | None = None) -> dict:
    if tr.certificate is None:
        raise E_.PreconditionFailed("trace has not been verified")
    return {
        "schemaVersion": SCHEMA_VERSION, "kind": "artin-schreier", "id": trace_id,
        "base": tr.F.descriptor(), "p": tr.p,
        "inputs": {k: base_to_expr(v) for k, v in (("a", tr.a), ("b", tr.b), ("c", tr.c))},
        "data": {"a": base_to_json(tr.a), "b": base_to_json(tr.b), "c": base_to_json(tr.c),
                 "A": tr.A.to_json(), "C": tr.C.to_json(), "delta": tr.delta.to_json()},
        "tower": tower_to_json(tr.tower),
        "automorphisms": {"sigma_a": aut_to_json(tr.sigma_a), "sigma_b": aut_to_json(tr.sigma_b),
                          "sigma_c": aut_to_json(tr.sigma_c)},
        "certificates": _certs_json(tr.certificate),
    }


_KUMMER_E = ("B", "e", "C1", "C2", "A0", "C0", "A", "C", "delta")


def _kummer_block(tr: KummerTrace, full: bool = True) -> dict:
    """Kummer data; without ``full`` the tower, images and certificates are omitted."""
    inst = tr.instance
    out = {
        "inputs": {"a": base_to_expr(inst.a), "b": base_to_expr(inst.b),
                   "c": base_to_expr(inst.c), "alpha": inst.alpha.to_expr(),
                   "gamma": inst.gamma.to_expr()},
        "variant": tr.variant, "xiPowers": list(tr.xi_powers),
        "data": {"a": base_to_json(inst.a), "b": base_to_json(inst.b),
                 "c": base_to_json(inst.c), "alpha": inst.alpha.to_json(),
                 "gamma": inst.gamma.to_json(),
                 "f_a": base_to_json(tr.f_a), "f_c": base_to_json(tr.f_c),
                 **{k: getattr(tr, k).to_json() for k in _KUMMER_E}},
        "tower": tower_to_json(tr.tower),
        "automorphisms": {"sigma_a": aut_to_json(tr.sigma_a), "sigma_b": aut_to_json(tr.sigma_b),
                          "sigma_c": aut_to_json(tr.sigma_c)},
        "certificates": _certs_json(tr.certificate),
    }
    if not full:
        for k in ("tower", "automorphisms", "certificates"):
            del out[k]
    return out


def kummer_trace_to_json(tr: KummerTrace, *, trace_id: str | None = None,
                         overrides=()) -> dict:
    if tr.certificate is None:
        raise E_.PreconditionFailed("trace has not been verified")
    return {"schemaVersion": SCHEMA_VERSION, "kind": "kummer", "id": trace_id,
            "base": tr.instance.F.descriptor(), "p": tr.p,
            "overrides": sorted(overrides), **_kummer_block(tr)}


def descent_trace_to_json(tr, *, trace_id: str | None = None) -> dict:
    ctx, inst = tr.ctx, tr.instance
    seeds = {k: (v.to_expr() if hasattr(v, "to_expr") else v) for k, v in inst.seeds.items()}
    return {
        "schemaVersion": SCHEMA_VERSION, "kind": "descent", "id": trace_id,
        "base0": ctx.F0.descriptor(), "base": ctx.F.descriptor(), "p": ctx.p,
        "context": {"d": ctx.d, "e": ctx.e, "ell": ctx.ell, "baseMap": ctx.base_map},
        "seeds": seeds,
        "original": _kummer_block(tr.base, full=False),
        "twisted": _kummer_block(tr.twisted),
        "beta": {k: base_to_json(v) for k, v in sorted(tr.beta.items())},
        "twistWitness": {k: v["witness"].to_json() for k, v in sorted(tr.twist_rel.items())},
        "lift": {"E": aut_to_json(tr.sigma0_E), "M": aut_to_json(tr.sigma0_M)},
        "invariants": [u.to_json() for u in tr.m0_generators],
        "characterTable": tr.char_table,
    }


def trace_to_json(tr, **kw) -> dict:
    from .descent import DescentTrace

    if isinstance(tr, ASTrace):
        return as_trace_to_json(tr, **kw)
    if isinstance(tr, KummerTrace):
        return kummer_trace_to_json(tr, **kw)
    if isinstance(tr, DescentTrace):
        return descent_trace_to_json(tr, **kw)
    raise TypeError(f"not a trace: {type(tr).__name__}")


# reconstruction


def as_trace_from_json(doc: dict) -> ASTrace:
    F = _parse_field(doc.get("base"))
    data = _need(doc, "data", dict)
    T = tower_from_json(_need(doc, "tower", dict), F)
    auts = _need(doc, "automorphisms", dict)
    s = {k: aut_from_json(T, _need(auts, k, dict)) for k in ("sigma_a", "sigma_b", "sigma_c")}
    a, b, c = (_base(F, data, k) for k in "abc")
    A, C, d = (_elem(T.prefix(2), data, k) for k in ("A", "C", "delta"))
    return ASTrace(F, a, b, c, T, A, C, d, s["sigma_a"], s["sigma_b"], s["sigma_c"],
                   certificate=StoredCertificates(doc.get("certificates")))


def _kummer_from_block(F, p: int, blk: dict, E: Tower | None = None) -> KummerTrace:
    data = _need(blk, "data", dict)
    a, b, c = (_base(F, data, k) for k in "abc")
    if "tower" in blk:
        M = tower_from_json(_need(blk, "tower", dict), F, start=E)
        if M.n < 2 or M.names()[:2] != ["ra", "rc"]:
            raise E_.TowerMismatch("Kummer towers start with ra, rc")
        E2 = M.prefix(2)
    else:
        E2 = E if E is not None else build_E(F, p, a, c)
    alpha, gamma = _elem(E2, data, "alpha"), _elem(E2, data, "gamma")
    inst = make_instance(F, p, a, b, c, alpha, gamma, check=False, E=E2)
    vals = {k: _elem(E2, data, k) for k in _KUMMER_E}
    f_a, f_c = _base(F, data, "f_a"), _base(F, data, "f_c")
    if "tower" not in blk:
        M = build_M(inst, vals["A"], vals["C"], vals["delta"])
        s = dict(zip(("sigma_a", "sigma_b", "sigma_c"),
                     kummer_automorphisms(M, inst, vals["C1"], vals["C2"],
                                          tuple(blk.get("xiPowers", [0, 0])), check=False)))
    else:
        auts = _need(blk, "automorphisms", dict)
        s = {k: aut_from_json(M, _need(auts, k, dict))
             for k in ("sigma_a", "sigma_b", "sigma_c")}
    xp = blk.get("xiPowers", [0, 0])
    return KummerTrace(inst, blk.get("variant", 2), vals["B"], vals["e"], vals["C1"], vals["C2"],
                       vals["A0"], vals["C0"], vals["A"], vals["C"], vals["delta"], f_a, f_c,
                       M, s["sigma_a"], s["sigma_b"], s["sigma_c"], tuple(xp),
                       certificate=StoredCertificates(blk.get("certificates")))


def kummer_trace_from_json(doc: dict) -> KummerTrace:
    F = _parse_field(doc.get("base"))
    return _kummer_from_block(F, doc.get("p"), doc)


def descent_trace_from_json(doc: dict):
    from .descent import DescentInstance, DescentTrace, build_descent_context

    F0 = _parse_field(doc.get("base0"))
    ctx = build_descent_context(F0, doc.get("p"))
    F = ctx.F
    base = _kummer_from_block(F, ctx.p, _need(doc, "original", dict))
    E = base.instance.E
    tw = _kummer_from_block(F, ctx.p, _need(doc, "twisted", dict), E)
    beta = {k: base_from_json(F, v) for k, v in _need(doc, "beta", dict).items()}
    wit = {k: {"witness": elem_from_json(E, v)}
           for k, v in _need(doc, "twistWitness", dict).items()}
    lift = _need(doc, "lift", dict)
    lift_E = aut_from_json(E, _need(lift, "E", dict))
    lift_M = aut_from_json(tw.tower, _need(lift, "M", dict))
    us = [elem_from_json(tw.tower, v) for v in _need(doc, "invariants", list)]
    table = _need(doc, "characterTable", list)
    bi = base.instance
    inst = DescentInstance(ctx, bi.a, bi.b, bi.c, bi.alpha, bi.gamma, dict(doc.get("seeds") or {}))
    return DescentTrace(ctx, inst, base, tw, beta, wit, lift_E, lift_M, us, table)


def reserialize(text: str) -> str:
    """parse then serialize; byte-identical to the input for canonical traces."""
    doc = loads(text)
    tr = trace_from_json(doc)
    kw = {"trace_id": doc.get("id")}
    if doc.get("kind") == "kummer":
        kw["overrides"] = doc.get("overrides") or ()
    return dumps(trace_to_json(tr, **kw))


_READERS = {"artin-schreier": as_trace_from_json, "kummer": kummer_trace_from_json,
            "descent": descent_trace_from_json}


def trace_from_json(doc: dict):
    kind = doc.get("kind")
    if kind not in _READERS:
        raise TraceFormatError(f"unknown trace kind {kind!r}")
    return _READERS[kind](doc)


# verification


@dataclass
class CheckEntry:
    name: str
    anchor: str
    passed: bool
    witness: str = ""


@dataclass
class VerificationReport:
    trace_id: str | None
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.entries) and all(e.passed for e in self.entries)

    def failures(self) -> list:
        return [e.name for e in self.entries if not e.passed]

    def as_json(self) -> dict:
        return {"schemaVersion": SCHEMA_VERSION, "trace": self.trace_id,
                "status": "pass" if self.ok else "fail",
                "checks": [{"name": e.name, "anchor": e.anchor,
                            "status": "pass" if e.passed else "fail", "witness": e.witness}
                           for e in self.entries]}


class _Stop(Exception):
    pass


class _Runner:
    def __init__(self, report: VerificationReport, fail_fast: bool):
        self.report = report
        self.fail_fast = fail_fast

    def __call__(self, name: str, anchor: str, fn, witness: str = ""):
        try:
            ok = bool(fn())
        except UnipotentError as exc:
            ok, witness = False, f"{exc.code}: {exc}"
        except (ArithmeticError, ValueError, TypeError, KeyError, IndexError) as exc:
            ok, witness = False, f"{type(exc).__name__}: {exc}"
        self.report.entries.append(CheckEntry(name, anchor, ok, witness))
        if not ok and self.fail_fast:
            raise _Stop
        return ok


def _group_checks(run, pre: str, s1, s2, s3, p: int, degree: int, stored: dict | None,
                  threads: int):
    for k, f in (("sigma_a", s1), ("sigma_b", s2), ("sigma_c", s3)):
        run(f"{pre}aut:{k}:relations", "generator images satisfy the defining equations",
            lambda f=f: f.check_relations() is None)
    got = {}
    if not run(f"{pre}presentation:evaluate", "relations of U_4 are computable",
               lambda: got.setdefault("rep", verify_presentation_U4(s1, s2, s3, p))):
        return
    rep = got["rep"]
    for n, ok in rep.relations:
        run(f"{pre}presentation:{n}", "U_4 presentation relation", lambda ok=ok: ok)
    run(f"{pre}presentation:central", "[[s1,s2],s3] is nontrivial", lambda: rep.central)

    def order():
        cert = u4_certificate(s1, s2, s3, p, degree, threads=threads)
        return stored is not None and _group_json(cert) == stored

    run(f"{pre}group:order", "group order p^6 and the isomorphism onto U_4(F_p)", order,
        f"{pre}certificates.group")


def _kummer_structure(run, pre: str, tr: KummerTrace, full: bool = True):
    """Cheap consistency checks: instance, tower shape and generator formulas."""
    inst = tr.instance
    p = inst.p
    run(f"{pre}instance:independent", "[a], [b], [c] independent modulo p-th powers",
        lambda: kummer_independent([inst.a, inst.b, inst.c], p))
    run(f"{pre}instance:norms", "alpha, gamma have norm b",
        lambda: check_instance(inst) is None)
    M = tr.tower

    def shape():
        want = [("ra", inst.a), ("rc", inst.c), ("rb", inst.b), ("rA", tr.A), ("rC", tr.C),
                ("rd", tr.delta)]
        return M.names() == [n for n, _ in want] and all(
            g.kind == KUMMER and g.rhs == M(v) for g, (_, v) in zip(M.gens, want))

    run(f"{pre}tower:shape", "M = E(b, A, C, delta)^(1/p)", shape)
    if full:
        # relations of the images are separate entries of the group checks
        run(f"{pre}aut:formula", "generator images follow the construction",
            lambda: [tr.sigma_a, tr.sigma_b, tr.sigma_c]
            == list(kummer_automorphisms(M, inst, tr.C1, tr.C2, tr.xi_powers, check=False)))


def _kummer_checks(run, pre: str, tr: KummerTrace, stored_cert, threads: int,
                   rebuild: bool, overrides=(), full: bool = True):
    """Identities and span checks; with ``full`` also the tower and group."""
    inst = tr.instance
    p = inst.p
    M = tr.tower
    ids = {}
    run(f"{pre}identity:evaluate", "identities are computable",
        lambda: ids.update(kummer_identities(tr)) or True)
    for name, ok in ids.items():
        run(f"{pre}identity:{name}", "construction identity", lambda ok=ok: ok)
    dim = [0]

    def wstar():
        dim[0] = wstar_dimension(tr)
        return dim[0] == 4

    run(f"{pre}wstar", "dim <[b],[A],[C],[delta]> = 4", wstar)
    if not full:
        return

    def tower_cert():
        span = {n: GeneratorCertificate(n, "span-dimension", {"dimension": 4})
                for n in ("rA", "rC", "rd")}
        cert = validate_tower(M, known=span)
        return stored_cert is not None and _tower_cert_json(cert) == stored_cert["tower"]

    run(f"{pre}tower:degree", "each adjunction has degree p", tower_cert,
        f"{pre}certificates.tower")
    _group_checks(run, pre, tr.sigma_a, tr.sigma_b, tr.sigma_c, p, M.degree,
                  stored_cert["group"] if stored_cert else None, threads)
    if rebuild:
        def again():
            kw = {k: getattr(tr, k) for k in overrides}
            fresh = u4_build(make_instance(inst.F, p, inst.a, inst.b, inst.c, inst.alpha,
                                           inst.gamma), tr.variant, xi_powers=tr.xi_powers,
                             verify=False, **kw)
            return all(getattr(fresh, k).to_json() == getattr(tr, k).to_json()
                       for k in _KUMMER_E) and fresh.f_a == tr.f_a and fresh.f_c == tr.f_c
        run(f"{pre}reproducible", "deterministic rebuild from the inputs", again)


def _inputs_match(run, F, E, doc_inputs: dict, vals: dict):
    def ok():
        for k, v in vals.items():
            text = doc_inputs.get(k)
            if not isinstance(text, str):
                return False
            parsed = E.parse(text) if isinstance(v, TowerElem) else parse_base(text, F)
            if parsed != v:
                return False
        return True

    run("inputs", "stored expressions match the stored elements", ok)


def _verify_as(run, doc, tr: ASTrace, threads: int):
    _inputs_match(run, tr.F, None, doc.get("inputs", {}), {"a": tr.a, "b": tr.b, "c": tr.c})
    M = tr.tower
    from .base import as_independent

    run("instance:independent", "a, b, c independent modulo the Artin-Schreier image",
        lambda: as_independent([tr.a, tr.b, tr.c]))

    def shape():
        fresh = u4_as_build(tr.F, tr.a, tr.b, tr.c, verify=False)
        return M.same_as(fresh.tower) and all(
            getattr(tr, k).to_json() == getattr(fresh, k).to_json() for k in ("A", "C", "delta"))

    run("tower:shape", "M = E(b, A, C, delta) with A = theta_a b, C = theta_c b", shape)
    ids = {}
    run("identity:evaluate", "identities are computable",
        lambda: ids.update(as_identities(tr)) or True)
    for name, ok in ids.items():
        run(f"identity:{name}", "construction identity", lambda ok=ok: ok)
    run("wstar", "dim <[b],[A],[C],[delta]> = 4", lambda: wstar_dimension_as(tr) == 4)
    cert = doc.get("certificates") or {}
    run("tower:degree", "each adjunction has degree p",
        lambda: _tower_cert_json(validate_tower(M)) == cert.get("tower"), "certificates.tower")
    run("aut:formula", "generator images follow the construction",
        lambda: [tr.sigma_a, tr.sigma_b, tr.sigma_c] == list(as_automorphisms(M)))
    _group_checks(run, "", tr.sigma_a, tr.sigma_b, tr.sigma_c, tr.p, M.degree,
                  cert.get("group"), threads)


def _verify_kummer(run, doc, tr: KummerTrace, threads: int):
    inst = tr.instance
    _inputs_match(run, inst.F, inst.E, doc.get("inputs", {}),
                  {"a": inst.a, "b": inst.b, "c": inst.c, "alpha": inst.alpha,
                   "gamma": inst.gamma})
    _kummer_structure(run, "", tr)
    _kummer_checks(run, "", tr, doc.get("certificates"), threads, True,
                   tuple(doc.get("overrides") or ()))


def _verify_descent(run, doc, tr, threads: int):
    from .descent import (
        albert_witness, build_descent_context, character_table, phi_apply, twist_exponent,
    )

    ctx = tr.ctx
    run("context", "d, e, l and the Frobenius generator of Gal(F/F_0)",
        lambda: doc.get("context") == {"d": ctx.d, "e": ctx.e, "ell": ctx.ell,
                                       "baseMap": ctx.base_map}
        and doc.get("base") == ctx.F.descriptor())
    base, tw = tr.base, tr.twisted
    inst = base.instance
    F, p = ctx.F, ctx.p
    for n, x in (("a", inst.a), ("b", inst.b), ("c", inst.c)):
        run(f"albert:{n}", "sigma_0(x)/x^e is a p-th power",
            lambda x=x: albert_witness(x, ctx) is not None)
    # cheap structural checks of both blocks first, so corrupted data fails fast
    _kummer_structure(run, "original:", base, full=False)
    _kummer_structure(run, "twisted:", tw)
    lift_E = tr.sigma0_E
    lift_M = tr.sigma0_M
    run("lift:M:extends", "the lift on M~ extends the lift on E",
        lambda: all(lift_M.images[i] == tw.tower(lift_E.images[i]) for i in range(2)))
    run("lift:E:relations", "sigma_0 lift on E respects the defining equations",
        lambda: lift_E.check_relations() is None)
    run("lift:E:order", "sigma_0 lift on E has order d", lambda: (lift_E ** ctx.d).is_identity())
    run("lift:M:relations", "sigma_0 lift on M~ respects the defining equations",
        lambda: lift_M.check_relations() is None)
    run("lift:M:order", "sigma_0 lift on M~ has order d", lambda: (lift_M ** ctx.d).is_identity())
    for n, x in (("a", inst.a), ("b", inst.b), ("c", inst.c)):
        beta = tr.beta.get(n)
        run(f"twist:class:{n}", "Phi(x) = x beta^p",
            lambda x=x, beta=beta: beta is not None and phi_apply(x, ctx) == x * beta ** p)
    bb = tr.beta.get("b")
    ti = tw.instance
    run("twist:instance", "twisted instance is (a, b, c, Phi(alpha)/beta_b, Phi(gamma)/beta_b)",
        lambda: (ti.a, ti.b, ti.c) == (inst.a, inst.b, inst.c)
        and ti.alpha == phi_apply(inst.alpha, ctx, lift_E) / inst.E(bb)
        and ti.gamma == phi_apply(inst.gamma, ctx, lift_E) / inst.E(bb))
    run("twist:e", "twisted e is Phi(e)", lambda: tw.e == phi_apply(base.e, ctx, lift_E))
    run("twist:delta", "twisted delta is Phi(delta)",
        lambda: tw.delta == phi_apply(base.delta, ctx, lift_E))
    m = twist_exponent(ctx)
    for n, x in (("A", base.A), ("C", base.C), ("delta", base.delta)):
        w = tr.twist_rel.get(n, {}).get("witness")

        def rel(x=x, w=w):
            xt = phi_apply(x, ctx, lift_E)
            return w is not None and w == lift_E(x ** m) and \
                lift_E(xt) == xt ** ctx.e * w ** p

        run(f"twist:relation:{n}", "sigma_0(x~)/x~^e = sigma_0(x^m)^p", rel)
    _kummer_checks(run, "original:", base, None, threads, False, full=False)
    _kummer_checks(run, "twisted:", tw, doc["twisted"].get("certificates"), threads, False,
                   ("e", "delta"))
    for k, g in (("sigma_a", tw.sigma_a), ("sigma_b", tw.sigma_b), ("sigma_c", tw.sigma_c)):
        run(f"commutes:{k}", "sigma_0 lift commutes with the U_4 generator",
            lambda g=g: lift_M * g == g * lift_M)

    def invariants():
        us = tr.m0_generators
        T = tw.tower
        return len(us) == T.n and all(
            lift_M(u) == u and any(ex[k] for ex in u.coeffs())
            and all(not any(ex[j] for j in range(k + 1, T.n)) for ex in u.coeffs())
            for k, u in enumerate(us))

    run("fixed-field:generators", "sigma_0-invariant generators, one per level", invariants)

    def fixed():
        T = tw.tower
        us = [tr.m0_generators[T.index(n)] for n in ("ra", "rb", "rc")]
        gens = (tw.sigma_a, tw.sigma_b, tw.sigma_c)
        return [[g(u) == u for g in gens] for u in us] == \
            [[i != j for j in range(3)] for i in range(3)]

    run("characters:fixed-fields", "sigma_j fixes the invariant generator of chi_i iff i != j",
        fixed)
    run("characters", "chi_i(sigma_j) = [i = j]",
        lambda: character_table(tw.tower, [tw.sigma_a, tw.sigma_b, tw.sigma_c])
        == tr.char_table == [[int(i == j) for j in range(3)] for i in range(3)])


def verify_document(doc: dict, *, fail_fast: bool = False, threads: int = 1
                    ) -> VerificationReport:
    """Rebuild a trace from raw data and replay its certificates."""
    report = VerificationReport(doc.get("id"))
    run = _Runner(report, fail_fast)
    holder = {}

    def parse():
        holder["tr"] = trace_from_json(doc)
        return True

    try:
        try:
            parse()
        except TraceFormatError:
            raise
        except (UnipotentError, ArithmeticError) as exc:
            code = getattr(exc, "code", type(exc).__name__)
            run("reconstruct", "stored data form valid towers", lambda: False)
            report.entries[-1].witness = f"{code}: {exc}"
            return report
        tr = holder["tr"]
        kind = doc["kind"]
        if kind == "artin-schreier":
            _verify_as(run, doc, tr, threads)
        elif kind == "kummer":
            _verify_kummer(run, doc, tr, threads)
        else:
            _verify_descent(run, doc, tr, threads)
    except _Stop:
        pass
    return report


def verify_text(text: str, **kw) -> VerificationReport:
    return verify_document(loads(text), **kw)


# coefficient sites, for corruption tests

_SKIP = {"schemaVersion", "kind", "id", "base", "base0", "p", "inputs", "certificates",
         "characterTable", "context", "seeds", "variant", "xiPowers", "baseMap", "name",
         "overrides"}
_BASE_HOLDERS = {"data", "beta"}


def _is_elem(x) -> bool:
    return isinstance(x, list) and all(
        isinstance(i, list) and len(i) == 2 and isinstance(i[0], list) for i in x)


def _coeff_sites(c, path, out):
    if isinstance(c, dict) and set(c) == {"n", "d"}:
        for i, v in enumerate(c["n"]):
            _coeff_sites(v, path + ("n", i), out)
        if c["n"]:
            for i, v in enumerate(c["d"]):
                _coeff_sites(v, path + ("d", i), out)
    elif isinstance(c, list):
        for i, v in enumerate(c):
            out.append(path + (i,))
    elif isinstance(c, (int, str)) and not isinstance(c, bool):
        out.append(path)


def coefficient_sites(doc: dict) -> list:
    """Paths to every stored field coefficient of a trace document."""
    out = []

    def walk(x, path, holder=False):
        if isinstance(x, dict):
            if set(x) == {"n", "d"}:
                _coeff_sites(x, path, out)
                return
            for k, v in x.items():
                if k not in _SKIP:
                    walk(v, path + (k,), k in _BASE_HOLDERS)
        elif _is_elem(x) and x:
            for i, (_, c) in enumerate(x):
                _coeff_sites(c, path + (i, 1), out)
        elif isinstance(x, list):
            for i, v in enumerate(x):
                walk(v, path + (i,))
        elif holder:
            _coeff_sites(x, path, out)

    walk(doc, ())
    return out


def mutate(doc: dict, path: tuple, rng) -> dict:
    """A deep copy of doc with the coefficient at ``path`` changed."""
    new = json.loads(json.dumps(doc))
    F = _parse_field(doc.get("base"))
    char = F.characteristic
    node = new
    for k in path[:-1]:
        node = node[k]
    v = node[path[-1]]
    if isinstance(v, str):
        node[path[-1]] = str(Fraction(v) + rng.choice([-2, -1, 1, 2]))
    else:
        node[path[-1]] = (v + rng.randrange(1, char)) % char
    return new

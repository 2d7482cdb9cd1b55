"""Shipped, certified instances and their stored traces."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from importlib import resources

from .artin_schreier import u4_as_build
from .base import base_field_from_descriptor
from .errors import ParseError, UnipotentError
from .expr import parse_base

ARTIN_SCHREIER = "artin-schreier"
KUMMER = "kummer"
DESCENT = "descent"
KINDS = (ARTIN_SCHREIER, KUMMER, DESCENT)

UnknownRecord = type("UnknownRecord", (ParseError,), {"code": "UnknownRecord"})


@dataclass(frozen=True)
class InstanceRecord:
    """A catalog entry.

    ``elements`` are expression strings in ``base`` (for descent records, in
    the field F = F_0(mu_p) of the descent context, with ``z`` the generator
    of its constants).  ``search`` replaces explicit elements by the first
    instance of the deterministic search with that bound.
    """

    id: str
    kind: str
    base: str
    p: int
    elements: dict
    expected_order: int
    anchor: str
    notes: str = ""
    variant: int = 2
    search: int | None = None
    trace: str | None = None  # file name under unipotent/traces

    def as_json(self) -> dict:
        out = asdict(self)
        out["expectedOrder"] = out.pop("expected_order")
        return out


RECORDS = (
    InstanceRecord(
        "as-p2", ARTIN_SCHREIER, "GF(2)(t)", 2,
        {"a": "1/t", "b": "1/(t+1)", "c": "t"}, 64,
        "Artin-Schreier U4 construction, p=2, enumeration route",
        "group enumerated and matched with U_4(F_2)", trace="as-p2.json"),
    InstanceRecord(
        "as-p3", ARTIN_SCHREIER, "GF(3)(t)", 3,
        {"a": "1/t", "b": "1/(t-1)", "c": "t"}, 729,
        "Artin-Schreier U4 construction, p=3, counting route",
        "order certified by the presentation and the tower degree", trace="as-p3.json"),
    InstanceRecord(
        "kummer-q-p2", KUMMER, "Q", 2,
        {"a": "2", "b": "-1", "c": "5", "alpha": "1+ra", "gamma": "2+rc"}, 64,
        "Kummer U4 construction over Q, p=2, variant 2",
        "A, C, M agree with the worked example over Q(sqrt2, sqrt5)", trace="kummer-q-p2.json"),
    InstanceRecord(
        "kummer-f7t-p3", KUMMER, "GF(7)(t)", 3,
        {"a": "t", "b": "t+1", "c": "t+2", "alpha": "ra+1", "gamma": "rc+3"}, 729,
        "Kummer U4 construction over F_7(t), p=3",
        "cube roots of unity lie in F_7", trace="kummer-f7t-p3.json"),
    InstanceRecord(
        "descent-f5t-p3", DESCENT, "GF(5)(t)", 3,
        {"a": "t^3+4*z*t^2+2*t+3*z",
         "b": "(2*z+4)*t^9+(2*z+2)*t^8+2*t^7+(4*z+2)*t^6+(3*z+4)*t^5+(2*z+1)*t^4"
              "+(4*z+2)*t^2+(z+4)*t+4",
         "c": "t^3+(4*z+1)*t^2+(z+4)*t+4*z+2"}, 729,
        "Descent of the U4 extension from F_5(t)(mu_3) to F_5(t), p=3",
        "instance from the twisted search with bound 2", search=2,
        trace="descent-f5t-p3.json"),
)


def records(kind: str | None = None) -> list:
    if kind is not None and kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return [r for r in RECORDS if kind is None or r.kind == kind]


def get_record(rid: str) -> InstanceRecord:
    for r in RECORDS:
        if r.id == rid:
            return r
    raise UnknownRecord(f"no catalog record {rid!r}")


def trace_text(rec: InstanceRecord) -> str:
    """The shipped trace for ``rec``."""
    if rec.trace is None:
        raise UnknownRecord(f"record {rec.id!r} ships no trace")
    return resources.files("unipotent").joinpath("traces", rec.trace).read_text()


def parse_elements(rec: InstanceRecord) -> dict:
    """Base elements of the record (alpha, gamma stay strings for make_instance)."""
    if rec.kind == DESCENT:
        from .descent import build_descent_context

        F = build_descent_context(base_field_from_descriptor(rec.base), rec.p).F
    else:
        F = base_field_from_descriptor(rec.base)
    out = {}
    for k, v in rec.elements.items():
        out[k] = v if k in ("alpha", "gamma") else parse_base(v, F)
    return out


def build_record(rec: InstanceRecord, *, threads: int = 1):
    """Construct the trace of ``rec`` from scratch."""
    F = base_field_from_descriptor(rec.base)
    if rec.kind == ARTIN_SCHREIER:
        el = parse_elements(rec)
        return u4_as_build(F, el["a"], el["b"], el["c"], threads=threads)
    if rec.kind == KUMMER:
        from .kummer import make_instance, u4_build

        el = parse_elements(rec)
        inst = make_instance(F, rec.p, el["a"], el["b"], el["c"], el["alpha"], el["gamma"])
        return u4_build(inst, rec.variant, threads=threads)
    if rec.kind == DESCENT:
        from .descent import build_descent_context, descent_build, instance_search

        ctx = build_descent_context(F, rec.p)
        inst = instance_search(ctx, rec.search)
        return descent_build(ctx, inst, rec.variant, threads=threads)
    raise UnipotentError(f"unknown kind {rec.kind!r}")  # pragma: no cover

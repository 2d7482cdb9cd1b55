"""Command line front end: construct, verify, massey, catalog.

Exit codes: 0 success, 1 a verification check failed, 2 bad input or a
failed precondition (with a JSON error object on standard error).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile

from . import catalog
from .base import base_field_from_descriptor
from .errors import ParseError, UnipotentError
from .expr import parse_base
from .serialize import TraceFormatError, dumps, loads, trace_from_json, trace_to_json, verify_document


class UsageError(ParseError):
    code = "UsageError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def write_atomic(path: str, text: str):
    """Write to a temporary file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    umask = os.umask(0)
    os.umask(umask)
    try:
        os.fchmod(fd, 0o666 & ~umask)
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, doc: dict, text: str | None = None):
    """Report to --out (JSON) or stdout (JSON with --json, else ``text``)."""
    if args.out:
        write_atomic(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.json or text is None:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)


# construct


def _field(args):
    if getattr(args, "q", None) is not None:
        return base_field_from_descriptor(f"GF({args.q})(t)")
    return base_field_from_descriptor(args.base)


def _construct_trace(args):
    if args.record:
        rec = catalog.get_record(args.record)
        return catalog.build_record(rec, threads=args.threads), rec.id
    if args.kind is None:
        raise UsageError("construct needs a kind or --record")
    if args.kind == catalog.ARTIN_SCHREIER:
        if args.q is None and args.base is None:
            raise UsageError("artin-schreier needs --q or --base")
        F = _field(args)
        vals = [args.a, args.b, args.c]
        if None in vals:
            raise UsageError("artin-schreier needs --a, --b and --c")
        from .artin_schreier import u4_as_build

        a, b, c = (parse_base(v, F) for v in vals)
        return u4_as_build(F, a, b, c, threads=args.threads), None
    if args.kind == catalog.KUMMER:
        from .kummer import instance_generate, make_instance, u4_build

        F = _field(args)
        if args.search is not None:
            inst = instance_generate(F, args.p, args.search)
        else:
            vals = [args.a, args.b, args.c, args.alpha, args.gamma]
            if None in vals:
                raise UsageError("kummer needs --a --b --c --alpha --gamma or --search")
            a, b, c = (parse_base(v, F) for v in vals[:3])
            inst = make_instance(F, args.p, a, b, c, args.alpha, args.gamma)
        return u4_build(inst, args.variant, threads=args.threads), None
    from .descent import build_descent_context, descent_build, instance_search

    F0 = base_field_from_descriptor(args.base0)
    ctx = build_descent_context(F0, args.p)
    inst = instance_search(ctx, args.search if args.search is not None else 2)
    return descent_build(ctx, inst, args.variant, threads=args.threads), None


def cmd_construct(args) -> int:
    tr, rid = _construct_trace(args)
    doc = trace_to_json(tr, trace_id=rid)
    text = dumps(doc)
    path = args.out or "trace.json"
    write_atomic(path, text)
    summary = {"trace": path, "kind": doc["kind"], "p": doc["p"], "groupOrder": doc["p"] ** 6,
               "checks": len(getattr(tr, "checks", {})),
               "status": "pass" if all(tr.checks.values()) else "fail"}
    if args.json:
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"wrote {path}: {doc['kind']} trace, group order {summary['groupOrder']}, "
              f"{summary['checks']} construction checks {summary['status']}")
    return 0 if summary["status"] == "pass" else 1


# verify


def _read_trace(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise TraceFormatError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def cmd_verify(args) -> int:
    doc = _read_trace(args.trace)
    rep = verify_document(doc, fail_fast=args.fail_fast, threads=args.threads)
    lines = [f"{'PASS' if e.passed else 'FAIL'}  {e.name}" + (f"  ({e.witness})" if e.witness
                                                              and not e.passed else "")
             for e in rep.entries]
    lines.append(f"{'PASS' if rep.ok else 'FAIL'}: {len(rep.entries) - len(rep.failures())}"
                 f"/{len(rep.entries)} checks")
    _emit(args, rep.as_json(), "\n".join(lines))
    return 0 if rep.ok else 1


# massey


def cmd_massey(args) -> int:
    from .pipeline import massey_report

    if args.trace:
        doc = _read_trace(args.trace)
    elif args.record:
        doc = loads(catalog.trace_text(catalog.get_record(args.record)))
    else:
        raise UsageError("massey needs --trace or --record")
    tr = trace_from_json(doc)
    rep = massey_report(tr, threads=args.threads, rng=random.Random(args.seed))
    rep = {"schemaVersion": 1, "trace": doc.get("id"), **rep}
    if not args.report:
        for c in rep["checks"]:
            c.pop("witness", None)
    lines = [f"{c['status'].upper()}  {c['name']}" for c in rep["checks"]]
    lines.append(f"{rep['status'].upper()}: route {rep['route']}, |G| = {rep['groupOrder']}")
    _emit(args, rep, "\n".join(lines))
    return 0 if rep["status"] == "pass" else 1


# catalog


def cmd_catalog(args) -> int:
    recs = catalog.records(args.kind)
    doc = {"schemaVersion": 1, "records": [r.as_json() for r in recs]}
    text = "\n".join(f"{r.id:16} {r.kind:15} {r.base:10} p={r.p}  order {r.expected_order:4}  "
                     f"{r.anchor}" for r in recs)
    _emit(args, doc, text)
    return 0


# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (written atomically)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized suites; constructions are deterministic")

    ap = _Parser(prog="unipotent", description="Exact U_4 Galois constructions and certificates.",
                 parents=[common])
    ap.set_defaults(out=None, json=False, threads=1, seed=0)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a trace")
    c.add_argument("kind", nargs="?", choices=catalog.KINDS)
    c.add_argument("--record", help="catalog record id")
    c.add_argument("--q", type=int, help="shorthand for --base GF(q)(t)")
    c.add_argument("--base", default="Q", help="base field descriptor, e.g. Q, GF(7)(t)")
    c.add_argument("--base0", default="GF(5)(t)", help="descent: field without mu_p")
    c.add_argument("--p", type=int, default=2)
    for n in ("a", "b", "c", "alpha", "gamma"):
        c.add_argument(f"--{n}")
    c.add_argument("--search", type=int, help="search bound instead of explicit elements")
    c.add_argument("--variant", type=int, choices=(1, 2), default=2)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="replay every check in a trace")
    v.add_argument("trace")
    v.add_argument("--fail-fast", action="store_true")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("massey", parents=[common], help="Massey product witnesses")
    m.add_argument("--trace")
    m.add_argument("--record")
    m.add_argument("--report", action="store_true", help="include cochain tables")
    m.set_defaults(func=cmd_massey)

    g = sub.add_parser("catalog", parents=[common], help="list shipped instances")
    g.add_argument("--kind", choices=catalog.KINDS)
    g.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "construct" and args.kind == catalog.ARTIN_SCHREIER \
                and args.q is None and args.base == "Q":
            args.base = None
        return args.func(args)
    except UnipotentError as exc:
        sys.stderr.write(json.dumps(exc.as_json(), sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Expression strings for field elements.

The grammar is integers, names, ``+ - * / ^`` and parentheses.  Names are
``t`` (the variable of K(t)), ``z`` (the generator of a finite field
GF(p^k) with k > 1) and tower generator names.  Parsing goes through the
standard ``ast`` module with a whitelist evaluator.

>>> from fractions import Fraction
>>> evaluate("(1/2)^-2 + 1", {}, Fraction)
Fraction(5, 1)
"""

from __future__ import annotations

import ast

from .errors import ParseError

_BIN = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def evaluate(text: str, env: dict, const):
    """Evaluate ``text`` with names from ``env`` and integers through ``const``."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    if any(ch in text for ch in "[]{}.,;:'\"\\=<>!@#$&|~`"):
        raise ParseError(f"illegal character in {text!r}")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    try:
        return _eval(tree.body, env, const)
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {text!r}") from exc


def _int_literal(node) -> int:
    sign = 1
    while isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        if isinstance(node.op, ast.USub):
            sign = -sign
        node = node.operand
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return sign * node.value
    raise ParseError("exponents must be integer literals")


def _eval(node, env, const):
    if isinstance(node, ast.Constant):
        if type(node.value) is not int:
            raise ParseError(f"unsupported literal {node.value!r}")
        return const(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ParseError(f"unknown name {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env, const)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return _eval(node.left, env, const) ** _int_literal(node.right)
        op = _BIN.get(type(node.op))
        if op is not None:
            return op(_eval(node.left, env, const), _eval(node.right, env, const))
    raise ParseError(f"unsupported syntax: {ast.dump(node)[:40]}")


def base_env(F) -> dict:
    """Names available over a base field: t for K(t), z for GF(p^k), k > 1."""
    from .ratfunc import RationalFunctionField
    from .gf import GF

    env = {}
    K = F.K if isinstance(F, RationalFunctionField) else F
    if isinstance(F, RationalFunctionField):
        env["t"] = F.t
    if isinstance(K, GF) and K.k > 1:
        env["z"] = F(K.gen)
    return env


def parse_base(text: str, F):
    """Parse an element of a base field."""
    return evaluate(text, base_env(F), F)

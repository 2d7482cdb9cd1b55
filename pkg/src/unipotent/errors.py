"""Exception hierarchy.

Every error carries a short machine-readable ``code`` used by the command
line front end when it reports failures as JSON.
"""

from __future__ import annotations


class UnipotentError(Exception):
    code = "Error"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details

    def as_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: str(v) for k, v in self.details.items()}
        return out


def _make(name: str, *bases) -> type:
    return type(name, bases or (UnipotentError,), {"code": name})


# base fields
FieldMismatch = _make("FieldMismatch")
DivisionByZero = _make("DivisionByZero", UnipotentError, ZeroDivisionError)
ZeroElement = _make("ZeroElement")
Undecided = _make("Undecided")
Unsupported = _make("Unsupported")
ParseError = _make("ParseError", UnipotentError, ValueError)

# towers
MissingRootOfUnity = _make("MissingRootOfUnity")
WrongCharacteristic = _make("WrongCharacteristic")
TowerMismatch = _make("TowerMismatch")
ZeroInverse = _make("ZeroInverse", DivisionByZero)
NotAField = _make("NotAField")
MissingImage = _make("MissingImage")

# automorphisms and groups
OverCap = _make("OverCap")
CapExceeded = _make("CapExceeded")
NotWellDefined = _make("NotWellDefined")
NotBijective = _make("NotBijective")
BadIndex = _make("BadIndex", UnipotentError, IndexError)
InvalidAutomorphism = _make("InvalidAutomorphism")

# Kummer and Artin-Schreier pipelines
OrderMismatch = _make("OrderMismatch")
NormMismatch = _make("NormMismatch")
NormNotOne = _make("NormNotOne")
ResolventExhausted = _make("ResolventExhausted")
IdentityViolated = _make("IdentityViolated")
NotInBaseField = _make("NotInBaseField")
CompatibilityFailed = _make("CompatibilityFailed")
RelationFailed = _make("RelationFailed")
DimensionDeficient = _make("DimensionDeficient")
SearchExhausted = _make("SearchExhausted")
PreconditionFailed = _make("PreconditionFailed")

# descent
XiAlreadyPresent = _make("XiAlreadyPresent")
IdentityFailed = _make("IdentityFailed")
AlbertConditionFailed = _make("AlbertConditionFailed")
NotCommuting = _make("NotCommuting")
ProjectorDegenerate = _make("ProjectorDegenerate")

# cochains
GroupMismatch = _make("GroupMismatch")
NotACocycle = _make("NotACocycle")
InvalidDefiningSystem = _make("InvalidDefiningSystem")
SignTableBroken = _make("SignTableBroken")
NotSurjective = _make("NotSurjective")
NotAHomomorphism = _make("NotAHomomorphism")

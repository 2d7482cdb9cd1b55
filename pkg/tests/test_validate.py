from __future__ import annotations

import pytest

from unipotent.base import GF, QQ, RationalFunctionField
from unipotent.errors import NotAField, Undecided
from unipotent.tower import ARTIN_SCHREIER, KUMMER, Tower
from unipotent.validate import GeneratorCertificate, validate_tower


def test_base_block_certified():
    T = Tower(QQ, 2).adjoin("ra", KUMMER, 2).adjoin("rb", KUMMER, -1).adjoin("rc", KUMMER, 5)
    cert = validate_tower(T)
    assert cert.degree == 8 and len(cert.entries) == 3


def test_as_simple_pole_certified():
    F = RationalFunctionField(GF(2))
    cert = validate_tower(Tower(F, 2).adjoin("ta", ARTIN_SCHREIER, 1 / F.t))
    assert cert.degree == 2


def test_square_radicand_rejected():
    with pytest.raises(NotAField) as exc:
        validate_tower(Tower(QQ, 2).adjoin("r", KUMMER, 4))
    assert "2" in str(exc.value.details.get("witness", exc.value))


def test_repeated_generator_rejected():
    T = Tower(QQ, 2).adjoin("ra", KUMMER, 2)
    with pytest.raises(NotAField):
        validate_tower(T.adjoin("rb", KUMMER, 2))
    T2 = T.adjoin("rb", KUMMER, T.gen(0))
    assert validate_tower(T2).degree == 4  # x^2 = sqrt2 is irreducible
    # (1+ra)^2: no specialization exists and the root is not a monomial
    with pytest.raises(Undecided):
        validate_tower(T.adjoin("rb", KUMMER, T.parse("3+2*ra")))
    T3 = T2.adjoin("rc", KUMMER, 8)  # after a non-base level; root 2*ra
    with pytest.raises(NotAField) as exc:
        validate_tower(T3)
    assert exc.value.details["witness"] == "2*ra"


def test_specialization_certificate_for_upper_level():
    F = RationalFunctionField(GF(7))
    T = Tower(F, 3).adjoin("ra", KUMMER, F.t)
    T = T.adjoin("rA", KUMMER, T.gen(0) + 1)
    cert = validate_tower(T)
    assert [e.method for e in cert.entries][-1] == "specialization"


def test_known_certificates_used():
    F = RationalFunctionField(GF(7))
    T = Tower(F, 3).adjoin("ra", KUMMER, F.t)
    T = T.adjoin("rA", KUMMER, T.gen(0) + 1)
    c = GeneratorCertificate("rA", "span-dimension", {"dimension": 4})
    assert validate_tower(T, known={"rA": c}).entries[-1] is c

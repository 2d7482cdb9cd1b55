from __future__ import annotations

from dataclasses import replace

import pytest

from unipotent.artin_schreier import (
    as_identities, heisenberg_as_build, heisenberg_restriction, u4_as_build, wstar_dimension_as,
)
from unipotent.base import GF, RationalFunctionField
from unipotent.errors import DimensionDeficient, PreconditionFailed, WrongCharacteristic
from unipotent.galois import commutator, enumerate_group
from unipotent.ratfunc import QQ

F2t = RationalFunctionField(GF(2))
t = F2t.t


def test_heisenberg():
    L, sa, sb, sA = heisenberg_as_build(F2t, 1 / t, 1 / (t + 1))
    assert L.degree == 8
    assert len(enumerate_group([sa, sb])) == 8
    tA = L.gen(2)
    assert commutator(sa, sb)(tA) == tA - 1
    assert sA(tA) == tA - 1
    with pytest.raises(PreconditionFailed):
        heisenberg_as_build(F2t, 1 / t, 1 / t)


def test_u4_p2(as_p2):
    assert as_p2.tower.degree == 64
    assert all(as_identities(as_p2).values())
    assert as_p2.sigma_a(as_p2.delta) - as_p2.delta == as_p2.C
    assert wstar_dimension_as(as_p2) == 4
    assert as_p2.certificate["u4"].group_order == 64
    assert as_p2.certificate["u4"].route == "enumeration"


def test_u4_p3(as_p3):
    assert all(as_p3.checks.values())
    assert wstar_dimension_as(as_p3) == 4
    cert = as_p3.certificate["u4"]
    assert cert.route == "counting" and cert.group_order == 729 and cert.presentation.central


def test_wstar_deficient(as_p2):
    with pytest.raises(DimensionDeficient):
        wstar_dimension_as(replace(as_p2, delta=as_p2.E.zero))
    with pytest.raises(DimensionDeficient):
        wstar_dimension_as(replace(as_p2, A=as_p2.E(as_p2.b)))


def test_preconditions():
    with pytest.raises(PreconditionFailed):
        u4_as_build(F2t, 1 / t, 1 / t + t ** 2 + t, t)
    with pytest.raises(WrongCharacteristic):
        u4_as_build(QQ, 1, 2, 3)


def test_restriction_to_heisenberg(as_p2):
    H, ra, rb = heisenberg_restriction(as_p2)
    assert len(enumerate_group([ra, rb])) == 8

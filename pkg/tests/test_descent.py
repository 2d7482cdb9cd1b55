from __future__ import annotations

from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from unipotent.base import GF, QQ, RationalFunctionField
from unipotent.catalog import get_record, parse_elements
from unipotent.descent import (
    albert_element, albert_witness, build_descent_context, build_twisted_tower,
    character_table, descend_fixed_field, invariant_element, lift_sigma0, phi_apply,
    twist_class_root, twist_exponent, verify_twist_relation,
)
from unipotent.errors import (
    AlbertConditionFailed, IdentityFailed, ProjectorDegenerate, Unsupported, WrongCharacteristic,
    XiAlreadyPresent,
)
from unipotent.galois import Automorphism
from unipotent.kummer import build_E
from unipotent.base import pth_root

F5t = RationalFunctionField(GF(5))
CTX = build_descent_context(F5t, 3)
F = CTX.F
t = F.t
z = F(CTX.F.K.gen)

small = st.builds(
    lambda n, c0, c1: (t ** n + z * c1 + c0) if n else F(z * c1 + c0 + 1),
    st.integers(0, 2), st.integers(0, 4), st.integers(0, 4)).filter(bool)


def test_context():
    assert (CTX.d, CTX.e, CTX.ell) == (2, 2, 2)
    assert CTX.F.descriptor() == "GF(5^2)(t)"
    assert twist_exponent(CTX) == -2  # l(1-e^d)/p = 2(1-4)/3
    with pytest.raises(XiAlreadyPresent):
        build_descent_context(QQ, 2)
    with pytest.raises(XiAlreadyPresent):
        build_descent_context(RationalFunctionField(GF(7)), 3)
    with pytest.raises(Unsupported):
        build_descent_context(QQ, 3)
    with pytest.raises(WrongCharacteristic):
        build_descent_context(RationalFunctionField(GF(3)), 3)


def test_trivial_context(kummer_f7t_p3):
    ctx = build_descent_context(RationalFunctionField(GF(7)), 3, allow_trivial=True)
    assert (ctx.d, ctx.ell) == (1, 1)
    x = ctx.F.t + 2
    assert phi_apply(x, ctx) == x
    tw, lift_E, lift_M, beta, rel = build_twisted_tower(kummer_f7t_p3, ctx)
    assert tw is kummer_f7t_p3 and lift_M.is_identity()


def test_phi_examples():
    assert phi_apply(F.one, CTX) == 1
    # x~ = [x * sigma_0^-1(x^2)]^2
    x = t + z
    assert phi_apply(x, CTX) == (x * CTX.sigma0(x ** 2, -1)) ** 2


@given(small, small)
def test_phi_multiplicative(x, y):
    assert phi_apply(x * y, CTX) == phi_apply(x, CTX) * phi_apply(y, CTX)


@given(small)
def test_albert_elements_keep_their_class(v):
    x = albert_element(v, CTX)
    assert pth_root(CTX.sigma0(x) / x ** CTX.e, 3) is not None
    beta = twist_class_root(x, CTX)
    assert phi_apply(x, CTX) == x * beta ** 3


@given(small)
def test_twist_relation(x):
    rel = verify_twist_relation(x, CTX)
    assert rel["exponent"] == -2
    assert rel["witness"] == CTX.sigma0(x ** -2)


def test_twist_relation_examples():
    rel = verify_twist_relation(t, CTX)
    assert rel["witness"] == 1 / t ** 2
    assert verify_twist_relation(F.one, CTX)["witness"] == 1
    with pytest.raises(IdentityFailed):
        twist_exponent(replace(CTX, e=3))
    with pytest.raises(IdentityFailed):
        verify_twist_relation(t + z, replace(CTX, e=3))


def test_albert_failure():
    with pytest.raises(AlbertConditionFailed):
        albert_witness(t + z, CTX)
    E = build_E(F, 3, t + z, t + z + 1)
    with pytest.raises(AlbertConditionFailed):
        lift_sigma0(E, CTX)


@pytest.fixture(scope="module")
def lifted_E():
    el = parse_elements(get_record("descent-f5t-p3"))
    E = build_E(F, 3, el["a"], el["c"])
    return E, lift_sigma0(E, CTX)


def test_lift_on_E(lifted_E):
    E, lift = lifted_E
    ra, rc = E.gens_elems()
    sa = Automorphism(E, [ra * E.xi, rc])
    sc = Automorphism(E, [ra, rc * E.xi])
    assert (lift ** 2).is_identity() and not lift.is_identity()
    # the Albert condition on a and c makes the lift commute with sigma_a, sigma_c
    assert lift * sa == sa * lift
    assert lift * sc == sc * lift


def test_fixed_field_and_degenerate_projector(lifted_E):
    E, lift = lifted_E
    us, comm = descend_fixed_field(lift, CTX, [])
    assert comm == {} and all(lift(u) == u for u in us)
    assert all(any(ex[k] for ex in u.coeffs()) for k, u in enumerate(us))
    with pytest.raises(ProjectorDegenerate):
        invariant_element(lift, CTX, 0, exponent=0)


def test_shipped_descent(descent_shipped):
    tr = descent_shipped
    tw = tr.twisted
    assert tr.ctx.as_json() == {"F0": "GF(5)(t)", "F": "GF(5^2)(t)", "p": 3, "d": 2, "e": 2,
                                "ell": 2}
    assert tw.tower.degree == 729
    assert tr.char_table == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert character_table(tw.tower, [tw.sigma_a, tw.sigma_b, tw.sigma_c]) == tr.char_table
    gens = [tw.sigma_a, tw.sigma_b, tw.sigma_c]
    assert all(tr.sigma0_M * g == g * tr.sigma0_M for g in gens)
    assert (tr.sigma0_M ** 2).is_identity()
    assert all(tr.sigma0_M(u) == u for u in tr.m0_generators)
    inst = tr.instance
    for n, x in (("a", inst.a), ("b", inst.b), ("c", inst.c)):
        assert phi_apply(x, tr.ctx) == x * tr.beta[n] ** 3
    el = parse_elements(get_record("descent-f5t-p3"))
    assert (inst.a, inst.b, inst.c) == (el["a"], el["b"], el["c"])

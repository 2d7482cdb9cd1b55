from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from unipotent.errors import GroupMismatch, InvalidDefiningSystem, NotACocycle, NotSurjective
from unipotent.galois import UnipotentMatrix
from unipotent.massey import (
    Cochain1, Cochain2, DefiningSystem, UnipotentRep, additivity_check, coboundary1, coboundary2,
    cup11, extract_chars, flip_signs, homomorphisms, is_coboundary, is_cocycle, massey_value,
    matrix_group_table, random_homomorphism, scalar_check, solve_defining_system,
    vanishing_witness,
)
from unipotent.pipeline import representation_of

Z2 = matrix_group_table(2, 2)
U4_2 = matrix_group_table(4, 2)
U3_3 = matrix_group_table(3, 3)


def test_group_tables():
    assert len(Z2) == 2 and len(U4_2) == 64 and len(U3_3) == 27
    assert len(matrix_group_table(4, 3)) == 729


def test_cup_over_z2():
    s = 1 - Z2.identity
    x = homomorphisms(Z2, 2, [1])
    assert x[s] == 1 and x[Z2.identity] == 0
    c = cup11(x, x)
    assert [[c(g, h) for h in range(2)] for g in range(2)] == \
        [[int(g == s and h == s) for h in range(2)] for g in range(2)]
    assert cup11(Cochain1.zero(Z2, 2), x).is_zero()


def test_z4_class_is_not_a_coboundary():
    x = homomorphisms(Z2, 2, [1])
    c = cup11(x, x)
    assert is_cocycle(c)
    assert is_coboundary(c) is None
    # exhaustive over all four maps Z/2 -> F_2
    assert all(coboundary1(Cochain1(Z2, 2, v)) != c for v in product(range(2), repeat=2))
    assert is_coboundary(Cochain2.zero(Z2, 2)).is_zero()


def test_not_a_cocycle():
    c = Cochain2.zero(U4_2, 2)
    c.rows[1][2] = 1
    with pytest.raises(NotACocycle):
        is_coboundary(c)


def test_group_mismatch():
    with pytest.raises(GroupMismatch):
        cup11(Cochain1.zero(Z2, 2), Cochain1.zero(U4_2, 2))


cochains64 = st.lists(st.integers(0, 1), min_size=64, max_size=64).map(
    lambda v: Cochain1(U4_2, 2, v))
cochains27 = st.lists(st.integers(0, 2), min_size=27, max_size=27).map(
    lambda v: Cochain1(U3_3, 3, v))


@given(st.one_of(cochains64, cochains27))
def test_dd_is_zero(a):
    assert all(not any(v) for block in coboundary2(coboundary1(a)) for v in block)


@given(st.one_of(cochains64, cochains27))
def test_is_coboundary_roundtrip(a):
    c = coboundary1(a)
    w = is_coboundary(c)
    assert w is not None and coboundary1(w) == c


@given(st.data())
def test_leibniz_for_homomorphisms(data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    x = random_homomorphism(U4_2, 2, rng)
    a = Cochain1(U4_2, 2, [rng.randrange(2) for _ in range(64)])
    # d(x u a)(g, h, k) = -x(g) da(h, k) when dx = 0, on all triples
    lhs = coboundary2(cup11(x, a))
    da = coboundary1(a)
    assert all(lhs[g][h][k] == (-x[g] * da(h, k)) % 2
               for g in range(64) for h in range(64) for k in range(64))


def _random_system(G, p, rng):
    while True:
        x, y, z = (random_homomorphism(G, p, rng) for _ in range(3))
        D = solve_defining_system(x, y, z)
        if D is not None:
            return D


def test_additivity_suite_50_cases():
    rng = random.Random(51)
    for _ in range(50):
        D = _random_system(U4_2, 2, rng)
        D2 = None
        while D2 is None:
            D2 = solve_defining_system(D.x, random_homomorphism(U4_2, 2, rng), D.z)
        assert additivity_check(D, D2)["ok"]


def test_scalar_suite_50_cases():
    rng = random.Random(52)
    for i in range(50):
        G, p = (U4_2, 2) if i % 2 else (U3_3, 3)
        D = _random_system(G, p, rng)
        lam = rng.randrange(p)
        assert scalar_check(D, lam)["ok"]
        if lam == 0:
            assert massey_value(DefiningSystem(D.x, 0 * D.y, D.z, 0 * D.a12,
                                               0 * D.a23)).is_zero()


def test_perturbing_a23_shifts_value():
    rng = random.Random(7)
    D = _random_system(U4_2, 2, rng)
    h = random_homomorphism(U4_2, 2, rng)
    D2 = DefiningSystem(D.x, D.y, D.z, D.a12, D.a23 + h)
    assert massey_value(D2) == massey_value(D) + cup11(D.x, h)


def test_zero_system_and_invalid():
    z = Cochain1.zero(U4_2, 2)
    assert massey_value(DefiningSystem(z, z, z, z, z)).is_zero()
    x = homomorphisms(U4_2, 2, [1, 0, 0])
    y = homomorphisms(U4_2, 2, [0, 1, 0])
    with pytest.raises(InvalidDefiningSystem):
        massey_value(DefiningSystem(x, y, z, z, z))


def test_trivial_representation():
    rho = UnipotentRep.trivial(U4_2, 4, 2)
    vw = vanishing_witness(rho)
    assert vw.witness.is_zero() and vw.system.a12.is_zero()
    with pytest.raises(NotSurjective):
        extract_chars(rho)


def test_heisenberg_image_not_surjective():
    H = matrix_group_table(3, 2)
    gens = [UnipotentMatrix.elementary(4, 2, 1, 2), UnipotentMatrix.elementary(4, 2, 2, 3)]
    rho = UnipotentRep.from_generators(H, gens)
    assert rho.image_size() == 8
    with pytest.raises(NotSurjective):
        extract_chars(rho)


def test_catalog_witnesses(as_p2, kummer_q_p2):
    for tr in (as_p2, kummer_q_p2):
        rho = representation_of(tr).rho
        for negated in (False, True):
            vw = vanishing_witness(rho, negated=negated)
            assert all(vw.checks.values())
            assert massey_value(vw.system) == coboundary1(vw.witness)
        D = flip_signs(vanishing_witness(rho, negated=True).system)
        assert D.check() and D.x == rho.entry(1, 2)
        ext = extract_chars(rho)
        assert ext.independent and all(ext.checks.values())


def test_matrix_group_representation_p3():
    G = matrix_group_table(4, 3)
    rho = UnipotentRep(G, list(G.elements), check=False)
    vw = vanishing_witness(rho)
    assert all(vw.checks.values())


def test_catalog_witnesses_p3(as_p3, kummer_f7t_p3):
    for tr in (as_p3, kummer_f7t_p3):
        rho = representation_of(tr).rho
        assert len(rho.G) == 729
        vw = vanishing_witness(rho)
        assert all(vw.checks.values())
        assert massey_value(vw.system) == coboundary1(vw.witness)

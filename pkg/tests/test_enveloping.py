import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacquet.enveloping import (
    NormalOrderedElement,
    chi,
    chi1,
    chi_lambda,
    engine,
    find_invariants,
    is_weyl_invariant,
    normal_order,
    validated_shift,
    weight_component,
    weight_decomposition,
)
from jacquet.liedata import CATALOG_NAMES, Weight, load_algebra
from jacquet.polykernel import CommutativePoly

from .oracles import naive_normal_order

E, Hh, Kk = 0, 1, 2  # sl2r Iwasawa indices


def test_FE_in_root_basis():
    root = engine("sl2r", "root")
    # root basis is E, H, F
    got = normal_order([2, 0], "sl2r", "root")
    assert got.terms == {(1, 0, 1): 1, (0, 1, 0): -1}
    assert naive_normal_order(root.algebra, [2, 0], "root") == got.terms


def test_single_letter():
    assert normal_order([Hh], "sl2r").terms == {(0, 1, 0): 1}


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_engine_matches_naive_rewriting(name):
    alg = load_algebra(name)
    rng = random.Random(7)
    for _ in range(25):
        w = [rng.randrange(alg.dim) for _ in range(rng.randint(0, 4))]
        assert normal_order(w, name).terms == naive_normal_order(alg, w)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=4), st.lists(st.integers(0, 2), max_size=4), st.lists(st.integers(0, 2), max_size=4))
def test_associativity_sl2r(u, v, w):
    eng = engine("sl2r")
    U, V, W = (NormalOrderedElement.from_word(eng, x) for x in (u, v, w))
    assert (U * V) * W == U * (V * W)
    assert (U * V) * W == NormalOrderedElement.from_word(eng, u + v + w)


def test_weight_component_examples():
    eng = engine("sl2r", "root")
    P = NormalOrderedElement.generator(eng, 1) + NormalOrderedElement.generator(eng, 0)
    assert weight_component(P, Weight([0])) == NormalOrderedElement.generator(eng, 1)
    assert weight_component(P, Weight([1])) == NormalOrderedElement.generator(eng, 0)
    Ha = NormalOrderedElement.generator(eng, 1) * NormalOrderedElement.generator(eng, 1)
    assert weight_component(Ha, Weight([2])).is_zero()


@st.composite
def root_elements(draw, name="sl3r", max_len=3):
    eng = engine(name, "root")
    total = NormalOrderedElement(eng)
    for _ in range(draw(st.integers(1, 3))):
        w = draw(st.lists(st.integers(0, eng.dim - 1), max_size=max_len))
        c = draw(st.integers(-3, 3))
        total = total + NormalOrderedElement.from_word(eng, w) * c
    return total


@settings(max_examples=100, deadline=None)
@given(root_elements(), root_elements())
def test_component_convolution(P, Q):
    PQ = P * Q
    dP, dQ = weight_decomposition(P), weight_decomposition(Q)
    weights = {a + b for a in dP for b in dQ} | set(weight_decomposition(PQ))
    for mu in weights:
        rhs = NormalOrderedElement(P.engine)
        for a, Pa in dP.items():
            if mu - a in dQ:
                rhs = rhs + Pa * dQ[mu - a]
        assert weight_component(PQ, mu) == rhs


def test_chi_of_casimir():
    eng = engine("sl2r")
    root = engine("sl2r", "root")
    # Omega = H^2 + 2H + 4FE in the root basis
    Om = (
        NormalOrderedElement.from_word(root, [1, 1])
        + NormalOrderedElement.generator(root, 1) * 2
        + NormalOrderedElement.from_word(root, [2, 0]) * 4
    )
    x = CommutativePoly.variable(1, 0)
    assert chi1(Om) == x * x - 2 * x
    assert chi(Om) == x * x - 1
    assert validated_shift("sl2r") == 1
    # anything ending in k projects to zero
    assert chi(NormalOrderedElement.from_word(eng, [E, Kk])).is_zero()
    assert chi(NormalOrderedElement.scalar(eng, 1)) == CommutativePoly.constant(1, 1)


def test_sl2r_invariants():
    zs = find_invariants("sl2r", 2)
    assert len(zs) == 2
    assert zs[0].degree() == 0
    x = CommutativePoly.variable(1, 0)
    assert chi1(zs[1]) == x * x - 2 * x
    eng = engine("sl2r")
    K = NormalOrderedElement.generator(eng, Kk)
    for z in zs:
        assert K.bracket(z).is_zero()
    assert find_invariants("sl2r", 0)[0].degree() == 0 and len(find_invariants("sl2r", 0)) == 1


@pytest.mark.parametrize("name, degree", [("sl2r", 2), ("sl3r", 3), ("sp4r", 4), ("sl2c", 2)])
def test_invariants_are_weyl_invariant(name, degree):
    alg = load_algebra(name)
    for z in find_invariants(name, degree):
        assert is_weyl_invariant(chi(z), alg)


def test_sl3r_invariants_independent():
    # Jacobian of the degree 2 and 3 chi-images has rank 2 at a rational point
    import sympy

    zs = [z for z in find_invariants("sl3r", 3) if z.degree() in (2, 3)]
    h1, h2 = sympy.symbols("h1 h2")
    exprs = []
    for z in zs:
        p = chi(z)
        exprs.append(sum(sympy.Rational(c.numerator, c.denominator) * h1 ** e[0] * h2 ** e[1] for e, c in p.terms.items()))
    J = sympy.Matrix([[sympy.diff(e, v) for v in (h1, h2)] for e in exprs])
    assert J.subs({h1: sympy.Rational(3, 7), h2: sympy.Rational(-5, 11)}).rank() == 2
    assert sorted(z.degree() for z in zs) == [2, 3]


def test_kernel_of_chi_lambda_in_2P():
    # z - chi_lambda(z) has weight components only in 2P
    lam = Weight([F(5, 2), F(7, 3)])
    for z in find_invariants("sl3r", 3):
        root = engine("sl3r", "root")
        from jacquet.enveloping import convert

        zr = convert(z, root)
        for mu in weight_decomposition(zr):
            assert mu.in_lattice("2P")
        assert isinstance(chi_lambda(z, lam), F)


def test_json_tagged_with_basis_version():
    eng = engine("sl2r")
    d = NormalOrderedElement.from_word(eng, [Kk, E]).to_json()
    assert d["basis"] == "iwasawa" and "basis_order_version" in d

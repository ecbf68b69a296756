from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacquet.completion import (
    TruncatedSeries,
    identity_matrix,
    matrix_multiply,
    series_component,
    series_component_line,
    series_derivative,
    series_invert,
    series_multiply,
)
from jacquet.enveloping import normal_order
from jacquet.errors import NotInvertibleError, TruncationError
from jacquet.liedata import Weight, load_algebra

SL2 = load_algebra("sl2r")
SL3 = load_algebra("sl3r")


def s(terms, K=6, alg=SL2, lattice="P"):
    return TruncatedSeries(alg, K, terms, lattice)


def pure(coeffs, K=6):
    """sl2r series sum c_k E^k."""
    return s({(k, 0, 0): c for k, c in coeffs.items()}, K)


def test_F_crosses_E():
    F_ = s({(0, 0, 1): 1}, 4)
    E_ = s({(1, 0, 0): 1}, 4)
    got = series_multiply(F_, E_)
    assert got.terms == normal_order([2, 0], "sl2r", "root").terms
    assert got.terms == {(1, 0, 1): 1, (0, 1, 0): -1}


def test_H_crosses_E_squared():
    got = series_multiply(s({(0, 1, 0): 1}), pure({2: 1}))
    assert got.terms == {(2, 1, 0): 1, (2, 0, 0): 4}


def test_identity_and_K_mismatch():
    f = pure({0: 1, 1: 3, 4: F(1, 2)})
    assert series_multiply(TruncatedSeries.one(SL2, 6), f) == f
    with pytest.raises(TruncationError):
        f + pure({1: 1}, K=5)


def test_geometric_series():
    S = [[pure({0: 1, 1: -1}, 5)]]
    (inv,) = series_invert([[1 - (1 - S[0][0])]])
    assert inv[0].terms == {(k, 0, 0): 1 for k in range(6)}
    prod = series_multiply(S[0][0], inv[0])
    assert prod == TruncatedSeries.one(SL2, 5)


def test_invert_identity_and_rejects_bad_input():
    I = identity_matrix(SL2, 2, 4)
    assert series_invert(I) == I
    with pytest.raises(NotInvertibleError):
        series_invert([[pure({0: 2}, 4)]])


def test_components():
    f = pure({0: 1, 1: 1, 2: 1})
    assert series_component(f, Weight([2])) == pure({2: 1})
    assert series_component(f, Weight([7])).is_zero()
    # beta(H) = 2: the line z = 4 picks the weight 2 beta part
    assert series_component_line(f, [1], 4) == pure({2: 1})


def test_derivatives():
    d = series_derivative(pure({2: 1}), (1,))
    assert d.terms == pure({1: 2}).terms and d.K == 5
    assert series_derivative(pure({0: 1}), (1,)).is_zero()
    K = 6
    f = pure({k: 1 for k in range(K + 1)}, K)
    d = series_derivative(f, (2,))
    assert d.terms == {(k, 0, 0): (k + 2) * (k + 1) for k in range(K - 1)}


def test_json_round_trip():
    f = s({(2, 1, 0): F(-3, 4), (0, 0, 1): 2}, 5)
    assert TruncatedSeries.from_json(SL2, f.to_json()) == f
    assert f.to_json()["terms"][0][-2:] in ([2, 1], [-3, 4])


def test_lattice_tag_enforced():
    with pytest.raises(ValueError):
        s({(1, 0, 0): 1}, lattice="2P")


# --- property suites ------------------------------------------------------

coef = st.integers(-3, 3)


@st.composite
def sl3_pure(draw, K=4, positive=False):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        m = (draw(st.integers(0, 2)), draw(st.integers(0, 2)), draw(st.integers(0, 1)))
        if positive and not any(m):
            continue
        terms[m + (0,) * (SL3.dim - 3)] = draw(coef)
    return TruncatedSeries(SL3, K, terms)


@st.composite
def sl3_mixed(draw, K=4):
    f = draw(sl3_pure(K))
    terms = dict(f.terms)
    if draw(st.booleans()):
        # one tail letter (an a- or theta(n)-vector)
        idx = draw(st.integers(SL3.n_dim, SL3.dim - 1))
        m = [0] * SL3.dim
        m[idx] = 1
        terms[tuple(m)] = draw(coef)
    return TruncatedSeries(SL3, K, terms)


@settings(max_examples=100, deadline=None)
@given(sl3_pure(), sl3_pure(), sl3_pure())
def test_associativity(f, g, h):
    assert series_multiply(series_multiply(f, g), h) == series_multiply(f, series_multiply(g, h))


@settings(max_examples=100, deadline=None)
@given(sl3_mixed(K=6), sl3_pure(K=6))
def test_truncation_coherence(f, g):
    K = 4
    big = series_multiply(f, g)
    small = series_multiply(f.truncate(K), g.truncate(K))
    assert big.truncate(small.K) == small


@settings(max_examples=100, deadline=None)
@given(sl3_mixed(), sl3_pure())
def test_product_convolution(f, g):
    fg = series_multiply(f, g)
    from jacquet.completion import series_weights

    for mu in set(series_weights(fg)) | {a + b for a in series_weights(f) for b in series_weights(g)}:
        rhs = TruncatedSeries.zero(SL3, fg.K)
        for a in series_weights(f):
            for b in series_weights(g):
                if a + b == mu:
                    rhs = rhs + series_multiply(series_component(f, a), series_component(g, b)).truncate(fg.K)
        assert series_component(fg, mu) == rhs


@settings(max_examples=100, deadline=None)
@given(st.lists(sl3_pure(positive=True), min_size=4, max_size=4))
def test_invert_two_sided(entries):
    S = [[entries[0] + 1, entries[1]], [entries[2], entries[3] + 1]]
    R = series_invert(S)
    I = identity_matrix(SL3, 2, 4)
    assert matrix_multiply(S, R) == I
    assert matrix_multiply(R, S) == I


@settings(max_examples=100, deadline=None)
@given(sl3_pure(), sl3_pure())
def test_leibniz(f, g):
    for n in [(1, 0, 0), (0, 1, 0)]:
        n_full = n
        lhs = series_derivative(series_multiply(f, g), n_full)
        a = series_multiply(series_derivative(f, n_full), g.truncate(lhs.K))
        b = series_multiply(f.truncate(lhs.K), series_derivative(g, n_full))
        if _commutative_prefix(f, g):
            assert lhs == a + b


def _commutative_prefix(f, g):
    # E1 and E2 do not commute in sl3r; Leibniz in this form holds for pure
    # series in the abelian directions, so restrict to series in E1, E3 only
    return all(m[1] == 0 for m in list(f.terms) + list(g.terms))


def test_lattice_closure():
    f = TruncatedSeries(SL3, 4, {(2, 0, 0) + (0,) * 5: 1}, "2P")
    g = TruncatedSeries(SL3, 4, {(0, 2, 0) + (0,) * 5: 3}, "2P")
    assert series_multiply(f, g).lattice == "2P"

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyinv.multipoly import (
    DimensionError,
    DivisionError,
    Poly,
    add,
    compose,
    degree,
    mi_factorial,
    mul,
    multi_indices,
    parse_poly,
    partial,
    unit,
    variables,
)

P2 = lambda s: parse_poly(s, 2)  # noqa: E731
P3 = lambda s: parse_poly(s, 3)  # noqa: E731


def test_add_examples():
    assert add(P2("X1"), P2("-X1")).is_zero()
    assert add(P2("X1*X2 + 1"), P2("X1*X2")) == P2("2*X1*X2 + 1")
    assert add(P2("1/2*X1^2"), P2("1/3*X1^2")) == Poly.monomial((2, 0), Fraction(5, 6))


def test_mul_examples():
    assert mul(P2("X1 + X2"), P2("X1 - X2")) == P2("X1^2 - X2^2")
    assert mul(Poly.zero(2), P2("X1 + 7")).is_zero()
    # hand expansion: (2 X2)(2 X3) = 4 X2 X3
    assert mul(P3("2*X2"), P3("2*X3")) == Poly.monomial((0, 1, 1), 4)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        add(P2("X1"), P3("X1"))
    with pytest.raises(DimensionError):
        mul(P2("X1"), P3("X1"))
    with pytest.raises(DimensionError):
        compose(P2("X1"), [P2("X1")])


def test_partial_examples():
    assert partial(P2("X2^2"), 1) == P2("2*X2")
    assert partial(P2("X2^3"), 0).is_zero()
    # hand differentiation of the first component of van den Essen's H, by X4
    H1 = parse_poly("3*X4^2*X2 - 2*X3*X4*X5", 5)
    assert partial(H1, 3) == parse_poly("6*X4*X2 - 2*X3*X5", 5)
    with pytest.raises(IndexError):
        partial(P2("X1"), 2)


def test_compose_examples():
    assert compose(parse_poly("X1^2", 1), [parse_poly("X1 + 1", 1)]) == parse_poly("X1^2 + 2*X1 + 1", 1)
    p = P3("X1*X2^2 - 3*X3 + 1/2")
    assert compose(p, variables(3)) == p
    # (X2 + X3^2)^2 = X2^2 + 2 X2 X3^2 + X3^4; only X3^4 exceeds degree 3
    got = compose(P3("X2^2"), [P3("X1"), P3("X2 + X3^2"), P3("X3")], truncation=3)
    assert got == P3("X2^2 + 2*X2*X3^2")


def test_compose_into_other_dimension():
    p = P2("X1*X2")
    assert compose(p, [parse_poly("X1 + X3", 3), parse_poly("X2", 3)]) == parse_poly("X1*X2 + X2*X3", 3)


def test_degree_examples():
    assert degree(Poly.zero(3)) == 0
    assert degree(P3("X1*X2^2 + X3")) == 3
    assert degree(P3("X1 + X2^2 + 2*X2*X3^2 + X3^4 + X3^2")) == 4


def test_render_is_graded_lex():
    p = P3("X3^2 + X1 + 2*X2*X3^2 + X3^4 - 1/2")
    assert p.render() == "1/1 * X3^4 + 2/1 * X2^1*X3^2 + 1/1 * X3^2 + 1/1 * X1^1 + -1/2"
    assert Poly.zero(2).render() == "0"


def test_multi_index_helpers():
    assert mi_factorial((3, 0, 2)) == 12
    assert unit(3, 1) == (0, 1, 0)
    assert len(multi_indices(3, 4)) == 15


def test_exact_division():
    a, b = P2("X1^2 - X2^2"), P2("X1 + X2")
    assert a.exact_div(b) == P2("X1 - X2")
    with pytest.raises(DivisionError):
        P2("X1^2 + 1").exact_div(P2("X1 + X2"))


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_poly("X1^^2", 2)
    with pytest.raises(ValueError):
        parse_poly("X3", 2)


# --- properties ----------------------------------------------------------

coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def polys(n):
    keys = st.tuples(*[st.integers(0, 2)] * n)
    return st.dictionaries(keys, coeffs, max_size=4).map(lambda d: Poly(n, d))


@given(polys(2), polys(2), polys(2))
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.zero(2)


@given(polys(3), polys(3), st.integers(0, 2))
def test_leibniz(a, b, j):
    assert partial(a * b, j) == partial(a, j) * b + a * partial(b, j)


@settings(max_examples=40)
@given(polys(2), st.lists(polys(2), min_size=2, max_size=2), st.lists(polys(2), min_size=2, max_size=2))
def test_compose_associative(p, g, h):
    left = compose(compose(p, g), h)
    right = compose(p, [compose(gi, h) for gi in g])
    assert left == right
    assert compose(p, variables(2)) == p


@given(polys(3), polys(3))
def test_degree_multiplicative(a, b):
    if a and b:
        assert degree(a * b) == degree(a) + degree(b)


@given(polys(2), polys(2), st.integers(0, 4))
def test_truncated_product_is_truncation_of_product(a, b, D):
    assert a.mul_truncated(b, D) == (a * b).truncate(D)

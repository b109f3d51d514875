from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import hpart
from polyinv.corpus import GeneratorSpec, generate_dense, generate_triangular
from polyinv.inversion import (
    InversionError,
    degree_bound_report,
    g_coefficient_full,
    g_coefficient_truncated,
    invert_fixed_point,
    invert_strongly_nilpotent,
    invert_via_trees,
    verify_inverse,
)
from polyinv.multipoly import multi_indices_upto, parse_poly
from polyinv.nilpotency import strong_index
from polyinv.polymap import PolyMap, map_compose


def test_fixed_point_square(square):
    inv = invert_fixed_point(square, 4)
    assert inv.components == (parse_poly("X1 + X2^2", 2), parse_poly("X2", 2))
    assert verify_inverse(square, inv.as_map()) == (True, True)


def test_fixed_point_tri3(tri3):
    inv = invert_fixed_point(tri3, 8)
    assert inv.components[0] == parse_poly("X1 + X2^2 + X3^2 + 2*X2*X3^2 + X3^4", 3)
    assert inv.components[1] == parse_poly("X2 + X3^2", 3)
    assert inv.degree() == 4


def test_fixed_point_zero():
    H = hpart(2, "0", "0")
    inv = invert_fixed_point(H, 3)
    assert inv.as_map() == PolyMap.identity(2)


def test_truncated_series_is_a_right_inverse_up_to_degree():
    # X1 - X1^2 is not invertible; its series still inverts it modulo degree D + 1
    H = hpart(1, "X1^2")
    D = 5
    inv = invert_fixed_point(H, D)
    assert inv.components[0] == parse_poly("X1 + X1^2 + 2*X1^3 + 5*X1^4 + 14*X1^5", 1)
    comp = map_compose(H.as_map(), inv.as_map(), truncation=D)
    assert comp == PolyMap.identity(1)
    assert verify_inverse(H, inv.as_map()) == (False, False)


def test_g_coefficient_tri3(tri3):
    # plain coefficient of X2 X3^2 in G_1 is 2, alpha! = 2
    assert g_coefficient_full(tri3, 0, (0, 1, 2)) == 4
    assert invert_fixed_point(tri3, 4).g_coefficient(0, (0, 1, 2)) == 4


def test_degree_two_coefficients_are_those_of_h():
    H = hpart(3, "X1*X2 - 1/2*X3^2", "X1^2 + 2*X2*X3", "X2^2")
    for alpha in multi_indices_upto(3, 2, 2):
        for i in range(3):
            fact = 2 if 2 in alpha else 1
            assert g_coefficient_full(H, i, alpha) == H[i].coeff(alpha) * fact


def test_truncated_p1_is_zero(tri3):
    for alpha in multi_indices_upto(3, 2, 4):
        assert g_coefficient_truncated(tri3, 1, 0, alpha) == 0
    with pytest.raises(ValueError):
        g_coefficient_truncated(tri3, 0, 0, (2, 0, 0))


def test_truncated_large_p_is_full():
    H = generate_dense(2, 3, 11)
    memo_full, memo_cut = {}, {}
    for alpha in multi_indices_upto(2, 2, 5):
        for i in range(2):
            assert g_coefficient_truncated(H, 99, i, alpha, memo_cut) == g_coefficient_full(H, i, alpha, memo_full)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 3))
def test_trees_agree_with_fixed_point(seed, d):
    H = generate_dense(2, d, seed)
    assert invert_via_trees(H, 5) == invert_fixed_point(H, 5)


def test_strongly_nilpotent_certificates(square, tri3):
    inv, cert = invert_strongly_nilpotent(square, "square")
    assert cert.strong_bound == 2 and cert.inverse_degree == 2
    inv, cert = invert_strongly_nilpotent(tri3, "tri3")
    assert (cert.strong_index, cert.strong_bound, cert.inverse_degree) == (3, 4, 4)
    assert cert.proven_bounds_hold
    assert cert.to_dict()["verified"] is True
    assert "deg F^-1" in cert.render()


def test_not_strongly_nilpotent_raises():
    with pytest.raises(InversionError):
        invert_strongly_nilpotent(hpart(2, "X1^2", "0"))


def test_degree_bound_report_zero():
    cert = degree_bound_report(hpart(2, "0", "0"))
    assert (cert.weak_index, cert.strong_index, cert.inverse_degree) == (1, 1, 1)
    assert cert.proven_bounds_hold


def test_degree_bound_report_van_den_essen(vde_plus):
    cert = degree_bound_report(-vde_plus, "vde")
    assert (cert.weak_index, cert.strong_index) == (3, 4)
    assert cert.inverse_degree == 13
    assert cert.weak_holds is False
    assert cert.classical_holds and cert.strong_holds
    assert cert.proven_bounds_hold


@pytest.mark.parametrize("seed", range(6))
def test_series_vanishes_beyond_strong_bound(seed):
    H = generate_triangular(GeneratorSpec(3, 2, seed, conjugate=True))
    p = strong_index(H)
    D = H.map_degree() ** (p - 1)
    memo: dict = {}
    for alpha in multi_indices_upto(3, D + 1, D + 2):
        for i in range(3):
            assert g_coefficient_full(H, i, alpha, memo) == 0


@pytest.mark.parametrize("seed", range(4))
def test_composition_identity(seed):
    H = generate_triangular(GeneratorSpec(3, 3, seed, conjugate=True))
    inv, cert = invert_strongly_nilpotent(H)
    F = H.as_map()
    assert map_compose(F, inv) == PolyMap.identity(3)
    assert map_compose(inv, F) == PolyMap.identity(3)


def test_invert_via_trees_rejects_small_cap(square):
    with pytest.raises(ValueError):
        invert_via_trees(square, 1)


def test_inverse_series_coefficient_is_factorial_scaled():
    H = hpart(1, "1/2*X1^2")
    inv = invert_fixed_point(H, 3)
    # X + 1/2 X^2 + 1/2 X^3 + ...
    assert inv.components[0].coeff((3,)) == Fraction(1, 2)
    assert inv.g_coefficient(0, (3,)) == 3

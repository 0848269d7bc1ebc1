import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pkmoduli.errors import BaseMismatchError, NonUnimodularError
from pkmoduli.jspace import (
    J0,
    J_to_uhp,
    LinearComplexStructure,
    TangentAtJ,
    complex_structure_J,
    inner_J,
    kahler_at_J,
    lemma_dotJ_check,
    metric_gJ,
    mobius,
    omega_J,
    sl2_act_J,
    sl2_act_tangent,
    uhp_tangent,
    uhp_to_J,
    uhp_to_J_partials,
)
from strategies import angles, sl2, unit, xs, ys

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])


def tangent_at(J, a, b):
    """Projection of a generic matrix onto the tangent space at J."""
    M = np.array([[a, b], [b - a, -a + 0.5 * b]])
    return TangentAtJ(J, 0.5 * (M + J.m @ M @ J.m))


def test_metric_at_J0_is_euclidean():
    assert metric_gJ(LinearComplexStructure(J0), E1, E1) == 1.0
    assert metric_gJ(LinearComplexStructure(J0), E1, E2) == 0.0


def test_metric_at_1_plus_i():
    J = uhp_to_J(1 + 1j)
    assert np.allclose(J.m @ E1, [1.0, 1.0])
    assert metric_gJ(J, E1, E1) == pytest.approx(1.0)


@given(xs, ys, unit, unit, unit, unit)
def test_metric_is_J_compatible(x, y, a, b, c, d):
    J = uhp_to_J(complex(x, y))
    v, w = np.array([a, b]), np.array([c, d])
    assert metric_gJ(J, J.m @ v, J.m @ w) == pytest.approx(metric_gJ(J, v, w), abs=1e-10)
    assert metric_gJ(J, v, w) == pytest.approx(metric_gJ(J, w, v), abs=1e-10)


@pytest.mark.parametrize(
    "z, expected",
    [(1j, J0), (1 + 1j, [[1.0, -2.0], [1.0, -1.0]]), (2j, [[0.0, -2.0], [0.5, 0.0]])],
)
def test_uhp_to_J_values(z, expected):
    assert np.allclose(uhp_to_J(z).m, expected, atol=1e-15)


@pytest.mark.parametrize("z", [1.0, 1 - 2j, 0j])
def test_uhp_to_J_rejects_lower_half_plane(z):
    with pytest.raises(ValueError):
        uhp_to_J(z)


@given(xs, ys)
def test_uhp_to_J_squares_to_minus_one(x, y):
    J = uhp_to_J(complex(x, y)).m
    assert np.max(np.abs(J @ J + np.eye(2))) < 1e-12 * max(1.0, np.max(np.abs(J))) ** 2
    assert J_to_uhp(uhp_to_J(complex(x, y))) == pytest.approx(complex(x, y))


@given(sl2(), xs, ys)
def test_j_intertwines_mobius_and_conjugation(A, x, y):
    z = complex(x, y)
    lhs = uhp_to_J(mobius(A, z)).m
    rhs = sl2_act_J(A, uhp_to_J(z)).m
    assert np.max(np.abs(lhs - rhs)) < 1e-9 * max(1.0, np.max(np.abs(rhs)))


@given(xs, ys)
def test_partials_match_finite_differences(x, y):
    h = 1e-6
    z = complex(x, y)
    dx, dy = uhp_to_J_partials(z)
    fdx = (uhp_to_J(z + h).m - uhp_to_J(z - h).m) / (2 * h)
    fdy = (uhp_to_J(z + 1j * h).m - uhp_to_J(z - 1j * h).m) / (2 * h)
    assert np.allclose(dx, fdx, atol=1e-6 / y**2)
    assert np.allclose(dy, fdy, atol=1e-6 / y**3)


def test_kahler_at_J0_example():
    J = LinearComplexStructure(J0)
    t = TangentAtJ(J, np.diag([1.0, -1.0]))
    inner, omega, image = kahler_at_J(J, t, t)
    assert inner == 1.0
    assert omega == 0.0
    assert np.allclose(image.m, -J0 @ np.diag([1.0, -1.0]))


@given(xs, ys, unit, unit, unit, unit)
def test_complex_structure_on_tangents(x, y, a, b, c, d):
    J = uhp_to_J(complex(x, y))
    t, s = tangent_at(J, a, b), tangent_at(J, c, d)
    It = complex_structure_J(t)
    assert np.allclose(complex_structure_J(It).m, -t.m, atol=1e-10 * max(1.0, np.max(np.abs(J.m))) ** 2)
    assert inner_J(It, complex_structure_J(s)) == pytest.approx(inner_J(t, s), rel=1e-9, abs=1e-9)
    # omega(a, b) = <a, I b>, the same convention as omega = g(., I .) on the moduli space
    assert omega_J(t, s) == pytest.approx(inner_J(t, complex_structure_J(s)), rel=1e-9, abs=1e-9)
    assert omega_J(t, s) == pytest.approx(-omega_J(s, t), rel=1e-9, abs=1e-9)


@given(xs, ys)
def test_omega_pulls_back_to_minus_area_form(x, y):
    z = complex(x, y)
    ox = omega_J(uhp_tangent(z, 1.0), uhp_tangent(z, 1j))
    assert ox == pytest.approx(-1.0 / y**2, rel=1e-10)


@given(xs, ys, st.floats(-2, 2), st.floats(-2, 2))
def test_j_pulls_back_the_hyperbolic_metric(x, y, a, b):
    """Finite-difference pushforward of j, independent of the closed-form partials."""
    z, zd, h = complex(x, y), complex(a, b), 1e-6
    Jd = (uhp_to_J(z + h * zd).m - uhp_to_J(z - h * zd).m) / (2 * h)
    J = uhp_to_J(z)
    # strip the O(h^2) part of the difference quotient that leaves the tangent space
    t = TangentAtJ(J, 0.5 * (Jd + J.m @ Jd @ J.m))
    expected = (a * a + b * b) / y**2
    assert inner_J(t, t) == pytest.approx(expected, rel=1e-7, abs=1e-9)


def test_dotJ_lemma_example():
    J = LinearComplexStructure(J0)
    a = TangentAtJ(J, np.diag([1.0, -1.0]))
    b = TangentAtJ(J, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(a.m @ b.m, -J0)
    product, triple, twisted = lemma_dotJ_check(J, a, b, a)
    assert product == 0.0 and triple == 0.0 and twisted == 0.0


@given(xs, ys, st.lists(unit, min_size=6, max_size=6))
def test_dotJ_lemma_random(x, y, c):
    J = uhp_to_J(complex(x, y))
    ts = [tangent_at(J, c[2 * k], c[2 * k + 1]) for k in range(3)]
    scale = max(1.0, *(np.max(np.abs(t.m)) for t in ts)) ** 3 * max(1.0, np.max(np.abs(J.m)))
    assert max(lemma_dotJ_check(J, *ts)) < 1e-12 * scale


def test_sl2_identity_and_diagonal():
    J = LinearComplexStructure(J0)
    assert np.array_equal(sl2_act_J(np.eye(2), J).m, J0)
    lam = 1.7
    out = sl2_act_J(np.diag([lam, 1 / lam]), J).m
    assert np.allclose(out, [[0.0, -lam**2], [1 / lam**2, 0.0]])


def test_non_unimodular_rejected():
    with pytest.raises(NonUnimodularError):
        sl2_act_J(np.diag([2.0, 1.0]), LinearComplexStructure(J0))


@given(sl2(), xs, ys, angles, angles)
def test_action_preserves_inner_product(A, x, y, t1, t2):
    z = complex(x, y)
    a, b = uhp_tangent(z, np.exp(1j * t1)), uhp_tangent(z, 2 * np.exp(1j * t2))
    Aa, Ab = sl2_act_tangent(A, a), sl2_act_tangent(A, b)
    assert inner_J(Aa, Ab) == pytest.approx(inner_J(a, b), rel=1e-9, abs=1e-9)
    assert omega_J(Aa, Ab) == pytest.approx(omega_J(a, b), rel=1e-9, abs=1e-9)


def test_base_mismatch():
    a = uhp_tangent(1j, 1.0)
    b = uhp_tangent(2j, 1.0)
    with pytest.raises(BaseMismatchError):
        inner_J(a, b)


@pytest.mark.parametrize(
    "m", [np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]), np.array([[0.0, -2.0], [1.0, 0.0]])]
)
def test_invalid_structures_rejected(m):
    with pytest.raises(ValueError):
        LinearComplexStructure(m)


def test_tangent_must_anticommute():
    with pytest.raises(ValueError):
        TangentAtJ(LinearComplexStructure(J0), np.eye(2))

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from zspec import numerics
from zspec.polyalg import ComplexPolynomial


def test_gaussian_integrals_in_the_plane():
    rule = numerics.gaussian_rule(2, 1.0, 8)
    X = rule.nodes
    assert_allclose(rule.integrate(np.ones(len(X))), math.pi, rtol=1e-14)
    assert_allclose(rule.integrate(np.sum(X ** 2, axis=1)), math.pi, rtol=1e-14)
    assert abs(rule.integrate(X[:, 0])) < 1e-15


def test_second_moment_matches_1d_formula():
    # int x^2 e^{-lam x^2} dx = sqrt(pi) / (2 lam^{3/2})
    lam = 2.5
    assert_allclose(numerics.gaussian_moment(2, lam), math.sqrt(math.pi) / (2 * lam ** 1.5), rtol=1e-14)
    assert numerics.gaussian_moment(3, lam) == 0


@pytest.mark.parametrize("R", [0.5, 1.0, 2.3])
def test_sphere_rule(R):
    rule = numerics.sphere_rule(R, 10)
    V = rule.nodes
    assert_allclose(rule.integrate(np.ones(len(V))), 4 * math.pi * R ** 2, rtol=1e-14)
    assert abs(rule.integrate(V[:, 2])) < 1e-13
    assert_allclose(rule.integrate(V[:, 2] ** 2), 4 * math.pi * R ** 4 / 3, rtol=1e-13)


@pytest.mark.parametrize("k,lam", [(2, 1.0), (4, 0.5), (6, 2.0)])
def test_weighted_normalization(k, lam):
    one = ComplexPolynomial.constant(1.0, k)
    assert_allclose(numerics.poly_inner(one, one, lam), (math.pi / lam) ** (k / 2), rtol=1e-14)


def test_weighted_products_of_z():
    lam = 1.7
    z = ComplexPolynomial.linear([1, 1j])
    assert abs(numerics.poly_inner(z, z.conj(), lam)) < 1e-15
    assert_allclose(numerics.poly_inner(z, z, lam), math.pi / lam ** 2, rtol=1e-14)
    # same answer by quadrature
    rule = numerics.gaussian_rule(2, lam, 6)
    assert_allclose(numerics.inner_product(z, z, rule), math.pi / lam ** 2, rtol=1e-13)


def test_exact_moments_against_quadrature():
    P = ComplexPolynomial({(3, 1, 0): 1.0 - 2j, (0, 2, 2): 0.5, (1, 0, 0): 3.0}, 3)
    Q = ComplexPolynomial({(1, 1, 0): 1.0, (0, 0, 2): -1j}, 3)
    rule = numerics.gaussian_rule(3, 0.6, 12)
    assert_allclose(numerics.inner_product(P, Q, rule), numerics.poly_inner(P, Q, 0.6), rtol=1e-12)


def test_order_doubling_is_stable():
    P = ComplexPolynomial({(4, 2): 1.0, (0, 6): 0.25}, 2)
    a = numerics.inner_product(P, P, numerics.gaussian_rule(2, 1.0, 12))
    b = numerics.inner_product(P, P, numerics.gaussian_rule(2, 1.0, 24))
    assert abs(a - b) < 1e-8 * abs(a)


def test_flat_rule_with_center():
    lam = 1.3
    c = np.array([0.4, -0.9])
    rule = numerics.flat_rule(2, lam, 20, c)
    vals = np.exp(-lam * np.sum((rule.nodes - c) ** 2, axis=1))
    assert_allclose(rule.integrate(vals), math.pi / lam, rtol=1e-13)


def test_gaussian_integral_closed_form():
    A = np.array([[2.0, 0.3], [0.3, 1.0]])
    b = np.array([0.5, -0.2])
    rule = numerics.flat_rule(2, 1.0, 40)
    X = rule.nodes
    vals = np.exp(-np.einsum("ni,ij,nj->n", X, A, X) + X @ b)
    assert_allclose(numerics.gaussian_integral(A, b), rule.integrate(vals), rtol=1e-10)


def test_compensated_sum_ordering():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(5000) * 10.0 ** rng.integers(-8, 8, 5000)
    a = numerics.compensated_sum(v)
    b = numerics.compensated_sum(v[rng.permutation(len(v))])
    assert abs(a - b) <= 1e-14 * np.abs(v).sum()


def test_budget_limits():
    with pytest.raises(ValueError):
        numerics.gaussian_rule(2, 1.0, numerics.MAX_DEGREE + 10)
    with pytest.raises(ValueError):
        numerics.gaussian_rule(numerics.MAX_DIM + 2, 1.0, 4)


def test_quad_order_environment(monkeypatch):
    monkeypatch.setenv("ZSPEC_QUAD_ORDER", "17")
    assert numerics.default_order(8) == 17
    monkeypatch.delenv("ZSPEC_QUAD_ORDER")
    assert numerics.default_order(8) == 8

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from zspec.hgroup import build_htype, j_of
from zspec.polyalg import (ComplexPolynomial, derivation, dv_apply, harmonic_project,
                           harmonic_project_oracle, homogeneous_monomials, laplacian_x, theta)

S2 = build_htype(1, 1, 0)
S4 = build_htype(3, 1, 0)

coef = st.tuples(st.floats(-2, 2, allow_nan=False), st.floats(-2, 2, allow_nan=False))


@st.composite
def homogeneous(draw, k=4, max_degree=5):
    n = draw(st.integers(0, max_degree))
    monos = homogeneous_monomials(n, k)
    picks = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=6, unique=True))
    terms = {}
    for e in picks:
        re, im = draw(coef)
        terms[e] = complex(re, im)
    P = ComplexPolynomial(terms, k)
    if P.is_zero():
        P = ComplexPolynomial({monos[0]: 1.0}, k)
    return P


def fd_derivation(A, P, X, h=1e-5):
    """Directional derivative of P along A X by central differences."""
    d = X @ A.T
    return (P(X + h * d) - P(X - h * d)) / (2 * h)


def test_theta_two_dimensional():
    th = theta([1.0, 0.0], [1.0], S2)
    assert th.allclose(ComplexPolynomial.linear([1, 1j]))


@pytest.mark.parametrize("space", [S2, S4, build_htype(3, 1, 1)])
def test_theta_at_q_is_one(space):
    rng = np.random.default_rng(1)
    Q = rng.standard_normal(space.k)
    Q /= np.linalg.norm(Q)
    V = rng.standard_normal(space.l)
    V /= np.linalg.norm(V)
    assert_allclose(theta(Q, V, space)(Q[None]), [1.0], atol=1e-14)


def test_theta_quaternion_coefficients():
    Q = np.eye(4)[0]
    th = theta(Q, [0, 0, 1], S4)
    expected = Q + 1j * (S4.basis[2] @ Q)
    got = np.array([th.terms.get(tuple(np.eye(4, dtype=int)[i]), 0) for i in range(4)])
    assert_allclose(got, expected)
    # left multiplication by k sends 1 to k
    assert_allclose(expected, [1, 0, 0, 1j])


def test_theta_rejects_non_unit():
    with pytest.raises(ValueError):
        theta([2.0, 0.0], [1.0], S2)


def test_dv_constant_is_zero():
    assert dv_apply([1.3], ComplexPolynomial.constant(2.0, 2), S2).is_zero()


@pytest.mark.parametrize("space", [S2, S4, build_htype(3, 1, 1)])
@pytest.mark.parametrize("p,q", [(0, 1), (1, 0), (2, 1), (1, 3)])
def test_dv_eigen_relation(space, p, q):
    # with J(e1) = e2 the X-field derivative gives D_J z = i z, so the
    # eigenvalue on Theta^p conj(Theta)^q is (p - q)|V| i
    rng = np.random.default_rng(p + 7 * q)
    Q = rng.standard_normal(space.k)
    Q /= np.linalg.norm(Q)
    V = rng.standard_normal(space.l) * 1.7
    th = theta(Q, V / np.linalg.norm(V), space)
    P = th ** p * th.conj() ** q
    assert dv_apply(V, P, space).allclose(P * (1j * (p - q) * np.linalg.norm(V)), 1e-10)


def test_dv_x1_squared_against_differences():
    P = ComplexPolynomial.variable(0, 2) ** 2
    got = dv_apply([2.0], P, S2)
    assert got.allclose(ComplexPolynomial({(1, 1): -4.0}, 2))
    X = np.random.default_rng(2).standard_normal((10, 2))
    assert_allclose(got(X), fd_derivation(j_of(S2, [2.0]), P, X), rtol=1e-8)


def test_laplacian_examples():
    x1 = ComplexPolynomial.variable(0, 3)
    assert laplacian_x(x1 ** 2).allclose(ComplexPolynomial.constant(2, 3))
    assert laplacian_x(ComplexPolynomial.norm_squared(4)).allclose(ComplexPolynomial.constant(8, 4))
    th = theta(np.eye(4)[1], [0.6, 0.0, 0.8], S4)
    assert laplacian_x(th ** 2).is_zero() or laplacian_x(th ** 2).max_abs() < 1e-15


def test_harmonic_project_examples():
    th = theta(np.eye(2)[0], [1.0], S2)
    assert harmonic_project(th ** 3).allclose(th ** 3)
    assert harmonic_project(ComplexPolynomial.norm_squared(2)).max_abs() < 1e-15
    for k in (2, 3, 5):
        x1sq = ComplexPolynomial.variable(0, k) ** 2
        want = x1sq - ComplexPolynomial.norm_squared(k) * (1 / k)
        assert harmonic_project(x1sq).allclose(want, 1e-14)


def test_harmonic_project_needs_homogeneous():
    P = ComplexPolynomial({(2, 0): 1.0, (0, 0): 1.0}, 2)
    with pytest.raises(ValueError):
        harmonic_project(P)


def test_harmonic_project_on_a_subset_of_variables():
    # treat x3 as a parameter: x1^2 x3 -> (x1^2 - (x1^2 + x2^2)/2) x3
    P = ComplexPolynomial({(2, 0, 1): 1.0}, 3)
    got = harmonic_project(P, [0, 1])
    assert got.allclose(ComplexPolynomial({(2, 0, 1): 0.5, (0, 2, 1): -0.5}, 3), 1e-14)


@settings(max_examples=60, deadline=None)
@given(P=homogeneous())
def test_projection_matches_oracle_and_is_idempotent(P):
    H = harmonic_project(P)
    scale = max(1.0, P.max_abs())
    assert (H - harmonic_project_oracle(P)).max_abs() < 1e-10 * scale
    assert (harmonic_project(H) - H).max_abs() < 1e-10 * scale
    assert laplacian_x(H).max_abs() < 1e-10 * scale


@settings(max_examples=40, deadline=None)
@given(P=homogeneous(), V=st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3))
def test_dv_commutes_with_projection(P, V):
    lhs = harmonic_project(dv_apply(V, P, S4))
    rhs = dv_apply(V, harmonic_project(P), S4)
    assert (lhs - rhs).max_abs() < 1e-10 * max(1.0, P.max_abs())


@settings(max_examples=40, deadline=None)
@given(P=homogeneous(k=3, max_degree=4))
def test_derivation_matches_differences(P):
    A = np.array([[0.0, -1.0, 0.5], [1.0, 0.0, 0.0], [-0.5, 0.0, 0.0]])
    X = np.random.default_rng(3).standard_normal((6, 3))
    assert_allclose(derivation(A, P)(X), fd_derivation(A, P, X), atol=1e-6 * max(1, P.max_abs()) * 50)


@settings(max_examples=30, deadline=None)
@given(P=homogeneous(), Q=homogeneous())
def test_json_round_trip(P, Q):
    R = P * Q + P.conj()
    again = ComplexPolynomial.from_json(json.dumps(R.to_json()))
    assert again == R or again.allclose(R, 0.0)


def test_json_format():
    P = ComplexPolynomial({(1, 0): 1 + 2j}, 2)
    data = P.to_json()
    assert data["terms"] == [{"exps": [1, 0], "re": 1.0, "im": 2.0}]
    # the dimension travels along so that the zero polynomial round-trips
    zero = ComplexPolynomial({}, 3)
    assert ComplexPolynomial.from_json(zero.to_json()).k == 3

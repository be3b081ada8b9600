"""Quadrature rules and Gaussian inner products.

Tensor Gauss-Hermite rules integrate polynomial * exp(-lam |X|^2) exactly,
product Gauss-Legendre x trapezoid rules cover spheres in R^3, and exact
Gaussian moments give inner products of polynomials without sampling.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

from .polyalg import ComplexPolynomial

MAX_DEGREE = 60
MAX_DIM = 8
MAX_NODES = 4_000_000


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray  # (N, d)
    weights: np.ndarray  # (N,)
    domain: str  # "gaussian" | "sphere" | "interval"
    degree: int

    def __len__(self) -> int:
        return len(self.weights)

    def integrate(self, values) -> complex:
        return compensated_sum(self.weights * np.asarray(values))


def default_order(fallback: int) -> int:
    """Quadrature order, overridable through ZSPEC_QUAD_ORDER."""
    env = os.environ.get("ZSPEC_QUAD_ORDER")
    return int(env) if env else fallback


def compensated_sum(values) -> complex:
    """Exactly rounded sum (math.fsum on real and imaginary parts)."""
    v = np.asarray(values).ravel()
    if np.iscomplexobj(v):
        return complex(math.fsum(v.real), math.fsum(v.imag))
    return math.fsum(v)


@lru_cache(maxsize=64)
def _hermite_1d(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = hermgauss(n)
    return x, w


def gaussian_rule_1d(n: int, lam: float, center: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """n-point rule for the weight exp(-lam (x - center)^2) on the real line."""
    x, w = _hermite_1d(n)
    s = 1.0 / math.sqrt(lam)
    return center + x * s, w * s


def gaussian_rule(k: int, lam: float, degree: int, center=None) -> QuadratureRule:
    """Tensor rule exact for polynomials of total degree <= ``degree``
    against exp(-lam |X - center|^2) on R^k."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if degree > MAX_DEGREE or k > MAX_DIM or k < 1:
        raise ValueError(
            f"rule size out of budget: k={k}, degree={degree} "
            f"(limits k<={MAX_DIM}, degree<={MAX_DEGREE})")
    n = degree // 2 + 1
    if n ** k > MAX_NODES:
        raise ValueError(f"rule size out of budget: {n}^{k} nodes")
    center = np.zeros(k) if center is None else np.asarray(center, dtype=float)
    x, w = _hermite_1d(n)
    s = 1.0 / math.sqrt(lam)
    grids = np.meshgrid(*([x * s] * k), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1) + center
    wgrid = np.meshgrid(*([w * s] * k), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrid], axis=-1), axis=-1)
    return QuadratureRule(nodes, weights, "gaussian", degree)


def flat_rule(k: int, lam: float, degree: int, center=None) -> QuadratureRule:
    """Gauss-Hermite rule with the weight folded in, for integrals dX of
    functions decaying like exp(-lam |X - center|^2)."""
    rule = gaussian_rule(k, lam, degree, center)
    c = rule.nodes - (0 if center is None else np.asarray(center, dtype=float))
    w = rule.weights * np.exp(lam * np.sum(c * c, axis=-1))
    return QuadratureRule(rule.nodes, w, "flat", degree)


def sphere_rule(R: float, order: int) -> QuadratureRule:
    """Rule on the sphere of radius R in R^3, exact for polynomials of
    degree <= order: Gauss-Legendre in cos(theta), trapezoid in phi."""
    if order < 3:
        raise ValueError("order must be >= 3")
    n_theta = order // 2 + 1
    n_phi = order + 1
    ct, wt = leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    CT, PH = np.meshgrid(ct, phi, indexing="ij")
    ST = np.sqrt(1 - CT ** 2)
    nodes = R * np.stack([ST * np.cos(PH), ST * np.sin(PH), CT], axis=-1).reshape(-1, 3)
    weights = (np.repeat(wt, n_phi) * (2 * np.pi / n_phi)) * R ** 2
    return QuadratureRule(nodes, weights, "sphere", order)


def interval_rule(a: float, b: float, n: int) -> QuadratureRule:
    x, w = leggauss(n)
    half = 0.5 * (b - a)
    return QuadratureRule((a + half * (x + 1))[:, None], w * half, "interval", 2 * n - 1)


def inner_product(f, g, rule: QuadratureRule) -> complex:
    """Quadrature of f * conj(g); f and g are callables on the rule's nodes."""
    fv = np.asarray(f(rule.nodes))
    gv = np.asarray(g(rule.nodes))
    return complex(rule.integrate(fv * np.conj(gv)))


# exact Gaussian moments ------------------------------------------------

def gaussian_moment(n: int, lam: float) -> float:
    """int_R x^n exp(-lam x^2) dx."""
    if n % 2:
        return 0.0
    return math.gamma((n + 1) / 2) / lam ** ((n + 1) / 2)


def gaussian_moment_table(nmax: int, lam: float) -> np.ndarray:
    """1D moments 0..nmax, computed with a Gauss-Hermite rule exact to nmax."""
    x, w = gaussian_rule_1d(nmax // 2 + 1, lam)
    return np.array([math.fsum(w * x ** j) for j in range(nmax + 1)])


def poly_inner(P: ComplexPolynomial, Q: ComplexPolynomial, lam: float) -> complex:
    """int P conj(Q) exp(-lam |X|^2) dX, exactly, through 1D moments."""
    if P.k != Q.k:
        raise ValueError("dimension mismatch")
    if P.is_zero() or Q.is_zero():
        return 0j
    ep, cp = P.arrays()
    eq, cq = Q.arrays()
    top = int(ep.max() + eq.max()) if ep.size and eq.size else 0
    mom = np.array([gaussian_moment(j, lam) for j in range(top + 1)])
    tot = ep[:, None, :] + eq[None, :, :]
    vals = np.prod(mom[tot], axis=-1)
    return complex(compensated_sum(vals * (cp[:, None] * np.conj(cq)[None, :])))


def gram_matrix(exps: list[tuple[int, ...]], lam: float) -> np.ndarray:
    """Gram matrix of monomials under exp(-lam |X|^2), from 1D moments."""
    E = np.asarray(exps, dtype=int)
    top = int(2 * E.max()) if E.size else 0
    mom = gaussian_moment_table(top, lam)
    G = np.ones((len(E), len(E)))
    for j in range(E.shape[1]):
        G *= mom[E[:, j][:, None] + E[:, j][None, :]]
    return G


def gaussian_integral(A, b=None, c: complex = 0.0) -> complex:
    """int_{R^n} exp(-X^T A X + b.X + c) dX for complex symmetric A with Re A > 0."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    b = np.zeros(n) if b is None else np.asarray(b, dtype=complex)
    eig = np.linalg.eigvals(A)
    sqrt_det = np.prod(np.sqrt(eig))
    quad = b @ np.linalg.solve(A, b) / 4
    return complex(np.pi ** (n / 2) / sqrt_det * np.exp(quad + c))

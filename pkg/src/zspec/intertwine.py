"""Sphere-Fourier transforms, the compound angular momentum M, the
intertwining operators kappa and omega, and a truncated isospectrality check.

A generated function is a finite superposition over sphere-rule nodes V_m:

    F(X, Z) = sum_m w_m exp(i <Z, V_m>) P_m(X) exp(-|X|^2 / 2),

with one polynomial P_m per node.  Node polynomials share a monomial
table, so X-operators (Laplacian, |X|^2, derivations along J_alpha X) act
as sparse matrices on an (M, T) coefficient array, and the group
Laplacian is applied exactly, node by node.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from . import numerics
from .hgroup import EndomorphismSpace, j_of
from .polyalg import (ComplexPolynomial, harmonic_project, homogeneous_monomials,
                      monomial_values, monomials_up_to, theta)

DEFAULT_ORDER = 24


# monomial tables and sparse X-operators -------------------------------------

class MonomialTable:
    """All monomials of degree <= ``degree`` in k variables, graded lex."""

    def __init__(self, k: int, degree: int):
        self.k = k
        self.degree = degree
        self.exps = np.array(monomials_up_to(degree, k), dtype=int).reshape(-1, k)
        self.index = {tuple(e): i for i, e in enumerate(self.exps.tolist())}

    def __len__(self) -> int:
        return len(self.exps)

    def pack(self, polys: list[ComplexPolynomial]) -> np.ndarray:
        C = np.zeros((len(polys), len(self)), dtype=complex)
        for m, P in enumerate(polys):
            for e, c in P.terms.items():
                C[m, self.index[e]] = c
        return C

    def poly(self, row: np.ndarray) -> ComplexPolynomial:
        return ComplexPolynomial({tuple(e): c for e, c in zip(self.exps.tolist(), row) if c != 0}, self.k)

    def values(self, X: np.ndarray) -> np.ndarray:
        return monomial_values(np.atleast_2d(X), self.exps)


@lru_cache(maxsize=16)
def table(k: int, degree: int) -> MonomialTable:
    return MonomialTable(k, degree)


def _sparse(rows, cols, vals, dst: MonomialTable, src: MonomialTable) -> sp.csr_matrix:
    return sp.csr_matrix((vals, (rows, cols)), shape=(len(dst), len(src)))


@lru_cache(maxsize=64)
def _lap_matrix(k: int, d_src: int, d_dst: int) -> sp.csr_matrix:
    src, dst = table(k, d_src), table(k, d_dst)
    rows, cols, vals = [], [], []
    for j, e in enumerate(src.exps.tolist()):
        for i in range(k):
            if e[i] >= 2:
                ne = list(e)
                ne[i] -= 2
                rows.append(dst.index[tuple(ne)])
                cols.append(j)
                vals.append(e[i] * (e[i] - 1))
    return _sparse(rows, cols, vals, dst, src)


@lru_cache(maxsize=64)
def _r2_matrix(k: int, d_src: int, d_dst: int) -> sp.csr_matrix:
    src, dst = table(k, d_src), table(k, d_dst)
    rows, cols, vals = [], [], []
    for j, e in enumerate(src.exps.tolist()):
        for i in range(k):
            ne = list(e)
            ne[i] += 2
            rows.append(dst.index[tuple(ne)])
            cols.append(j)
            vals.append(1.0)
    return _sparse(rows, cols, vals, dst, src)


@lru_cache(maxsize=64)
def _embed_matrix(k: int, d_src: int, d_dst: int) -> sp.csr_matrix:
    src, dst = table(k, d_src), table(k, d_dst)
    n = len(src)
    return _sparse(np.arange(n), np.arange(n), np.ones(n), dst, src)


@lru_cache(maxsize=64)
def _euler_matrix(k: int, d_src: int, d_dst: int) -> sp.csr_matrix:
    src = table(k, d_src)
    return _embed_matrix(k, d_src, d_dst) @ sp.diags(src.exps.sum(axis=1).astype(float))


def _derivation_matrix(A: np.ndarray, k: int, d_src: int, d_dst: int) -> sp.csr_matrix:
    """Derivative along X -> A X (degree preserving)."""
    src, dst = table(k, d_src), table(k, d_dst)
    nz = [(j, m, A[j, m]) for j in range(k) for m in range(k) if A[j, m] != 0]
    rows, cols, vals = [], [], []
    for col, e in enumerate(src.exps.tolist()):
        for j, m, a in nz:
            if e[j]:
                ne = list(e)
                ne[j] -= 1
                ne[m] += 1
                rows.append(dst.index[tuple(ne)])
                cols.append(col)
                vals.append(a * e[j])
    return _sparse(rows, cols, vals, dst, src)


@lru_cache(maxsize=16)
def _space_derivations(space: EndomorphismSpace, d_src: int, d_dst: int) -> tuple[sp.csr_matrix, ...]:
    return tuple(_derivation_matrix(J, space.k, d_src, d_dst) for J in space.basis)


def envelope_laplacian_matrix(k: int, d_src: int, lam: float) -> sp.csr_matrix:
    """Delta_X on P exp(-lam|X|^2/2), acting on P: Delta - 2 lam E + lam^2 |X|^2 - k lam."""
    d_dst = d_src + 2
    return (_lap_matrix(k, d_src, d_dst) - 2 * lam * _euler_matrix(k, d_src, d_dst)
            + lam ** 2 * _r2_matrix(k, d_src, d_dst) - k * lam * _embed_matrix(k, d_src, d_dst))


# node superpositions ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NodeSum:
    """sum_m w_m exp(i<Z, V_m>) P_m(X) exp(-lam|X|^2/2) with P_m = C[m] on a table."""

    space: EndomorphismSpace
    degree: int
    C: np.ndarray  # (M, T)
    V: np.ndarray  # (M, l)
    w: np.ndarray  # (M,)
    lam: float = 1.0

    @property
    def table(self) -> MonomialTable:
        return table(self.space.k, self.degree)

    def __call__(self, X, Z) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        P = self.table.values(X) @ self.C.T  # (N, M)
        phase = np.exp(1j * (Z @ self.V.T))
        env = np.exp(-0.5 * self.lam * np.sum(X * X, axis=-1))
        return env * np.sum(P * phase * self.w, axis=-1)

    def with_coefficients(self, C: np.ndarray, degree: int) -> "NodeSum":
        return replace(self, C=C, degree=degree)

    def at_z(self, Z) -> ComplexPolynomial:
        """The X-polynomial of F(., Z) (envelope excluded)."""
        phase = np.exp(1j * (self.V @ np.asarray(Z, dtype=float)))
        return self.table.poly((self.w * phase) @ self.C)

    def norm_at(self, Z) -> float:
        """Exact (int |F(X, Z)|^2 dX)^(1/2)."""
        P = self.at_z(Z)
        return math.sqrt(max(numerics.poly_inner(P, P, self.lam).real, 0.0))

    def d_alpha(self, alpha: int) -> "NodeSum":
        D = _space_derivations(self.space, self.degree, self.degree)[alpha]
        return self.with_coefficients(self.C @ D.T, self.degree)

    def laplacian(self) -> "NodeSum":
        """Delta_X + (1 + |X|^2/4) Delta_Z + sum_alpha d_{Z_alpha} D_alpha, node by node."""
        k, d = self.space.k, self.degree
        out = self.C @ envelope_laplacian_matrix(k, d, self.lam).T
        R2 = np.sum(self.V ** 2, axis=-1)[:, None]
        base = self.C @ (_embed_matrix(k, d, d + 2) + 0.25 * _r2_matrix(k, d, d + 2)).T
        out = out - R2 * base
        embed = _embed_matrix(k, d, d + 2)
        for alpha, D in enumerate(_space_derivations(self.space, d, d)):
            out = out + 1j * self.V[:, alpha:alpha + 1] * (self.C @ (embed @ D).T)
        return self.with_coefficients(out, d + 2)


@dataclass(frozen=True, eq=False)
class Pullback:
    """X -> G(K^T X, Z): the point transformation (K, id_Z) applied to G."""

    G: Callable
    K: np.ndarray

    def __call__(self, X, Z) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.G(X @ self.K, Z)


# generator profiles and generated functions -------------------------------------

@dataclass(frozen=True, eq=False)
class GeneratorProfile:
    """phi(|X|, V) = sum_j c_j(V) |X|^{2j} exp(-|X|^2/2).

    ``coeffs`` maps node vectors V of shape (M, l) to an (M, J) array.
    """

    coeffs: Callable[[np.ndarray], np.ndarray]
    terms: int

    @classmethod
    def radial(cls, c) -> "GeneratorProfile":
        c = np.asarray(c, dtype=complex).reshape(-1)
        return cls(lambda V: np.broadcast_to(c, (len(V), len(c))), len(c))

    @classmethod
    def dirichlet(cls, R_X: float) -> "GeneratorProfile":
        """(|X|^2 - R_X^2) exp(-|X|^2/2): vanishes on the sphere |X| = R_X."""
        return cls.radial([-R_X ** 2, 1.0])

    def scaled(self, factor: Callable[[np.ndarray], np.ndarray]) -> "GeneratorProfile":
        base = self.coeffs
        return GeneratorProfile(lambda V: np.asarray(base(V)) * np.asarray(factor(V))[:, None], self.terms)

    def values(self, rho, V) -> np.ndarray:
        """phi at radii rho (N,) and node vectors V (N, l)."""
        rho = np.asarray(rho, dtype=float)
        c = np.asarray(self.coeffs(np.atleast_2d(V)))
        powers = rho[:, None] ** (2 * np.arange(self.terms))
        return np.sum(c * powers, axis=-1) * np.exp(-0.5 * rho ** 2)


def _unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if abs(np.linalg.norm(v) - 1) > 1e-10:
        raise ValueError(f"{name} must be a unit vector")
    return v


@dataclass(frozen=True, eq=False)
class GeneratedFunction:
    """Recipe for F_{QpqR_Z}(phi) (harmonic=False) or HF_{QpqR_Z}(phi) (harmonic=True)."""

    Q: np.ndarray
    p: int
    q: int
    R_Z: float
    phi: GeneratorProfile
    space: EndomorphismSpace
    harmonic: bool = False
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.space.l != 3:
            raise ValueError("sphere transforms need l = 3")
        if not self.R_Z > 0:
            raise ValueError("R_Z must be positive")
        if self.p < 0 or self.q < 0:
            raise ValueError("p, q must be non-negative")
        object.__setattr__(self, "Q", _unit(self.Q, "Q"))
        if self.Q.shape[0] != self.space.k:
            raise ValueError("Q has the wrong dimension")

    @property
    def degree(self) -> int:
        return self.p + self.q + 2 * (self.phi.terms - 1)

    def node_polynomial(self, V) -> ComplexPolynomial:
        """Theta^p conj(Theta)^q (or its harmonic part) at node V, without phi."""
        V = np.asarray(V, dtype=float)
        th = theta(self.Q, V / np.linalg.norm(V), self.space)
        P = (th ** self.p) * (th.conj() ** self.q)
        if self.harmonic and self.p + self.q >= 2:
            P = harmonic_project(P)
        return P

    @cached_property
    def nodes(self) -> NodeSum:
        rule = numerics.sphere_rule(self.R_Z, self.order)
        V = rule.nodes
        k = self.space.k
        d0 = self.p + self.q
        base = table(k, d0).pack([self.node_polynomial(v) for v in V])
        c = np.asarray(self.phi.coeffs(V), dtype=complex)
        d = self.degree
        C = np.zeros((len(V), len(table(k, d))), dtype=complex)
        term = base
        for j in range(self.phi.terms):
            dj = d0 + 2 * j
            if j:
                term = term @ _r2_matrix(k, dj - 2, dj).T
            C += c[:, j:j + 1] * (term @ _embed_matrix(k, dj, d).T)
        return NodeSum(self.space, d, C, V, rule.weights.astype(complex))

    def __call__(self, X, Z) -> np.ndarray:
        return self.nodes(X, Z)

    def laplacian(self) -> NodeSum:
        return self.nodes.laplacian()

    def with_(self, **kw) -> "GeneratedFunction":
        return replace(self, **kw)


def fourier_sphere(Q, p: int, q: int, R_Z: float, phi: GeneratorProfile, space: EndomorphismSpace,
                   harmonic: bool = False, order: int | None = None) -> GeneratedFunction:
    return GeneratedFunction(np.asarray(Q, dtype=float), p, q, float(R_Z), phi, space, harmonic,
                             order or numerics.default_order(DEFAULT_ORDER))


# M and Delta_Z -----------------------------------------------------------------

def _fd_weights(h: float):
    """Fourth-order central differences: offsets and weights for f' and f''."""
    offs = np.array([-2, -1, 1, 2]) * h
    first = np.array([1, -8, 8, -1]) / (12 * h)
    offs2 = np.array([-2, -1, 0, 1, 2]) * h
    second = np.array([-1, 16, -30, 16, -1]) / (12 * h * h)
    return offs, first, offs2, second


@dataclass(frozen=True, eq=False)
class DirectM:
    """sum_alpha d_{Z_alpha} D_alpha F: exact D_alpha in X, finite differences in Z."""

    F: GeneratedFunction
    h: float = 1e-3

    def __call__(self, X, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        offs, wts, _, _ = _fd_weights(self.h)
        out = 0
        for alpha in range(self.F.space.l):
            G = self.F.nodes.d_alpha(alpha)
            e = np.zeros(self.F.space.l)
            e[alpha] = 1
            out = out + sum(w * G(X, Z + o * e) for o, w in zip(offs, wts))
        return out


def m_apply(F: GeneratedFunction, mode: str = "recipe", h: float = 1e-3):
    """Compound angular momentum M applied to F.

    recipe: phi -> (q - p)|V| phi, as in the displayed identity for M;
    direct: an evaluator applying sum_alpha d_alpha D_alpha numerically.
    """
    if mode == "recipe":
        s = F.q - F.p
        return F.with_(phi=F.phi.scaled(lambda V: s * np.linalg.norm(V, axis=-1)))
    if mode == "direct":
        return DirectM(F, h)
    raise ValueError(f"unknown mode {mode!r}")


def z_laplacian_fd(F, X, Z, h: float = 1e-2) -> np.ndarray:
    """Delta_Z F by fourth-order central differences."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    _, _, offs, wts = _fd_weights(h)
    out = 0
    for alpha in range(Z.shape[-1]):
        e = np.zeros(Z.shape[-1])
        e[alpha] = 1
        out = out + sum(w * F(X, Z + o * e) for o, w in zip(offs, wts))
    return out


def m_eigenvalue(F: GeneratedFunction, X, Z, h: float = 1e-3) -> float:
    """Median of Re(M F / F) over samples where |F| is not small."""
    num = DirectM(F, h)(X, Z)
    den = F(X, Z)
    keep = np.abs(den) > 1e-3 * np.abs(den).max()
    return float(np.median((num[keep] / den[keep]).real))


# point transformations, kappa and omega -------------------------------------------

def _complete(frame: np.ndarray) -> np.ndarray:
    """Orthonormal basis whose first columns are ``frame`` (Gram-Schmidt on e_1..e_k)."""
    k = frame.shape[0]
    cols = [c for c in frame.T]
    for e in np.eye(k):
        if len(cols) == k:
            break
        v = e.copy()
        for _ in range(2):
            for c in cols:
                v -= (c @ v) * c
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            cols.append(v / nrm)
    return np.stack(cols, axis=1)


def frame(Q, space: EndomorphismSpace) -> np.ndarray:
    """Columns Q, J_1 Q, ..., J_l Q (orthonormal for unit Q)."""
    Q = _unit(Q, "Q")
    return np.stack([Q] + [J @ Q for J in space.basis], axis=1)


def frame_map(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Orthogonal K with K src = dst, extended by deterministic completion."""
    return _complete(dst) @ _complete(src).T


def _check_pair(space: EndomorphismSpace, other: EndomorphismSpace):
    if space.l != other.l or space.a + space.b != other.a + other.b:
        raise ValueError(f"signature mismatch: {space.label()} vs {other.label()}")


def point_transform(Q, space: EndomorphismSpace, other: EndomorphismSpace) -> np.ndarray:
    """K_Q: Q -> Q, J_alpha Q -> J'_alpha Q."""
    _check_pair(space, other)
    return frame_map(frame(Q, space), frame(Q, other))


def omega_transform(Q, Qt, space: EndomorphismSpace) -> np.ndarray:
    """O_{Q Qt}: Q -> Qt, J_alpha Q -> J_alpha Qt."""
    return frame_map(frame(Q, space), frame(Qt, space))


def kappa(F: GeneratedFunction, other: EndomorphismSpace) -> GeneratedFunction:
    """Recipe rebuilt with the Theta' factors of ``other``."""
    _check_pair(F.space, other)
    if other is F.space:
        return F
    return F.with_(space=other)


def omega(F: GeneratedFunction, Qt) -> GeneratedFunction:
    Qt = _unit(Qt, "Qt")
    if np.array_equal(Qt, F.Q):
        return F
    return F.with_(Q=Qt)


@dataclass(frozen=True)
class IntertwineReport:
    residual: float  # max |T(Delta F) - Delta'(T F)| over samples
    scale: float  # max |Delta F| over samples
    transform_defect: float  # max |T F - F o K^T| (recipe vs point transformation)


def _intertwine(F: GeneratedFunction, G: GeneratedFunction, K: np.ndarray, X, Z) -> IntertwineReport:
    lhs = Pullback(F.laplacian(), K)(X, Z)
    rhs = G.laplacian()(X, Z)
    defect = np.abs(G(X, Z) - Pullback(F, K)(X, Z)).max()
    return IntertwineReport(float(np.abs(lhs - rhs).max()), float(np.abs(lhs).max()), float(defect))


def kappa_residual(F: GeneratedFunction, other: EndomorphismSpace, X, Z) -> IntertwineReport:
    return _intertwine(F, kappa(F, other), point_transform(F.Q, F.space, other), X, Z)


def omega_residual(F: GeneratedFunction, Qt, X, Z) -> IntertwineReport:
    return _intertwine(F, omega(F, Qt), omega_transform(F.Q, Qt, F.space), X, Z)


# counting ------------------------------------------------------------------------

def dim_counts(p: int, q: int, n: int, k: int) -> tuple[int, int]:
    """(d_pq, d_n) = (C(p+k-1, k-1) C(q+k-1, k-1), C(n+k-1, k-1))."""
    return math.comb(p + k - 1, k - 1) * math.comb(q + k - 1, k - 1), math.comb(n + k - 1, k - 1)


def harmonic_bidegree_dimension(p: int, q: int, m: int) -> int:
    """Dimension of harmonic polynomials of bidegree (p, q) on C^m."""
    def c(a, b):
        return math.comb(a + b - 1, a) if a >= 0 else 0
    return c(p, m) * c(q, m) - (c(p - 1, m) * c(q - 1, m) if p and q else 0)


def xi_rank(p: int, q: int, space: EndomorphismSpace, V_u, n_Q: int | None = None,
            seed: int = 0) -> tuple[int, int]:
    """(numerical rank of {Pi_X(Theta_Q^p conj Theta_Q^q)} over random Q, expected dimension).

    A linear-independence check only; no spanning certificate is claimed.
    """
    V_u = _unit(V_u, "V_u")
    expected = harmonic_bidegree_dimension(p, q, space.k // 2)
    n_Q = n_Q or 2 * expected + 4
    rng = np.random.default_rng(seed)
    mons = homogeneous_monomials(p + q, space.k)
    idx = {e: i for i, e in enumerate(mons)}
    rows = []
    for _ in range(n_Q):
        Q = rng.standard_normal(space.k)
        Q /= np.linalg.norm(Q)
        th = theta(Q, V_u, space)
        P = harmonic_project((th ** p) * (th.conj() ** q))
        row = np.zeros(len(mons), dtype=complex)
        for e, c in P.terms.items():
            row[idx[e]] = c
        rows.append(row)
    s = np.linalg.svd(np.array(rows), compute_uv=False)
    return int((s > 1e-9 * s[0]).sum()), expected


# truncated isospectrality ----------------------------------------------------------

@dataclass(frozen=True)
class IsospecResult:
    eigs: np.ndarray
    eigs_other: np.ndarray
    gap: float


def box_gamma_matrix(space: EndomorphismSpace, Z_gamma, degree_max: int) -> tuple[np.ndarray, float]:
    """Matrix of Box_gamma on P exp(-lam|X|^2/2), P of degree <= degree_max, lam = pi|Z_gamma|.

    At this matched rate the |X|^2 terms of the envelope Laplacian and of
    the potential cancel, so the truncated space is invariant and the
    matrix acts within the monomial table.
    """
    Z_gamma = np.asarray(Z_gamma, dtype=float).reshape(-1)
    nz = float(np.linalg.norm(Z_gamma))
    if nz == 0:
        raise ValueError("Z_gamma must be non-zero")
    lam = math.pi * nz
    k, d = space.k, degree_max
    A = (_lap_matrix(k, d, d) - 2 * lam * _euler_matrix(k, d, d)
         - (k * lam + 4 * math.pi ** 2 * nz ** 2) * _embed_matrix(k, d, d)
         + 2j * math.pi * _derivation_matrix(j_of(space, Z_gamma), k, d, d))
    return A.toarray(), lam


def box_gamma_spectrum(space: EndomorphismSpace, Z_gamma, degree_max: int) -> np.ndarray:
    """Sorted Galerkin eigenvalues: eigh(G A, G) with the exact monomial Gram G, per parity."""
    A, lam = box_gamma_matrix(space, Z_gamma, degree_max)
    exps = table(space.k, degree_max).exps
    parity = exps.sum(axis=1) % 2
    eigs = []
    for par in (0, 1):
        sel = np.flatnonzero(parity == par)
        G = numerics.gram_matrix([tuple(e) for e in exps[sel]], lam)
        s = 1 / np.sqrt(np.diag(G))
        Gs = G * s[:, None] * s[None, :]
        B = Gs @ (A[np.ix_(sel, sel)] * (1 / s)[:, None] * s[None, :])
        herm = np.abs(B - B.conj().T).max() / max(np.abs(B).max(), 1.0)
        if herm > 1e-8:
            raise ArithmeticError(f"Galerkin matrix is not Hermitian ({herm:.2e})")
        try:
            eigs.append(scipy.linalg.eigh(0.5 * (B + B.conj().T), Gs, eigvals_only=True))
        except np.linalg.LinAlgError as exc:
            raise ArithmeticError(f"Gram conditioning failure: {exc}") from exc
    return np.sort(np.concatenate(eigs))


def isospec_check(space: EndomorphismSpace, other: EndomorphismSpace, Z_gamma,
                  degree_max: int = 6) -> IsospecResult:
    _check_pair(space, other)
    e1 = box_gamma_spectrum(space, Z_gamma, degree_max)
    e2 = e1 if other is space else box_gamma_spectrum(other, Z_gamma, degree_max)
    return IsospecResult(e1, e2, float(np.abs(e1 - e2).max()))


def negative_control(space: EndomorphismSpace, Z_gamma, degree_max: int = 6) -> IsospecResult:
    """Same space with Z_gamma and 2 Z_gamma: the spectra must differ."""
    Z_gamma = np.asarray(Z_gamma, dtype=float)
    e1 = box_gamma_spectrum(space, Z_gamma, degree_max)
    e2 = box_gamma_spectrum(space, 2 * Z_gamma, degree_max)
    return IsospecResult(e1, e2, float(np.abs(e1 - e2).max()))

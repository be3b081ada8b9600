"""Zeeman zones: Gram-Schmidt bases, the extended Fock representation and
the closed-form zonal projection kernels.

Zone polynomials are kept in Wirtinger form: a ComplexPolynomial in the
2n formal variables (z_1..z_n, zbar_1..zbar_n), n = k/2.  The weighted
space L^2(exp(-lam|X|^2) dX) and flat L^2(dX) are identified through
P -> P exp(-lam |X|^2/2); the two inner products coincide, so a basis
orthonormal in one picture is orthonormal in the other.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_genlaguerre

from .polyalg import ComplexPolynomial, homogeneous_monomials, substitute_linear
from .zeeman import GaussianPoly


class RankError(ValueError):
    pass


def laguerre(a: int, alpha: float, t):
    """Generalized Laguerre polynomial L_a^(alpha)(t)."""
    if a < 0:
        raise ValueError("order must be non-negative")
    if alpha <= -1:
        raise ValueError("alpha must exceed -1")
    out = eval_genlaguerre(a, alpha, np.asarray(t, dtype=float))
    return out if np.ndim(out) else float(out)


# Wirtinger polynomials ---------------------------------------------------

def fock_moment(m: int, lam: float) -> float:
    """int_C |z|^{2m} exp(-lam |z|^2) dA = pi m! / lam^{m+1}."""
    return math.pi * math.factorial(m) / lam ** (m + 1)


def fock_inner(P: ComplexPolynomial, Q: ComplexPolynomial, lam: float) -> complex:
    """<P, Q> = int P conj(Q) exp(-lam |z|^2) for Wirtinger polynomials.

    z^b zbar^a * conj(z^b' zbar^a') = z^(b+a') zbar^(a+b') integrates to
    fock_moment(b+a') when b + a' = a + b', coordinate by coordinate.
    """
    n = P.k // 2
    Qc = defaultdict(list)
    for e, c in Q.terms.items():
        Qc[tuple(e[j] - e[n + j] for j in range(n))].append((e, c))
    total = []
    for e, c in P.terms.items():
        key = tuple(e[j] - e[n + j] for j in range(n))
        for e2, c2 in Qc.get(key, ()):
            v = c * c2.conjugate()
            for j in range(n):
                v *= fock_moment(e[j] + e2[n + j], lam)
            total.append(v)
    return complex(math.fsum(v.real for v in total), math.fsum(v.imag for v in total))


def fock_apply(which: str, i: int, psi: ComplexPolynomial, lam: float) -> ComplexPolynomial:
    """Extended Fock representation on a weighted-space representative.

    rho(z_i) psi = -d psi/d zbar_i + lam z_i psi;  rho(zbar_i) psi = d psi/d z_i.
    """
    n = psi.k // 2
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for n = {n}")
    if which == "z":
        return -psi.diff(n + i) + lam * (ComplexPolynomial.variable(i, psi.k) * psi)
    if which == "zbar":
        return psi.diff(i)
    raise ValueError(f"which must be 'z' or 'zbar', got {which!r}")


def wirtinger_to_real(P: ComplexPolynomial) -> ComplexPolynomial:
    """Substitute z_j = x_{2j-1} + i x_{2j}, zbar_j = x_{2j-1} - i x_{2j}."""
    n = P.k // 2
    k = 2 * n
    forms = []
    for sign in (1, -1):
        for j in range(n):
            coeffs = [0j] * k
            coeffs[2 * j] = 1
            coeffs[2 * j + 1] = sign * 1j
            forms.append(ComplexPolynomial.linear(coeffs))
    return substitute_linear(P, forms)


def to_complex(X) -> np.ndarray:
    """Real points (..., k) -> complex points (..., k/2)."""
    X = np.asarray(X, dtype=float)
    return X[..., 0::2] + 1j * X[..., 1::2]


def to_real(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def evaluate_flat(P: ComplexPolynomial, z, lam: float) -> np.ndarray:
    """P(z, zbar) exp(-lam |z|^2 / 2) at complex points z of shape (N, n)."""
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    vals = P(np.concatenate([z, z.conj()], axis=-1))
    return vals * np.exp(-0.5 * lam * np.sum(np.abs(z) ** 2, axis=-1))


# zone bases -------------------------------------------------------------

@dataclass(frozen=True)
class ZoneElement:
    poly: ComplexPolynomial  # Wirtinger form, weighted picture
    level: int  # holomorphic degree p of the leading monomial
    anti: tuple[int, ...]  # antiholomorphic multi-index of the seed
    holo: tuple[int, ...]  # holomorphic multi-index of the seed

    @property
    def magnetic(self) -> int:
        return self.level - sum(self.anti)


@dataclass(frozen=True, eq=False)
class ZoneBasis:
    a: int
    lam: float
    k: int
    degree_max: int
    elements: tuple[ZoneElement, ...]

    @property
    def n(self) -> int:
        return self.k // 2

    def __len__(self) -> int:
        return len(self.elements)

    def values(self, z) -> np.ndarray:
        """Matrix (N, len) of flat basis functions at complex points."""
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        return np.stack([evaluate_flat(e.poly, z, self.lam) for e in self.elements], axis=-1)

    def gaussian_polys(self) -> list[GaussianPoly]:
        return [GaussianPoly(wirtinger_to_real(e.poly), self.lam) for e in self.elements]

    def gram(self) -> np.ndarray:
        m = len(self.elements)
        G = np.zeros((m, m), dtype=complex)
        for i, ei in enumerate(self.elements):
            for j in range(i, m):
                G[i, j] = fock_inner(ei.poly, self.elements[j].poly, self.lam)
                G[j, i] = G[i, j].conjugate()
        return G

    def levels(self) -> np.ndarray:
        return np.array([e.level for e in self.elements])

    def dimension_by_level(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for e in self.elements:
            out[e.level] += 1
        return dict(out)

    def to_json(self) -> dict:
        return {
            "a": self.a, "k": self.k, "lambda": self.lam, "degree_max": self.degree_max,
            "variables": [f"z{j + 1}" for j in range(self.n)] + [f"zbar{j + 1}" for j in range(self.n)],
            "elements": [
                {"level": e.level, "anti": list(e.anti), "holo": list(e.holo),
                 "poly": e.poly.to_json()}
                for e in self.elements
            ],
        }


def _seeds(a: int, n: int, degree_max: int):
    for p in range(degree_max - a + 1):
        for holo in homogeneous_monomials(p, n):
            for anti in homogeneous_monomials(a, n):
                yield p, anti, holo


def _key(e: tuple[int, ...], n: int) -> tuple[int, ...]:
    return tuple(e[j] - e[n + j] for j in range(n))


def _gram_schmidt(a, n, lam, degree_max, previous: list[ZoneElement]) -> list[ZoneElement]:
    # only elements with the same per-coordinate magnetic vector overlap
    by_key: dict[tuple, list[ZoneElement]] = defaultdict(list)
    for el in previous:
        by_key[_key(next(iter(el.poly.terms)), n)].append(el)
    out = []
    for p, anti, holo in _seeds(a, n, degree_max):
        e = tuple(holo) + tuple(anti)
        seed = ComplexPolynomial({e: 1.0}, 2 * n)
        seed = seed / math.sqrt(fock_inner(seed, seed, lam).real)
        key = _key(e, n)
        v = seed
        for _ in range(2):  # re-orthogonalize once for stability
            for el in by_key[key]:
                v = v - fock_inner(v, el.poly, lam) * el.poly
        nrm = math.sqrt(max(fock_inner(v, v, lam).real, 0.0))
        if nrm < 1e-12:
            raise RankError(f"dependent seed z^{holo} zbar^{anti} (pivot {nrm:.3g})")
        el = ZoneElement(v / nrm, p, tuple(anti), tuple(holo))
        by_key[key].append(el)
        out.append(el)
    return out


@lru_cache(maxsize=32)
def _zones_upto(a: int, k: int, lam: float, degree_max: int) -> tuple[tuple[ZoneElement, ...], ...]:
    n = k // 2
    zones: list[tuple[ZoneElement, ...]] = []
    previous: list[ZoneElement] = []
    for b in range(a + 1):
        if degree_max >= b:
            els = _gram_schmidt(b, n, lam, degree_max, previous)
        else:
            els = []
        zones.append(tuple(els))
        previous = previous + els
    return tuple(zones)


def build_zone_basis(a: int, k: int, lam: float, degree_max: int) -> ZoneBasis:
    """Orthonormal basis of zone a, truncated at total degree degree_max.

    Seeds zbar^alpha z^beta (|alpha| = a) are taken in graded lexicographic
    order and orthogonalized against zones 0..a-1 and the earlier seeds.
    """
    if a < 0:
        raise ValueError("zone index must be non-negative")
    if k < 2 or k % 2:
        raise ValueError("k must be a positive even integer")
    if degree_max < a:
        raise ValueError("degree_max must be at least the zone index")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    zones = _zones_upto(a, k, float(lam), degree_max)
    return ZoneBasis(a, float(lam), k, degree_max, zones[a])


def zone_dimension(a: int, k: int, degree_max: int) -> int:
    n = k // 2
    return math.comb(a + n - 1, a) * sum(math.comb(p + n - 1, p) for p in range(degree_max - a + 1))


# closed-form kernels ---------------------------------------------------

def delta_kernel(a: int, k: int, lam: float, z, w) -> np.ndarray:
    """(lam/pi)^{k/2} L_a^{(k/2-1)}(lam|z-w|^2) exp(lam(z.wbar - (|z|^2+|w|^2)/2))."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    n = k // 2
    if z.shape[-1] != n or w.shape[-1] != n:
        raise ValueError(f"points must have {n} complex coordinates")
    zw = np.sum(z * w.conj(), axis=-1)
    nz = np.sum(np.abs(z) ** 2, axis=-1)
    nw = np.sum(np.abs(w) ** 2, axis=-1)
    d2 = np.sum(np.abs(z - w) ** 2, axis=-1)
    return (lam / math.pi) ** n * laguerre(a, n - 1, lam * d2) * np.exp(lam * (zw - 0.5 * (nz + nw)))


def spread_density(a: int, k: int, lam: float, center, w) -> np.ndarray:
    return np.abs(delta_kernel(a, k, lam, center, w)) ** 2


def basis_kernel(basis: ZoneBasis, z, w, count: int | None = None) -> np.ndarray:
    """sum_{i < count} phi_i(z) conj(phi_i(w)) for every pair (z_r, w_s)."""
    fz = basis.values(z)
    fw = basis.values(w)
    if count is not None:
        fz, fw = fz[:, :count], fw[:, :count]
    return fz @ fw.conj().T


def project_onto(basis: ZoneBasis, P: ComplexPolynomial) -> ComplexPolynomial:
    """Orthogonal projection of a weighted-space polynomial onto the basis span."""
    out = ComplexPolynomial({}, P.k)
    for el in basis.elements:
        c = fock_inner(P, el.poly, basis.lam)
        if c != 0:
            out = out + c * el.poly
    return out

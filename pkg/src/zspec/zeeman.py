"""Zeeman operators on polynomial * Gaussian functions and their spectra.

A ``GaussianPoly`` is P(X) exp(-lam |X|^2 / 2).  Every operator here maps
such a function to another one with the same envelope, so all operator
algebra is exact coefficient arithmetic on P.

Sign conventions: J(e_1) = e_2 on each 2-block, z_j = x_{2j-1} + i x_{2j},
and D_J is the derivation along X -> J X, so D_J z = i z.  With these,
h = H exp(-lam|X|^2/2) for H harmonic of bidegree (p, v) satisfies
Box_lam h = -((4p + k) lam + 4 lam^2) h.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .hgroup import EndomorphismSpace, j_of
from .numerics import poly_inner
from .polyalg import ComplexPolynomial, derivation, laplacian_x


@dataclass(frozen=True, eq=False)
class GaussianPoly:
    poly: ComplexPolynomial
    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("envelope rate must be positive")

    @property
    def k(self) -> int:
        return self.poly.k

    def with_poly(self, poly: ComplexPolynomial) -> "GaussianPoly":
        return GaussianPoly(poly, self.lam)

    def __add__(self, other: "GaussianPoly") -> "GaussianPoly":
        self._check(other)
        return self.with_poly(self.poly + other.poly)

    def __sub__(self, other: "GaussianPoly") -> "GaussianPoly":
        self._check(other)
        return self.with_poly(self.poly - other.poly)

    def __mul__(self, c) -> "GaussianPoly":
        return self.with_poly(self.poly * complex(c))

    __rmul__ = __mul__

    def _check(self, other: "GaussianPoly"):
        if not math.isclose(self.lam, other.lam, rel_tol=1e-14):
            raise ValueError("envelope rates differ")

    def laplacian(self) -> "GaussianPoly":
        P, lam = self.poly, self.lam
        r2 = ComplexPolynomial.norm_squared(P.k)
        out = laplacian_x(P) - 2 * lam * P.euler() + (lam ** 2) * (r2 * P) - (P.k * lam) * P
        return self.with_poly(out)

    def times_r2(self) -> "GaussianPoly":
        return self.with_poly(ComplexPolynomial.norm_squared(self.k) * self.poly)

    def derivation(self, A) -> "GaussianPoly":
        """Derivative along X -> A X; A must be skew so the envelope is inert."""
        A = np.asarray(A)
        if np.abs(A + A.T).max() > 1e-12:
            raise ValueError("derivation field must be skew")
        return self.with_poly(derivation(A, self.poly))

    def inner(self, other: "GaussianPoly") -> complex:
        """Flat L^2 inner product <self, other> = int f conj(g) dX."""
        self._check(other)
        return poly_inner(self.poly, other.poly, self.lam)

    def norm(self) -> float:
        return math.sqrt(max(self.inner(self).real, 0.0))

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.poly(X) * np.exp(-0.5 * self.lam * np.sum(X * X, axis=-1))


def _single_j(space: EndomorphismSpace) -> np.ndarray:
    if space.l != 1:
        raise ValueError("box_lambda_apply needs l = 1; use box_gamma_apply")
    return space.basis[0]


def box_lambda_apply(f: GaussianPoly, lam: float, space: EndomorphismSpace,
                     include_constant: bool = True) -> GaussianPoly:
    """(Delta_X + 2i lam D_J - lam^2 |X|^2 - 4 lam^2 [flag]) f."""
    J = _single_j(space)
    if not math.isclose(f.lam, lam, rel_tol=1e-14):
        raise ValueError(f"envelope rate {f.lam} does not match lambda={lam}")
    if f.k != space.k:
        raise ValueError("dimension mismatch")
    out = f.laplacian() + (2j * lam) * f.derivation(J) - (lam ** 2) * f.times_r2()
    if include_constant:
        out = out - (4 * lam ** 2) * f
    return out


def oscillator_rate(Z_gamma) -> float:
    """Envelope rate pi |Z_gamma| that turns Box_gamma into Box_lambda."""
    return math.pi * float(np.linalg.norm(Z_gamma))


def box_gamma_apply(f: GaussianPoly, Z_gamma, space: EndomorphismSpace) -> GaussianPoly:
    """(Delta_X + 2 pi i D_gamma - 4 pi^2 |Z_gamma|^2 (1 + |X|^2/4)) f."""
    Z_gamma = np.asarray(Z_gamma, dtype=float)
    if f.k != space.k:
        raise ValueError("dimension mismatch")
    Jg = j_of(space, Z_gamma)
    z2 = float(Z_gamma @ Z_gamma)
    out = f.laplacian()
    if z2 == 0:
        return out
    out = out + (2j * math.pi) * f.derivation(Jg)
    out = out - (4 * math.pi ** 2 * z2) * (f + 0.25 * f.times_r2())
    return out


def full_laplacian_apply(f: GaussianPoly, Z_gamma, space: EndomorphismSpace) -> GaussianPoly:
    """Group Laplacian on F(X, Z) = f(X) exp(2 pi i <Z_gamma, Z>), reduced to X.

    Applies Delta_X + (1 + |X|^2/4) Delta_Z + sum_alpha d_{Z_alpha} D_alpha
    term by term, with one derivation per basis endomorphism J_alpha.
    """
    xi = 2 * math.pi * np.asarray(Z_gamma, dtype=float).reshape(-1)
    if xi.shape[0] != space.l:
        raise ValueError("Z_gamma has the wrong dimension")
    lap_z = -float(xi @ xi)  # Delta_Z acting on the plane wave
    out = f.laplacian() + lap_z * (f + 0.25 * f.times_r2())
    for alpha, J in enumerate(space.basis):
        if xi[alpha] != 0:
            out = out + (1j * xi[alpha]) * f.derivation(J)
    return out


def magnetic_moment_apply(f: GaussianPoly, space: EndomorphismSpace) -> GaussianPoly:
    """-i D_J f; h^(p, v) has eigenvalue m = p - v."""
    return -1j * f.derivation(_single_j(space))


def eigenfunction(p: int, upsilon: int, H: ComplexPolynomial, lam: float,
                  space: EndomorphismSpace | None = None, tol: float = 1e-10) -> GaussianPoly:
    """H exp(-lam |X|^2/2) for harmonic H of bidegree (p, upsilon)."""
    lap = laplacian_x(H)
    if lap.max_abs() > tol * max(H.max_abs(), 1.0):
        raise ValueError("H is not harmonic")
    if H.is_zero() or H.homogeneous_degree() != p + upsilon:
        raise ValueError(f"H is not homogeneous of degree {p + upsilon}")
    if space is not None:
        m = derivation(_single_j(space), H)
        if not m.allclose(H * (1j * (p - upsilon)), tol):
            raise ValueError(f"H does not have bidegree ({p}, {upsilon})")
    return GaussianPoly(H, lam)


def eigenvalue(p: int, k: int, lam: float, include_constant: bool = True,
               constant_mode: str = "derived") -> float:
    """Box_lambda eigenvalue on holomorphic level p.

    per-paper: -((4p+k) lam + 4k lam^2); derived: -((4p+k) lam + 4 lam^2);
    without the constant both reduce to -(4p+k) lam.
    """
    base = -(4 * p + k) * lam
    if not include_constant:
        return base
    if constant_mode == "per-paper":
        return base - 4 * k * lam ** 2
    if constant_mode == "derived":
        return base - 4 * lam ** 2
    raise ValueError(f"unknown constant_mode {constant_mode!r}")


def level_multiplicity(a: int, p: int, k: int) -> int:
    n = k // 2
    return math.comb(a + n - 1, a) * math.comb(p + n - 1, p)


@dataclass(frozen=True)
class SpectrumLine:
    E: float
    p: int
    upsilon: int | None  # None: all zones (global)
    mult: int | None  # None: infinite multiplicity

    @property
    def azimuthal(self) -> int | None:
        return None if self.upsilon is None else self.p + self.upsilon

    @property
    def magnetic(self) -> int | None:
        return None if self.upsilon is None else self.p - self.upsilon


@dataclass(frozen=True)
class SpectrumTable:
    lines: tuple[SpectrumLine, ...] = field(default_factory=tuple)

    COLUMNS = ("E", "p", "upsilon", "l", "m", "mult")

    def rows(self) -> list[tuple]:
        star = "*"
        return [
            (ln.E, ln.p,
             star if ln.upsilon is None else ln.upsilon,
             star if ln.azimuthal is None else ln.azimuthal,
             star if ln.magnetic is None else ln.magnetic,
             "inf" if ln.mult is None else ln.mult)
            for ln in self.lines
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for row in self.rows():
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def to_json(self) -> list[dict]:
        return [dict(zip(self.COLUMNS, row)) for row in self.rows()]


def spectrum(zone, k: int, lam: float, E_max: float, include_constant: bool = False,
             constant_mode: str = "derived") -> SpectrumTable:
    """Levels with |E| <= E_max, ground state first.

    ``zone`` is a zone index a >= 0 or "global"; the global table lists
    each holomorphic level once with infinite multiplicity.
    """
    if k % 2:
        raise ValueError("k must be even")
    if not math.isfinite(E_max):
        raise ValueError("E_max must be finite")
    glob = zone == "global"
    if not glob and (not isinstance(zone, int) or zone < 0):
        raise ValueError(f"zone must be a non-negative integer or 'global', got {zone!r}")
    lines = []
    p = 0
    while True:
        E = eigenvalue(p, k, lam, include_constant, constant_mode)
        if abs(E) > E_max:
            break
        if glob:
            lines.append(SpectrumLine(E, p, None, None))
        else:
            lines.append(SpectrumLine(E, p, zone, level_multiplicity(zone, p, k)))
        p += 1
    return SpectrumTable(tuple(lines))

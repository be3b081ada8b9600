"""Sparse complex polynomials over x_1..x_k and the X-space operators.

Polynomials are dictionaries from exponent tuples to complex coefficients.
Coefficients smaller than ``DROP_REL`` times the largest coefficient of a
result are discarded, which also removes rounding debris from exact
cancellations such as Theta_Q^2 under the Laplacian.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict
from typing import Iterable, Mapping

import numpy as np

from .hgroup import EndomorphismSpace, j_of

DROP_REL = 1e-15


def _canonical(terms: Mapping[tuple, complex]) -> dict[tuple, complex]:
    if not terms:
        return {}
    scale = max(abs(c) for c in terms.values())
    if scale == 0:
        return {}
    cut = DROP_REL * scale
    return {e: complex(c) for e, c in terms.items() if abs(c) > cut}


class ComplexPolynomial:
    __slots__ = ("k", "terms")

    def __init__(self, terms: Mapping[tuple, complex] | None = None, k: int = 0):
        self.k = k
        self.terms = _canonical(terms or {})
        for e in self.terms:
            if len(e) != k:
                raise ValueError(f"exponent {e} does not match dimension {k}")

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c: complex, k: int) -> "ComplexPolynomial":
        return cls({(0,) * k: c}, k)

    @classmethod
    def variable(cls, i: int, k: int) -> "ComplexPolynomial":
        e = [0] * k
        e[i] = 1
        return cls({tuple(e): 1.0}, k)

    @classmethod
    def linear(cls, coeffs: Iterable[complex]) -> "ComplexPolynomial":
        coeffs = list(coeffs)
        k = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c != 0:
                e = [0] * k
                e[i] = 1
                terms[tuple(e)] = c
        return cls(terms, k)

    @classmethod
    def norm_squared(cls, k: int, variables: Iterable[int] | None = None) -> "ComplexPolynomial":
        """|X|^2 (optionally over a subset of the variables)."""
        idx = range(k) if variables is None else variables
        terms = {}
        for i in idx:
            e = [0] * k
            e[i] = 2
            terms[tuple(e)] = 1.0
        return cls(terms, k)

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, variables: Iterable[int] | None = None) -> int:
        if not self.terms:
            return -1
        if variables is None:
            return max(sum(e) for e in self.terms)
        idx = list(variables)
        return max(sum(e[i] for i in idx) for e in self.terms)

    def homogeneous_degree(self, variables: Iterable[int] | None = None) -> int | None:
        """Common degree of all terms, or None if not homogeneous."""
        idx = list(range(self.k)) if variables is None else list(variables)
        degs = {sum(e[i] for i in idx) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return 0 if not degs else None

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"ComplexPolynomial(k={self.k}, terms={len(self.terms)})"

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "ComplexPolynomial":
        if isinstance(other, ComplexPolynomial):
            if other.k != self.k:
                raise ValueError(f"dimension mismatch: {self.k} vs {other.k}")
            return other
        return ComplexPolynomial.constant(complex(other), self.k)

    def __add__(self, other):
        other = self._coerce(other)
        out = defaultdict(complex, self.terms)
        for e, c in other.terms.items():
            out[e] += c
        return ComplexPolynomial(out, self.k)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial({e: -c for e, c in self.terms.items()}, self.k)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ComplexPolynomial):
            c = complex(other)
            return ComplexPolynomial({e: c * v for e, v in self.terms.items()}, self.k)
        other = self._coerce(other)
        out = defaultdict(complex)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return ComplexPolynomial(out, self.k)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / complex(c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = ComplexPolynomial.constant(1.0, self.k)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "ComplexPolynomial":
        return ComplexPolynomial({e: c.conjugate() for e, c in self.terms.items()}, self.k)

    def allclose(self, other: "ComplexPolynomial", tol: float = 1e-12) -> bool:
        diff = self - other
        scale = max(self.max_abs(), other.max_abs(), 1.0)
        return diff.max_abs() <= tol * scale

    # calculus -----------------------------------------------------------
    def diff(self, i: int) -> "ComplexPolynomial":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return ComplexPolynomial(out, self.k)

    def euler(self, variables: Iterable[int] | None = None) -> "ComplexPolynomial":
        """sum_j x_j d/dx_j, i.e. each term scaled by its degree."""
        idx = list(range(self.k)) if variables is None else list(variables)
        return ComplexPolynomial(
            {e: c * sum(e[i] for i in idx) for e, c in self.terms.items()}, self.k)

    # evaluation ---------------------------------------------------------
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.terms:
            return np.zeros((0, self.k), dtype=int), np.zeros(0, dtype=complex)
        exps = np.array(list(self.terms.keys()), dtype=int).reshape(-1, self.k)
        coefs = np.array(list(self.terms.values()), dtype=complex)
        return exps, coefs

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        exps, coefs = self.arrays()
        if len(coefs) == 0:
            out = np.zeros(pts.shape[0], dtype=complex)
        else:
            out = monomial_values(pts, exps) @ coefs
        return out[0] if single else out

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "k": self.k,
            "terms": [
                {"exps": list(e), "re": c.real, "im": c.imag}
                for e, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "ComplexPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        terms = data["terms"]
        k = data.get("k", len(terms[0]["exps"]) if terms else 0)
        return cls({tuple(t["exps"]): complex(t["re"], t["im"]) for t in terms}, k)


def monomial_values(points: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """Matrix of x^e for every point (rows) and exponent (columns)."""
    points = np.atleast_2d(points)
    dtype = np.result_type(points.dtype, float)
    out = np.ones((points.shape[0], exps.shape[0]), dtype=dtype)
    for j in range(exps.shape[1]):
        col = exps[:, j]
        top = int(col.max()) if col.size else 0
        if top == 0:
            continue
        powers = points[:, j:j + 1] ** np.arange(top + 1)
        out *= powers[:, col]
    return out


def laplacian_x(P: ComplexPolynomial, variables: Iterable[int] | None = None) -> ComplexPolynomial:
    idx = range(P.k) if variables is None else variables
    out = defaultdict(complex)
    for e, c in P.terms.items():
        for i in idx:
            n = e[i]
            if n >= 2:
                ne = list(e)
                ne[i] -= 2
                out[tuple(ne)] += c * n * (n - 1)
    return ComplexPolynomial(out, P.k)


def derivation(A: np.ndarray, P: ComplexPolynomial) -> ComplexPolynomial:
    """Directional derivative along the linear field X -> A X."""
    A = np.asarray(A)
    k = A.shape[0]
    out = defaultdict(complex)
    nz = [(j, m, A[j, m]) for j in range(k) for m in range(k) if A[j, m] != 0]
    for e, c in P.terms.items():
        for j, m, a in nz:
            if e[j]:
                ne = list(e)
                ne[j] -= 1
                ne[m] += 1
                out[tuple(ne)] += c * a * e[j]
    return ComplexPolynomial(out, P.k)


def _check_unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError(f"{name} must be a unit vector (|{name}| = {np.linalg.norm(v):.3g})")
    return v


def theta(Q, V_u, space: EndomorphismSpace) -> ComplexPolynomial:
    """The linear form <Q + i J_{V_u} Q, X>."""
    Q = _check_unit(Q, "Q")
    V_u = _check_unit(V_u, "V_u")
    if Q.shape[0] != space.k:
        raise ValueError(f"Q has dimension {Q.shape[0]}, X-space has {space.k}")
    return ComplexPolynomial.linear(Q + 1j * (j_of(space, V_u) @ Q))


def dv_apply(V, P: ComplexPolynomial, space: EndomorphismSpace) -> ComplexPolynomial:
    if P.k != space.k:
        raise ValueError(f"polynomial dimension {P.k} != X-space dimension {space.k}")
    return derivation(j_of(space, V), P)


def projection_coefficients(n: int, k: int) -> list[float]:
    """B_j with Pi_X = sum_j B_j |X|^{2j} Delta^j on degree-n polynomials.

    B_0 = 1 and each B_{j+1} is fixed by requiring that the Laplacian kill
    the coefficient of |X|^{2j} Delta^{j+1} P, using
    Delta(|X|^{2j} q) = 2j(2j + k - 2 + 2 deg q)|X|^{2j-2} q + |X|^{2j} Delta q.
    """
    B = [1.0]
    for j in range(n // 2):
        d = n - 2 * (j + 1)  # degree of Delta^{j+1} P
        jj = j + 1
        B.append(-B[-1] / (2 * jj * (2 * jj + k - 2 + 2 * d)))
    return B


def harmonic_project(P: ComplexPolynomial, variables: Iterable[int] | None = None) -> ComplexPolynomial:
    """Harmonic component of a homogeneous polynomial.

    ``variables`` restricts the X-space to a subset of the polynomial's
    variables; the remaining ones are treated as parameters.
    """
    idx = list(range(P.k)) if variables is None else list(variables)
    if P.is_zero():
        return P
    n = P.homogeneous_degree(idx)
    if n is None:
        raise ValueError("harmonic_project needs a homogeneous polynomial")
    B = projection_coefficients(n, len(idx))
    r2 = ComplexPolynomial.norm_squared(P.k, idx)
    result = P
    lap = P
    r2j = ComplexPolynomial.constant(1.0, P.k)
    for j in range(1, len(B)):
        lap = laplacian_x(lap, idx)
        if lap.is_zero():
            break
        r2j = r2j * r2
        result = result + B[j] * (r2j * lap)
    return result


def homogeneous_monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree n, in graded lexicographic order."""
    if k == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        for rest in homogeneous_monomials(n - first, k - 1):
            out.append((first,) + rest)
    return out


def monomials_up_to(d: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for n in range(d + 1):
        out.extend(homogeneous_monomials(n, k))
    return out


def harmonic_project_oracle(P: ComplexPolynomial) -> ComplexPolynomial:
    """Brute-force harmonic projection by linear algebra.

    Builds the Laplacian as a matrix from degree-n to degree-(n-2)
    monomials, takes its null space and projects orthogonally in the
    Fischer inner product <x^a, x^b> = a! delta_ab, for which harmonic
    polynomials are orthogonal to |X|^2 * (degree n-2).
    """
    n = P.homogeneous_degree()
    if n is None:
        raise ValueError("oracle needs a homogeneous polynomial")
    k = P.k
    if n < 2:
        return P
    src = homogeneous_monomials(n, k)
    dst = {e: i for i, e in enumerate(homogeneous_monomials(n - 2, k))}
    L = np.zeros((len(dst), len(src)))
    for col, e in enumerate(src):
        for row_e, c in laplacian_x(ComplexPolynomial({e: 1.0}, k)).terms.items():
            L[dst[row_e], col] = c.real
    w = np.array([math.prod(math.factorial(a) for a in e) for e in src], dtype=float)
    sw = np.sqrt(w)
    # null space of L in coordinates y = sqrt(w) * c, where Fischer becomes Euclidean
    _, s, vt = np.linalg.svd(L / sw[None, :])
    rank = int((s > 1e-10 * s.max()).sum()) if s.size else 0
    N = vt[rank:].T
    c = np.array([P.terms.get(e, 0) for e in src], dtype=complex)
    y = N @ (N.T @ (sw * c))
    return ComplexPolynomial({e: v / s_ for e, v, s_ in zip(src, y, sw)}, k)


def substitute_linear(P: ComplexPolynomial, forms: list[ComplexPolynomial]) -> ComplexPolynomial:
    """P(forms[0], ..., forms[k-1]) for polynomials ``forms`` in a common space."""
    if len(forms) != P.k:
        raise ValueError("need one form per variable")
    kk = forms[0].k
    cache: dict[tuple[int, int], ComplexPolynomial] = {}

    def power(i: int, n: int) -> ComplexPolynomial:
        if (i, n) not in cache:
            cache[(i, n)] = forms[i] ** n
        return cache[(i, n)]

    out = ComplexPolynomial({}, kk)
    for e, c in P.terms.items():
        term = ComplexPolynomial.constant(c, kk)
        for i, n in enumerate(e):
            if n:
                term = term * power(i, n)
        out = out + term
    return out

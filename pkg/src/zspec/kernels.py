"""Global and zonal Wiener-Kac / Dirac-Feynman kernels and partition functions.

Both flows are evaluated through one complex time tau: tau = t gives the
Wiener-Kac kernel exp(-t H) and tau = i t the Dirac-Feynman kernel
exp(-i t H), with H = -(1/2) Box_lambda and the constant dropped, so the
holomorphic level p of a block of dimension k_i has energy
(2p + k_i/2) lam_i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .polyalg import ComplexPolynomial, derivation, laplacian_x
from .zones import build_zone_basis, fock_inner, laguerre, to_complex

STANDARD_J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


POLE_TOL = 1e-7  # |lam t / pi - m| below this counts as a pole


class PoleError(ValueError):
    pass


class ContractError(ValueError):
    pass


def standard_j(k: int, sign: int = 1) -> np.ndarray:
    J = np.zeros((k, k))
    for i in range(k // 2):
        J[2 * i:2 * i + 2, 2 * i:2 * i + 2] = sign * STANDARD_J2
    return J


@dataclass(frozen=True, eq=False)
class Block:
    lam: float
    k: int
    J: np.ndarray

    @classmethod
    def standard(cls, lam: float, k: int, sign: int = 1) -> "Block":
        return cls(float(lam), int(k), standard_j(k, sign))


@dataclass(frozen=True, eq=False)
class KernelParams:
    blocks: tuple[Block, ...]
    kind: str = "wk"
    zone: object = 0  # "global" or a zone index
    include_constant: bool = False
    constant_mode: str = "derived"
    offsets: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.kind not in ("wk", "df"):
            raise ValueError(f"kind must be 'wk' or 'df', got {self.kind!r}")
        if self.zone != "global" and not (isinstance(self.zone, int) and self.zone >= 0):
            raise ValueError(f"zone must be 'global' or a non-negative integer, got {self.zone!r}")
        off = [0]
        for b in self.blocks:
            if b.lam <= 0 or b.k <= 0 or b.k % 2:
                raise ValueError("blocks need lam > 0 and even k")
            if b.J.shape != (b.k, b.k) or np.abs(b.J @ b.J + np.eye(b.k)).max() > 1e-12:
                raise ValueError("block J must satisfy J^2 = -id")
            off.append(off[-1] + b.k)
        object.__setattr__(self, "offsets", tuple(off))

    @classmethod
    def single(cls, lam: float, k: int, **kw) -> "KernelParams":
        return cls((Block.standard(lam, k),), **kw)

    @property
    def k(self) -> int:
        return self.offsets[-1]

    @property
    def n(self) -> int:
        return self.k // 2

    def split(self, X: np.ndarray):
        for b, lo, hi in zip(self.blocks, self.offsets[:-1], self.offsets[1:]):
            yield b, X[..., lo:hi]

    def energy_shift(self) -> float:
        """Energy added by the Box constant when include_constant is set."""
        if not self.include_constant:
            return 0.0
        if self.constant_mode == "derived":
            return sum(2 * b.lam ** 2 for b in self.blocks)
        if self.constant_mode == "per-paper":
            return sum(2 * b.k * b.lam ** 2 for b in self.blocks)
        raise ValueError(f"unknown constant_mode {self.constant_mode!r}")


def _pts(params: KernelParams, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.shape[-1] != params.k:
        raise ValueError(f"points need {params.k} coordinates, got {X.shape[-1]}")
    return X


def _pairing(X, Y, J):
    """<X, Y + i J Y> over the last axis."""
    JY = Y @ J.T
    return np.sum(X * Y, axis=-1) + 1j * np.sum(X * JY, axis=-1)


def _tau(kind: str, t) -> complex:
    return complex(t) if kind == "wk" else 1j * t


def _check_time(params: KernelParams, kind: str, t: float):
    if kind == "wk":
        if not t > 0:
            raise ValueError("Wiener-Kac kernels need t > 0")
    else:
        for b in params.blocks:
            r = b.lam * t / math.pi
            if abs(r - round(r)) < POLE_TOL:
                raise PoleError(f"lam*t = {b.lam * t:.12g} is a pole (multiple of pi)")


# global kernels ---------------------------------------------------------

def wk_global(params: KernelParams, t: float, X, Y) -> np.ndarray:
    """Printed global Wiener-Kac kernel (coth cross-section, i<X, JY> phase)."""
    _check_time(params, "wk", t)
    X, Y = _pts(params, X), _pts(params, Y)
    pref = 1.0
    expo = 0.0
    for (b, Xi), (_, Yi) in zip(params.split(X), params.split(Y)):
        lt = b.lam * t
        pref *= (b.lam / (2 * math.pi * math.sinh(lt))) ** (b.k // 2)
        d2 = np.sum((Xi - Yi) ** 2, axis=-1)
        cross = np.sum(Xi * (Yi @ b.J.T), axis=-1)
        expo = expo - b.lam * (0.5 / math.tanh(lt) * d2 + 1j * cross)
    return pref * np.exp(expo) * np.exp(-t * params.energy_shift())


def df_global(params: KernelParams, t: float, X, Y) -> np.ndarray:
    """Printed global Dirac-Feynman kernel; rejects the poles of sin(lam t)."""
    _check_time(params, "df", t)
    X, Y = _pts(params, X), _pts(params, Y)
    pref = 1.0 + 0j
    expo = 0.0
    for (b, Xi), (_, Yi) in zip(params.split(X), params.split(Y)):
        lt = b.lam * t
        pref *= (b.lam / (2j * math.pi * math.sin(lt))) ** (b.k // 2)
        d2 = np.sum((Xi - Yi) ** 2, axis=-1)
        cross = np.sum(Xi * (Yi @ b.J.T), axis=-1)
        expo = expo + 1j * b.lam * (0.5 / math.tan(lt) * d2 - cross)
    return pref * np.exp(expo) * np.exp(-1j * t * params.energy_shift())


# zonal closed forms -----------------------------------------------------

def _zone0(params: KernelParams, tau: complex, X, Y) -> np.ndarray:
    pref = 1.0 + 0j
    expo = 0.0
    for (b, Xi), (_, Yi) in zip(params.split(X), params.split(Y)):
        q = np.exp(-2 * b.lam * tau)
        pref *= (b.lam * np.exp(-b.lam * tau) / math.pi) ** (b.k // 2)
        nn = np.sum(Xi * Xi, axis=-1) + np.sum(Yi * Yi, axis=-1)
        expo = expo + b.lam * (-0.5 * nn + q * _pairing(Xi, Yi, b.J))
    return pref * np.exp(expo) * np.exp(-tau * params.energy_shift())


def _laguerre_arg(params: KernelParams, X, Y):
    s = 0.0
    for (b, Xi), (_, Yi) in zip(params.split(X), params.split(Y)):
        s = s + b.lam * np.sum((Xi - Yi) ** 2, axis=-1)
    return s


def long_term_1(params: KernelParams, tau: complex, X, Y) -> np.ndarray:
    """LT^(1) for general lam_i, k_i:
    sum_i (1 - q_i)(lam_i(|X_i|^2 + |Y_i|^2) - k_i/2 - lam_i(1 + q_i)<X_i, Y_i + iJY_i>)."""
    out = 0.0
    for (b, Xi), (_, Yi) in zip(params.split(X), params.split(Y)):
        q = np.exp(-2 * b.lam * tau)
        nn = np.sum(Xi * Xi, axis=-1) + np.sum(Yi * Yi, axis=-1)
        out = out + (1 - q) * (b.lam * nn - b.k / 2 - b.lam * (1 + q) * _pairing(Xi, Yi, b.J))
    return out


def printed_long_term_1(t: complex, X, Y, J=STANDARD_J2) -> np.ndarray:
    """The long term exactly as displayed (no lam or k dependence)."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    q = np.exp(-2 * t)
    nn = np.sum(X * X, axis=-1) + np.sum(Y * Y, axis=-1)
    return (1 - q) * (nn - 1 - (1 + q) * _pairing(X, Y, J))


def _zonal_closed(a: int, params: KernelParams, tau: complex, X, Y) -> np.ndarray:
    if a >= 2:
        raise NotImplementedError("recursion not published; use eigen-sum")
    d0 = _zone0(params, tau, X, Y)
    if a == 0:
        return d0
    L1 = laguerre(1, params.n - 1, _laguerre_arg(params, X, Y))
    return (L1 + long_term_1(params, tau, X, Y)) * d0


def _eigen_sum_setup(params: KernelParams, a: int, p_max: int):
    if len(params.blocks) != 1:
        raise ValueError("eigen-sum kernels support a single block")
    b = params.blocks[0]
    if np.abs(b.J - standard_j(b.k)).max() > 0:
        raise ValueError("eigen-sum kernels need the standard complex structure")
    return b, build_zone_basis(a, b.k, b.lam, a + p_max)


def _zonal_eigen(a: int, params: KernelParams, tau: complex, X, Y, p_max: int) -> np.ndarray:
    b, basis = _eigen_sum_setup(params, a, p_max)
    X, Y = np.atleast_2d(X), np.atleast_2d(Y)
    energies = (2 * basis.levels() + b.k / 2) * b.lam + params.energy_shift()
    fx = basis.values(to_complex(X))
    fy = basis.values(to_complex(Y))
    return np.sum(fx * np.exp(-tau * energies) * fy.conj(), axis=-1)


DEFAULT_P_MAX = 40


def _zonal(kind: str, a: int, params: KernelParams, t: float, X, Y, method: str, p_max: int):
    _check_time(params, kind, t)
    X, Y = _pts(params, X), _pts(params, Y)
    tau = _tau(kind, t)
    if method == "closed-form":
        if a >= 2:
            raise NotImplementedError("recursion not published; use eigen-sum")
        return _zonal_closed(a, params, tau, X, Y)
    if method == "eigen-sum":
        out = _zonal_eigen(a, params, tau, X, Y, p_max)
        return out if np.ndim(X) > 1 else out[0]
    raise ValueError(f"unknown method {method!r}")


def wk_zonal(a: int, params: KernelParams, t: float, X, Y, method: str = "closed-form",
             p_max: int = DEFAULT_P_MAX) -> np.ndarray:
    return _zonal("wk", a, params, t, X, Y, method, p_max)


def df_zonal(a: int, params: KernelParams, t: float, X, Y, method: str = "closed-form",
             p_max: int = DEFAULT_P_MAX) -> np.ndarray:
    if t == 0:
        X, Y = _pts(params, X), _pts(params, Y)
        return _zonal_closed(a, params, 0j, X, Y) if a < 2 else _zonal_eigen(a, params, 0j, X, Y, p_max)
    return _zonal("df", a, params, t, X, Y, method, p_max)


def dominant_kernel(kind: str, a: int, params: KernelParams, t: float, X, Y) -> np.ndarray:
    """L_a^{(k/2-1)}(sum lam_i |X_i - Y_i|^2) * d^(0)."""
    _check_time(params, kind, t)
    X, Y = _pts(params, X), _pts(params, Y)
    tau = _tau(kind, t)
    return laguerre(a, params.n - 1, _laguerre_arg(params, X, Y)) * _zone0(params, tau, X, Y)


def evaluate(params: KernelParams, t: float, X, Y, method: str = "closed-form") -> np.ndarray:
    """Kernel selected by params.kind and params.zone."""
    if params.zone == "global":
        return (wk_global if params.kind == "wk" else df_global)(params, t, X, Y)
    f = wk_zonal if params.kind == "wk" else df_zonal
    return f(params.zone, params, t, X, Y, method=method)


# partition functions ----------------------------------------------------

def partition(kind: str, a: int, params: KernelParams, t: float) -> complex:
    """C(a + k/2 - 1, a) prod_i exp(-k_i lam_i tau/2) / (1 - exp(-2 lam_i tau))^{k_i/2}."""
    if a == "global":
        raise ContractError("the global kernels are not of trace class")
    _check_time(params, kind, t)
    tau = _tau(kind, t)
    val = complex(np.exp(-tau * params.energy_shift()))
    for b in params.blocks:
        val *= np.exp(-b.k * b.lam * tau / 2) / (1 - np.exp(-2 * b.lam * tau)) ** (b.k // 2)
    # the binomial goes last so that Z^(a) = C(a+n-1, a) * Z^(0) holds bit for bit
    return math.comb(a + params.n - 1, a) * complex(val)


@dataclass(frozen=True)
class EigenSum:
    value: complex
    tail_bound: float
    terms: int


def _block_series(n: int, x: float, tol: float) -> tuple[float, float, int]:
    """sum_p C(p+n-1, p) x^p for 0 < x < 1 with a certified tail bound.

    Consecutive term ratios (p+n)/(p+1) * x decrease in p, so once the
    ratio r is below 1 the tail after term P is at most term_{P+1}/(1-r).
    """
    total = []
    p = 0
    term = 1.0
    while True:
        total.append(term)
        nxt = term * x * (p + n) / (p + 1)
        r = x * (p + 1 + n) / (p + 2)
        if r < 1:
            bound = nxt / (1 - r)
            if bound < tol:
                return math.fsum(total), bound, p + 1
        term = nxt
        p += 1
        if p > 100000:
            raise RuntimeError("eigen-sum did not converge")


def partition_eigen_sum(a: int, params: KernelParams, t: float, tol: float = 1e-14) -> EigenSum:
    """sum over levels of multiplicity * exp(-t E), Wiener-Kac only."""
    _check_time(params, "wk", t)
    lead = math.comb(a + params.n - 1, a) * math.exp(-t * params.energy_shift())
    vals, bounds, terms = [], [], 0
    for b in params.blocks:
        x = math.exp(-2 * b.lam * t)
        s, bd, m = _block_series(b.k // 2, x, tol)
        pref = math.exp(-b.lam * t * b.k / 2)
        vals.append(pref * s)
        bounds.append(pref * bd)
        terms += m
    value = lead * math.prod(vals)
    hi = lead * math.prod(v + e for v, e in zip(vals, bounds))
    return EigenSum(complex(value), hi - value, terms)


def _diag_rate(params: KernelParams, kind: str, t: float) -> complex:
    rates = [b.lam * (1 - np.exp(-2 * b.lam * _tau(kind, t))) for b in params.blocks]
    return min(rates, key=lambda c: c.real)


def trace_quadrature(kernel, params: KernelParams, kind: str, t: float, degree: int | None = None) -> complex:
    """int kernel(X, X) dX on a Gauss-Hermite rule matched to the diagonal decay."""
    rate = _diag_rate(params, kind, t)
    if degree is None:
        degree = numerics.default_order(60 if params.k <= 2 else 40)
    rule = numerics.flat_rule(params.k, rate.real, degree)
    vals = kernel(rule.nodes, rule.nodes)
    return complex(rule.integrate(vals))


# Chapman-Kolmogorov ---------------------------------------------------------

def _ck_rule(params: KernelParams, selector: tuple, t: float, s: float, X, Y, degree: int):
    kind, zone = selector[0], selector[1]
    if zone == "global":
        b = params.blocks[0]
        ct, cs = 1 / math.tanh(b.lam * t), 1 / math.tanh(b.lam * s)
        center = (ct * X + cs * Y) / (ct + cs)
        rate = 0.5 * b.lam * (ct + cs)
        return numerics.flat_rule(params.k, rate, degree, center)
    lam = min(b.lam for b in params.blocks)
    return numerics.flat_rule(params.k, lam, degree, 0.5 * (X + Y) * 0)


def verify_ck(params: KernelParams, selector: tuple, t: float, s: float, samples,
              degree: int | None = None, p_max: int = 30) -> float:
    """Worst relative residual of int d(t,X,U) d(s,U,Y) dU = d(t+s,X,Y).

    selector = (kind, zone[, method]).  The global Dirac-Feynman kernel is
    not integrable in U and is rejected; zonal DF kernels are composed
    through their eigen-sums, using exact Gram inner products of the basis.
    """
    kind, zone = selector[0], selector[1]
    method = selector[2] if len(selector) > 2 else "closed-form"
    if kind == "df" and zone == "global":
        raise ContractError("CK integral is not defined for the global Dirac-Feynman kernel")
    if degree is None:
        degree = numerics.default_order(60)
    worst = 0.0
    if kind == "df":
        return _ck_df_eigen(params, zone, t, s, samples, p_max)
    p = KernelParams(params.blocks, kind, zone, params.include_constant, params.constant_mode)

    def kern(tt, A, B):
        if zone == "global":
            return wk_global(p, tt, A, B)
        return wk_zonal(zone, p, tt, A, B, method=method, p_max=p_max)

    for X, Y in samples:
        X, Y = np.asarray(X, float), np.asarray(Y, float)
        rule = _ck_rule(params, selector, t, s, X, Y, degree)
        U = rule.nodes
        lhs = rule.integrate(kern(t, np.broadcast_to(X, U.shape), U) * kern(s, U, np.broadcast_to(Y, U.shape)))
        rhs = complex(np.asarray(kern(t + s, X[None], Y[None])).ravel()[0])
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst


def _ck_df_eigen(params: KernelParams, zone: int, t: float, s: float, samples, p_max: int) -> float:
    b, basis = _eigen_sum_setup(params, zone, p_max)
    energies = (2 * basis.levels() + b.k / 2) * b.lam + params.energy_shift()
    G = basis.gram()
    worst = 0.0
    for X, Y in samples:
        fx = basis.values(to_complex(np.atleast_2d(X)))[0]
        fy = basis.values(to_complex(np.atleast_2d(Y)))[0]
        left = fx * np.exp(-1j * t * energies)
        right = np.exp(-1j * s * energies) * fy.conj()
        # int phi_i(U)conj(phi_i(X))... composed: sum_ij left_i conj<phi_i, phi_j>... = left^T G^T right
        lhs = left @ G.T @ right
        rhs = np.sum(fx * np.exp(-1j * (t + s) * energies) * fy.conj())
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst


# heat / Schrodinger residuals -------------------------------------------

@dataclass(frozen=True, eq=False)
class ExpPoly:
    """C * P(X) * exp(S(X)) with P, S polynomials in X."""

    C: complex
    P: ComplexPolynomial
    S: ComplexPolynomial

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.C * self.P(X) * np.exp(self.S(X))


def _lin(coeffs) -> ComplexPolynomial:
    return ComplexPolynomial.linear(coeffs)


def kernel_exppoly(params: KernelParams, zone, tau: complex, Y) -> ExpPoly:
    """The closed-form kernel at fixed (tau, Y) as a function of X.

    zone: "global" (printed global kernel continued to complex tau), 0 or 1.
    """
    Y = np.asarray(Y, dtype=float)
    k = params.k
    one = ComplexPolynomial.constant(1.0, k)
    S = ComplexPolynomial({}, k)
    C = complex(np.exp(-tau * params.energy_shift()))
    P = one
    xsq_parts = []
    for b, lo in zip(params.blocks, params.offsets[:-1]):
        idx = range(lo, lo + b.k)
        Yi = Y[lo:lo + b.k]
        r2 = ComplexPolynomial.norm_squared(k, idx)
        yfull = np.zeros(k)
        yfull[lo:lo + b.k] = Yi
        jy = np.zeros(k)
        jy[lo:lo + b.k] = b.J @ Yi
        x_dot_y = _lin(yfull)
        x_dot_jy = _lin(jy)
        yy = float(Yi @ Yi)
        xsq_parts.append((b, r2, x_dot_y, x_dot_jy, yy))
        q = complex(np.exp(-2 * b.lam * tau))
        if zone == "global":
            lt = b.lam * tau
            coth = complex(np.cosh(lt) / np.sinh(lt))
            C *= complex((b.lam / (2 * math.pi * np.sinh(lt))) ** (b.k // 2))
            d2 = r2 - 2 * x_dot_y + yy
            S = S - b.lam * (0.5 * coth * d2 + 1j * x_dot_jy)
        else:
            C *= complex((b.lam * np.exp(-b.lam * tau) / math.pi) ** (b.k // 2))
            S = S + b.lam * (-0.5 * (r2 + yy) + q * (x_dot_y + 1j * x_dot_jy))
    if zone == 1:
        arg = ComplexPolynomial({}, k)
        lt1 = ComplexPolynomial({}, k)
        for b, r2, x_dot_y, x_dot_jy, yy in xsq_parts:
            q = complex(np.exp(-2 * b.lam * tau))
            arg = arg + b.lam * (r2 - 2 * x_dot_y + yy)
            lt1 = lt1 + (1 - q) * (b.lam * (r2 + yy) - b.k / 2
                                   - b.lam * (1 + q) * (x_dot_y + 1j * x_dot_jy))
        P = (params.n - arg) + lt1  # L_1^{(n-1)}(s) = n - s
    elif zone not in ("global", 0):
        raise NotImplementedError("closed forms exist for zones 0 and 1 only")
    return ExpPoly(C, P, S)


def hamiltonian_apply(params: KernelParams, f: ExpPoly) -> ExpPoly:
    """H f = -(1/2)(Delta + 2i sum lam_i D_{J_i} - sum lam_i^2 |X_i|^2) f, exactly."""
    k = params.k
    P, S = f.P, f.S
    grads_P = [P.diff(j) for j in range(k)]
    grads_S = [S.diff(j) for j in range(k)]
    out = laplacian_x(P) + P * laplacian_x(S)
    for j in range(k):
        out = out + 2 * grads_P[j] * grads_S[j] + P * (grads_S[j] * grads_S[j])
    for b, lo in zip(params.blocks, params.offsets[:-1]):
        J = np.zeros((k, k))
        J[lo:lo + b.k, lo:lo + b.k] = b.J
        out = out + (2j * b.lam) * (derivation(J, P) + P * derivation(J, S))
        out = out - (b.lam ** 2) * (ComplexPolynomial.norm_squared(k, range(lo, lo + b.k)) * P)
    out = -0.5 * out + params.energy_shift() * P
    return ExpPoly(f.C, out, S)


def pde_residual(params: KernelParams, selector: tuple, t: float, X, Y, h: float) -> float:
    """Relative residual of (d_t + H) d (WK) or (d_t + iH) d (DF) at (t, X, Y).

    d_t is a central difference with step h; H is applied exactly to the
    closed form.  Residual scale: max(|d|, |H d|).
    """
    kind, zone = selector[0], selector[1]
    X = np.asarray(X, dtype=float)

    def val(tt):
        return kernel_exppoly(params, zone, _tau(kind, tt), Y)(X)[0]

    for tt in (t - h, t, t + h):
        _check_time(params, kind, tt)
    dt = (val(t + h) - val(t - h)) / (2 * h)
    f = kernel_exppoly(params, zone, _tau(kind, t), Y)
    Hf = hamiltonian_apply(params, f)(X)[0]
    gen = Hf if kind == "wk" else 1j * Hf
    scale = max(abs(f(X)[0]), abs(Hf), 1e-300)
    return abs(dt + gen) / scale


# compression and limits -----------------------------------------------------

def compressed_global(params: KernelParams, a: int, t: float, X, Y, degree: int = 60) -> complex:
    """int int delta^(a)(X,U) d_global(t,U,V) delta^(a)(V,Y) dU dV by quadrature (single block)."""
    from .zones import delta_kernel
    b = params.blocks[0]
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    rule = numerics.flat_rule(params.k, b.lam / 2, degree, 0.5 * (X + Y))
    U = rule.nodes
    zX, zY, zU = to_complex(X), to_complex(Y), to_complex(U)
    left = delta_kernel(a, params.k, b.lam, zX[None], zU)  # delta(X, U) for all U
    right = delta_kernel(a, params.k, b.lam, zU, zY[None])  # delta(V, Y) for all V
    glob = KernelParams(params.blocks, "wk", "global")
    Gm = wk_global(glob, t, U[:, None, :], U[None, :, :])  # d(t, U_i, V_j)
    inner = Gm @ (rule.weights * right)
    return complex(rule.integrate(left * inner))


def smeared_limit(params: KernelParams, kind: str, t: float, X, width: float = 1.0) -> tuple[complex, float]:
    """(int d(t, X, Y) f(Y) dY, f(X)) for the Gaussian f(Y) = exp(-|Y|^2/(2 width^2)).

    The Y-integral of global kernel times f is a Gaussian integral with a
    complex symmetric matrix; it is evaluated in closed form.
    """
    X = np.asarray(X, dtype=float)
    k = params.k
    tau = _tau(kind, t)
    A = np.zeros((k, k), dtype=complex)
    bvec = np.zeros(k, dtype=complex)
    c = 0j
    pref = 1.0 + 0j
    for b, lo in zip(params.blocks, params.offsets[:-1]):
        sl = slice(lo, lo + b.k)
        lt = b.lam * tau
        coth = np.cosh(lt) / np.sinh(lt)
        pref *= (b.lam / (2 * math.pi * np.sinh(lt))) ** (b.k // 2)
        Xi = X[sl]
        # -lam/2 coth |X - Y|^2 - i lam <X, J Y>
        A[sl, sl] += 0.5 * b.lam * coth * np.eye(b.k)
        bvec[sl] += b.lam * coth * Xi - 1j * b.lam * (b.J.T @ Xi)
        c += -0.5 * b.lam * coth * (Xi @ Xi)
    A += np.eye(k) / (2 * width ** 2)
    val = pref * numerics.gaussian_integral(A, bvec, c) * np.exp(-tau * params.energy_shift())
    return complex(val), float(np.exp(-(X @ X) / (2 * width ** 2)))

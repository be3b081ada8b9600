import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from zspec import kernels as kr
from zspec.zones import delta_kernel, to_complex

P2 = kr.KernelParams.single(1.0, 2)
P4 = kr.KernelParams.single(0.7, 4)

point2 = st.lists(st.floats(-1.5, 1.5, allow_nan=False), min_size=2, max_size=2).map(np.array)
times = st.floats(0.1, 2.5)


def one(v):
    return complex(np.asarray(v).ravel()[0])


@settings(max_examples=40, deadline=None)
@given(X=point2, Y=point2, t=times, zone=st.sampled_from(["global", 0, 1]))
def test_hermitian_symmetry(X, Y, t, zone):
    p = kr.KernelParams.single(1.0, 2, zone=zone)
    assert_allclose(kr.evaluate(p, t, X[None], Y[None]), np.conj(kr.evaluate(p, t, Y[None], X[None])),
                    rtol=1e-13, atol=1e-300)


@pytest.mark.parametrize("t", [0.25, 1.0, 3.0])
def test_global_wk_at_origin(t):
    z = np.zeros((1, 2))
    assert_allclose(kr.wk_global(P2, t, z, z), 1 / (2 * math.pi * math.sinh(t)), rtol=1e-14)
    # eigen-sum over zones at the origin: zone a contributes (1/pi) e^{-t(2a+1)}
    series = sum(math.exp(-t * (2 * a + 1)) for a in range(200)) / math.pi
    assert_allclose(kr.wk_global(P2, t, z, z), series, rtol=1e-12)


def test_df_pole_rejected():
    z = np.zeros((1, 2))
    for t in (math.pi, 3.14159265, 2 * math.pi):
        with pytest.raises(kr.PoleError):
            kr.df_global(P2, t, z, z)
    with pytest.raises(kr.PoleError):
        kr.df_zonal(0, P2, math.pi, z, z)


def test_wk_needs_positive_time():
    z = np.zeros((1, 2))
    with pytest.raises(ValueError):
        kr.wk_global(P2, 0.0, z, z)


@pytest.mark.parametrize("t", [0.3, 1.1, 2.0])
def test_df_prefactor_is_wick_rotated_wk(t):
    z = np.zeros((1, 4))
    lam = P4.blocks[0].lam
    wk_pref = (lam / (2 * math.pi * cmath.sinh(1j * lam * t))) ** 2
    assert_allclose(kr.df_global(P4, t, z, z), wk_pref, rtol=1e-13)


@pytest.mark.parametrize("a", [0, 1])
def test_df_zonal_diagonal_is_periodic(a):
    lam = 1.3
    p = kr.KernelParams.single(lam, 2)
    X = np.array([[0.4, -0.8]])
    t = 0.37
    for m in (1, 2):
        v1 = abs(one(kr.df_zonal(a, p, t, X, X)))
        v2 = abs(one(kr.df_zonal(a, p, t + m * math.pi / lam, X, X)))
        assert_allclose(v1, v2, rtol=1e-12)


@pytest.mark.parametrize("a", [0, 1])
def test_zonal_at_time_zero_is_delta(a):
    rng = np.random.default_rng(5)
    X, Y = rng.normal(size=(3, 2)), rng.normal(size=(3, 2))
    got = kr.df_zonal(a, P2, 0.0, X, Y)
    assert_allclose(got, delta_kernel(a, 2, 1.0, to_complex(X), to_complex(Y)), rtol=1e-13)


def test_wk_zonal_small_time_tends_to_delta():
    X, Y = np.array([[0.3, 0.1]]), np.array([[-0.2, 0.5]])
    ref = delta_kernel(1, 2, 1.0, to_complex(X), to_complex(Y))
    errs = [abs(one(kr.wk_zonal(1, P2, t, X, Y) - ref)) for t in (1e-2, 1e-3, 1e-4)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-3


def test_long_term_vanishes_at_zero():
    rng = np.random.default_rng(2)
    X, Y = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
    assert_allclose(kr.long_term_1(P4, 0.0, X, Y), 0)


@settings(max_examples=30, deadline=None)
@given(X=point2, Y=point2, t=times)
def test_printed_long_term_is_unit_normalization(X, Y, t):
    assert_allclose(kr.printed_long_term_1(t, X, Y), kr.long_term_1(P2, t, X, Y), rtol=1e-12, atol=1e-13)


@settings(max_examples=20, deadline=None)
@given(X=point2, Y=point2, t=st.floats(0.2, 2.0), a=st.sampled_from([0, 1]),
       kind=st.sampled_from(["wk", "df"]))
def test_closed_form_matches_eigen_sum(X, Y, t, a, kind):
    if kind == "df" and abs(t / math.pi - round(t / math.pi)) < 1e-3:
        return
    f = kr.wk_zonal if kind == "wk" else kr.df_zonal
    closed = one(f(a, P2, t, X[None], Y[None]))
    eig = one(f(a, P2, t, X[None], Y[None], method="eigen-sum", p_max=60))
    assert abs(closed - eig) < 1e-10


def test_zone_two_needs_eigen_sum():
    X = np.zeros((1, 2))
    with pytest.raises(NotImplementedError):
        kr.wk_zonal(2, P2, 0.5, X, X)
    assert np.isfinite(kr.wk_zonal(2, P2, 0.5, X, X + 0.3, method="eigen-sum")).all()


def test_zone1_vanishes_off_origin_pair():
    # the zone-1 kernel at X = 0, Y = (1, 0) is exactly zero: L_1^(0)(1) + LT = 0
    v = one(kr.wk_zonal(1, P2, 0.5, np.zeros((1, 2)), np.array([[1.0, 0.0]])))
    assert v == 0


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_partition_plane(t):
    assert_allclose(kr.partition("wk", 0, P2, t), 1 / (2 * math.sinh(t)), rtol=1e-14)
    series = sum(math.exp(-t * (2 * p + 1)) for p in range(200))
    assert_allclose(kr.partition("wk", 0, P2, t), series, rtol=1e-13)


@pytest.mark.parametrize("k", [2, 4, 6])
def test_partition_binomial_prefactor(k):
    p = kr.KernelParams.single(0.9, k)
    z0 = kr.partition("wk", 0, p, 0.8)
    for a in range(5):
        assert kr.partition("wk", a, p, 0.8) == math.comb(a + k // 2 - 1, a) * z0


def test_partition_decays_and_rejects_global():
    assert abs(kr.partition("wk", 1, P4, 60.0)) < 1e-15
    with pytest.raises(kr.ContractError):
        kr.partition("wk", "global", P2, 1.0)


def test_partition_multi_block_is_a_product():
    blocks = (kr.Block.standard(1.0, 2), kr.Block.standard(0.5, 4))
    p = kr.KernelParams(blocks)
    t = 0.7
    single = kr.partition("wk", 0, kr.KernelParams((blocks[0],)), t) * \
        kr.partition("wk", 0, kr.KernelParams((blocks[1],)), t)
    assert_allclose(kr.partition("wk", 0, p, t), single, rtol=1e-14)
    es = kr.partition_eigen_sum(2, p, t)
    assert_allclose(es.value, kr.partition("wk", 2, p, t), rtol=1e-12)
    assert es.tail_bound < 1e-12


@pytest.mark.parametrize("k,t", [(2, 0.5), (4, 1.0), (4, 2.0)])
def test_partition_eigen_sum_certified(k, t):
    p = kr.KernelParams.single(1.0, k)
    es = kr.partition_eigen_sum(1, p, t)
    exact = kr.partition("wk", 1, p, t)
    assert abs(es.value - exact) <= es.tail_bound + 1e-15 * abs(exact)


def test_partition_df_is_wick_rotated():
    t = 0.6
    assert_allclose(kr.partition("df", 0, P2, t), 1 / (2 * cmath.sinh(1j * t)), rtol=1e-14)


def test_trace_of_dominant_zone1_kernel():
    t = 1.0
    tr = kr.trace_quadrature(lambda A, B: kr.dominant_kernel("wk", 1, P2, t, A, B), P2, "wk", t)
    assert_allclose(tr, 1 / (2 * math.sinh(1.0)), rtol=1e-10)
    rem = kr.trace_quadrature(
        lambda A, B: kr.wk_zonal(1, P2, t, A, B) - kr.dominant_kernel("wk", 1, P2, t, A, B), P2, "wk", t)
    assert abs(rem) < 1e-6


def test_constant_shift_in_partition():
    shifted = kr.KernelParams.single(1.0, 2, include_constant=True)
    assert_allclose(kr.partition("wk", 0, shifted, 1.0) / kr.partition("wk", 0, P2, 1.0), math.exp(-2.0))


SAMPLES = [(np.array([0.3, -0.4]), np.array([0.8, 0.1])), (np.array([-1.0, 0.5]), np.array([0.0, 0.2]))]


@pytest.mark.parametrize("zone", [0, 1, "global"])
def test_chapman_kolmogorov_wk(zone):
    assert kr.verify_ck(P2, ("wk", zone), 0.3, 0.7, SAMPLES) < 1e-6


def test_chapman_kolmogorov_df_zonal_and_global_rejected():
    assert kr.verify_ck(P2, ("df", 0), 0.3, 0.7, SAMPLES) < 1e-6
    with pytest.raises(kr.ContractError):
        kr.verify_ck(P2, ("df", "global"), 0.3, 0.7, SAMPLES)


@pytest.mark.parametrize("kind", ["wk", "df"])
@pytest.mark.parametrize("zone", [0, 1])
def test_pde_residual_second_order(kind, zone):
    X, Y = np.array([0.4, -0.3, 0.2, 0.9]), np.array([-0.5, 0.1, 0.7, 0.0])
    r1 = kr.pde_residual(P4, (kind, zone), 0.7, X, Y, 1e-3)
    r2 = kr.pde_residual(P4, (kind, zone), 0.7, X, Y, 5e-4)
    assert r1 < 1e-5
    assert abs(r1 / r2 - 4) < 0.1


def test_compression_reproduces_zonal_kernel():
    X, Y = np.array([0.2, -0.3]), np.array([0.5, 0.4])
    c = kr.compressed_global(P2, 1, 1.0, X, Y)
    assert abs(c - one(kr.wk_zonal(1, P2, 1.0, X[None], Y[None]))) < 1e-5 * abs(c)


def test_smeared_limit():
    X = np.array([0.3, -0.2])
    errs = []
    for t in (1e-2, 1e-3, 1e-4):
        val, ref = kr.smeared_limit(P2, "wk", t, X)
        errs.append(abs(val - ref))
    assert errs[-1] < 1e-3 and errs[0] > errs[-1]


def test_params_validation():
    with pytest.raises(ValueError):
        kr.KernelParams.single(1.0, 3)
    with pytest.raises(ValueError):
        kr.KernelParams.single(1.0, 2, kind="xx")
    with pytest.raises(ValueError):
        kr.KernelParams((kr.Block(1.0, 2, np.eye(2)),))

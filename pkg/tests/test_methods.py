import numpy as np
import pytest
from scipy.integrate import quad

from hcouple.methods import (
    ComplexMethodConfig,
    MethodSpec,
    complex_method_norm,
    geometric_j_measure,
    h_from_j_measure,
    j_method_norm_direct,
    k_method_norm,
    kj_bijection_check,
    poisson_kernel,
    power_p_function,
    reiterate,
)
from hcouple.pick import (
    ExtendedMeasure,
    PickFunctionRep,
    eval_pick,
    geometric_measure,
    sample_pick_measure,
)
from helpers import random_couple, random_vector

DELTA_0 = ExtendedMeasure(mass_at_zero=1.0)
DELTA_INF = ExtendedMeasure(mass_at_inf=1.0)


def test_method_spec_validation():
    MethodSpec("K", DELTA_0)
    with pytest.raises(ValueError):
        MethodSpec("X", DELTA_0)
    with pytest.raises(ValueError):
        MethodSpec("J", ExtendedMeasure())


def test_k_method_norm_endpoints():
    rng = np.random.default_rng(0)
    lam = random_couple(rng, n_max=5, w_lo=1e-2, w_hi=1e2)
    x = random_vector(rng, lam.size)
    assert k_method_norm(DELTA_INF, lam, x) == pytest.approx(float(np.sum(np.abs(x) ** 2)))
    assert k_method_norm(DELTA_0, lam, x) == pytest.approx(
        float(np.sum(lam * np.abs(x) ** 2)))


def test_k_method_norm_geometric_is_power_norm():
    rng = np.random.default_rng(1)
    for theta in (0.1, 0.5, 0.9):
        lam = random_couple(rng, n_max=6, w_lo=1e-2, w_hi=1e2)
        x = random_vector(rng, lam.size)
        want = float(np.sum(lam**theta * np.abs(x) ** 2))
        got = k_method_norm(geometric_measure(theta), lam, x)
        assert got == pytest.approx(want, rel=1e-7)


def test_k_method_norm_matches_spectral_sum():
    rng = np.random.default_rng(2)
    for _ in range(10):
        mu = sample_pick_measure(rng, with_density=True)
        lam = random_couple(rng, n_max=5, w_lo=1e-2, w_hi=1e2)
        x = random_vector(rng, lam.size)
        direct = k_method_norm(mu, lam, x)
        spectral = float(np.sum(eval_pick(mu, lam) * np.abs(x) ** 2))
        assert direct == pytest.approx(spectral, rel=1e-7)


def test_h_from_j_endpoints():
    assert h_from_j_measure(DELTA_0)(5.0) == pytest.approx(1.0)
    assert h_from_j_measure(DELTA_INF)(5.0) == pytest.approx(5.0)


def test_h_from_j_geometric():
    lams = np.logspace(-3, 3, 33)
    for theta in (0.1, 0.5, 0.9):
        h = h_from_j_measure(geometric_j_measure(theta))
        err = np.max(np.abs(h(lams) - lams**theta) / lams**theta)
        assert err <= 1e-7


def test_j_direct_single_atom():
    nu = ExtendedMeasure(atoms=[[1.0, 1.0]])
    direct, closed, gap, mgap = j_method_norm_direct(nu, [1.0], [1.0])
    assert direct == pytest.approx(1.0)
    assert gap <= 1e-12 and mgap <= 1e-12


def test_j_direct_delta_zero_is_plain_norm():
    nu = ExtendedMeasure(mass_at_zero=1.0)
    direct, closed, gap, _ = j_method_norm_direct(nu, [1.0, 3.0], [1.0, 2.0])
    assert direct == pytest.approx(5.0)
    assert gap <= 1e-12


def test_j_direct_random_atomic():
    rng = np.random.default_rng(3)
    for _ in range(10):
        k = int(rng.integers(1, 4))
        t = np.sort(np.exp(rng.uniform(np.log(0.05), np.log(20), k)))
        m = rng.uniform(0.2, 2.0, k)
        nu = ExtendedMeasure(atoms=np.column_stack((t, m)))
        lam = random_couple(rng, n_max=3, w_lo=1e-1, w_hi=1e1)
        x = random_vector(rng, lam.size)
        direct, closed, gap, mgap = j_method_norm_direct(nu, lam, x)
        assert gap <= 1e-8
        assert mgap <= 1e-8


def test_j_direct_rejects_density():
    with pytest.raises(ValueError):
        j_method_norm_direct(geometric_measure(0.5), [1.0], [1.0])


def test_bijection_geometric_pairs():
    for theta in (0.1, 0.25, 0.5, 0.75, 0.9):
        gap = kj_bijection_check(geometric_measure(theta), geometric_j_measure(theta))
        assert gap <= 1e-6, f"theta={theta}: {gap}"


def test_bijection_endpoint_pairs():
    assert kj_bijection_check(DELTA_INF, DELTA_0) <= 1e-12
    assert kj_bijection_check(DELTA_0, DELTA_INF) <= 1e-12


def test_reiterate_power_arithmetic():
    h = PickFunctionRep(geometric_measure(0.5))
    h0 = PickFunctionRep(geometric_measure(0.2))
    h1 = PickFunctionRep(geometric_measure(0.8))
    phi, _ = reiterate(h, h0, h1)
    lams = np.logspace(-2, 2, 11)
    # Exponent composes affinely: a (1 - theta) + b theta.
    assert np.allclose(phi(lams), lams**0.5, rtol=1e-7)


def test_reiterate_trivial_edges():
    h = PickFunctionRep(geometric_measure(0.3))
    one = PickFunctionRep(ExtendedMeasure(mass_at_inf=1.0))
    ident = PickFunctionRep(ExtendedMeasure(mass_at_zero=1.0))
    phi, _ = reiterate(h, one, ident)
    lams = np.logspace(-2, 2, 9)
    assert np.allclose(phi(lams), h(lams), rtol=1e-12)


def test_reiterate_two_path_norms_agree():
    rng = np.random.default_rng(4)
    for _ in range(10):
        h = PickFunctionRep(sample_pick_measure(rng))
        h0 = PickFunctionRep(sample_pick_measure(rng))
        h1 = PickFunctionRep(sample_pick_measure(rng))
        lam = random_couple(rng, n_max=6, w_lo=1e-2, w_hi=1e2)
        x = random_vector(rng, lam.size)
        _, check = reiterate(h, h0, h1)
        direct, derived, gap = check(lam, x)
        assert gap <= 1e-7


def test_power_p_reduces_at_two():
    mu = geometric_measure(0.4)
    hK = power_p_function(mu, 2.0, "K")
    lams = np.logspace(-2, 2, 9)
    assert np.allclose(hK(lams), eval_pick(mu, lams), rtol=1e-10)
    nu = geometric_j_measure(0.4)
    hJ = power_p_function(nu, 2.0, "J")
    assert np.allclose(hJ(lams), h_from_j_measure(nu)(lams), rtol=1e-10)


def test_power_p_endpoint_limits():
    for p in (1.5, 3.0):
        hK = power_p_function(DELTA_INF, p, "K")
        assert hK(7.0) == pytest.approx(1.0)
        hK0 = power_p_function(DELTA_0, p, "K")
        assert hK0(7.0) == pytest.approx(7.0)
        hJ = power_p_function(DELTA_0, p, "J")
        assert hJ(7.0) == pytest.approx(1.0)
        hJi = power_p_function(DELTA_INF, p, "J")
        assert hJi(7.0) == pytest.approx(7.0)
    with pytest.raises(ValueError):
        power_p_function(DELTA_0, 1.0, "K")


def test_poisson_kernel_positive_and_normalized():
    ts = np.linspace(-30.0, 30.0, 7)
    for theta in (0.3, 0.5, 0.7):
        assert np.all(poisson_kernel(0, theta, ts) > 0)
        assert np.all(poisson_kernel(1, theta, ts) > 0)
        total = sum(
            quad(lambda t, j=j: poisson_kernel(j, theta, t), -np.inf, np.inf)[0]
            for j in (0, 1))
        assert total == pytest.approx(1.0, abs=1e-8)
        line1 = quad(lambda t: poisson_kernel(1, theta, t), -np.inf, np.inf)[0]
        assert line1 == pytest.approx(theta, abs=1e-8)
    # Symmetry across the strip midline.
    assert poisson_kernel(0, 0.5, 1.3) == pytest.approx(poisson_kernel(1, 0.5, -1.3))


def test_complex_method_unit_weight():
    for theta in (0.3, 0.5, 0.7):
        for N in (1, 5, 12):
            assert complex_method_norm(1.0, ComplexMethodConfig(theta, N)) == \
                pytest.approx(1.0, abs=1e-9)


def test_complex_method_converges_from_above():
    vals = [complex_method_norm(4.0, ComplexMethodConfig(0.5, N)) for N in range(2, 13)]
    assert all(vals[i + 1] <= vals[i] + 1e-12 for i in range(len(vals) - 1))
    assert all(v >= 2.0 - 1e-9 for v in vals)
    assert vals[-1] == pytest.approx(2.0, rel=0.01)


def test_complex_method_degree_cap():
    with pytest.raises(ValueError):
        ComplexMethodConfig(0.5, 17)
    with pytest.raises(ValueError):
        ComplexMethodConfig(1.5, 4)


def test_method_spec_accepted_by_norms():
    spec_k = MethodSpec("K", geometric_measure(0.5))
    lam = np.array([1.0, 4.0])
    x = np.array([1.0, 1.0], dtype=complex)
    assert k_method_norm(spec_k, lam, x) == pytest.approx(3.0, rel=1e-7)
    spec_j = MethodSpec("J", geometric_j_measure(0.5))
    assert h_from_j_measure(spec_j)(4.0) == pytest.approx(2.0, rel=1e-7)

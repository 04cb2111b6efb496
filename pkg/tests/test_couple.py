import numpy as np
import pytest

from hcouple.couple import (
    Ep_functional,
    J_functional,
    K_functional,
    Kp_functional,
    TimeGrid,
    WeightVector,
    diagonalize_pair,
    ep_legendre_from_kp,
    k_functional,
    k_oracle,
    kp_legendre_from_ep,
    norm0_sq,
    norm1_sq,
    operator_norms,
    relative_k_bound_check,
)
from helpers import random_couple, random_vector


def test_weight_vector_validation():
    with pytest.raises(ValueError):
        WeightVector(np.array([1.0, -2.0]))
    with pytest.raises(ValueError):
        WeightVector(np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        WeightVector(np.array([2.0, 1.0]), sorted_strict=True)
    WeightVector(np.array([1.0, 2.0]), sorted_strict=True)


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        TimeGrid(np.array([-1.0, 2.0]))
    g = TimeGrid.default()
    assert g.points.size == 65
    assert g.points[0] == pytest.approx(1e-6) and g.points[-1] == pytest.approx(1e6)


def test_k_functional_values():
    assert k_functional(0.0, [1, 1], [1, 2]) == pytest.approx(2.0)
    assert k_functional(1.0, [1], [1]) == pytest.approx(0.5)
    assert k_functional(1.0, [1, 1], [1, 2]) == pytest.approx(7.0 / 6.0)


def test_K_functional_values():
    assert K_functional(1.0, [1], [1]) == pytest.approx(0.5)
    # K saturates at the plain squared norm for large t.
    assert K_functional(1e8, [1, 1], [1, 2]) == pytest.approx(2.0, rel=1e-6)
    assert K_functional(2.0, [1, 0.5], [1, 4]) == pytest.approx(8.0 / 9.0)


def test_K_equals_k_at_reciprocal_time():
    rng = np.random.default_rng(0)
    for _ in range(20):
        lam = random_couple(rng, n_max=6)
        x = random_vector(rng, lam.size)
        t = float(np.exp(rng.uniform(-5, 5)))
        assert K_functional(t, x, lam) == pytest.approx(
            k_functional(1.0 / t, x, lam), rel=1e-13)


def test_oracle_matches_closed_form():
    rng = np.random.default_rng(1)
    for _ in range(30):
        lam = random_couple(rng, n_max=8)
        x = random_vector(rng, lam.size)
        t = float(np.exp(rng.uniform(np.log(1e-6), np.log(1e6))))
        closed = k_functional(t, x, lam)
        oracle = k_oracle(t, x, lam)
        assert oracle == pytest.approx(closed, rel=1e-10)
    assert k_oracle(0.0, [1, 1j], [1, 2]) == pytest.approx(2.0)
    assert k_oracle(1.0, [0, 0], [1, 2]) == 0.0


def test_k_monotone_and_K_concave():
    rng = np.random.default_rng(2)
    grid = TimeGrid.default().points
    for _ in range(10):
        lam = random_couple(rng, n_max=6)
        x = random_vector(rng, lam.size)
        kv = k_functional(grid, x, lam)
        assert np.all(np.diff(kv) <= 1e-12 * np.max(kv))
        Kv = K_functional(grid, x, lam)
        assert np.all(np.diff(Kv) >= -1e-12 * np.max(Kv))
        # Concavity in t: second differences nonpositive.
        second = Kv[2:] - Kv[1:-1] - (Kv[1:-1] - Kv[:-2]) * (
            (grid[2:] - grid[1:-1]) / (grid[1:-1] - grid[:-2]))
        assert np.all(second <= 1e-12 * np.max(Kv))
        bound = np.minimum(norm0_sq(x), grid * norm1_sq(x, lam))
        assert np.all(Kv <= bound * (1 + 1e-12))


def test_k_limits():
    rng = np.random.default_rng(3)
    lam = random_couple(rng, n_max=5)
    x = random_vector(rng, lam.size)
    assert k_functional(0.0, x, lam) == pytest.approx(norm0_sq(x))
    t = 1e8
    assert t * k_functional(t, x, lam) == pytest.approx(norm1_sq(x, lam), rel=1e-5)


def test_J_functional():
    assert J_functional(1.0, [1, 1], [1, 2]) == pytest.approx(
        norm0_sq([1, 1]) + norm1_sq([1, 1], [1, 2]))
    assert J_functional(3.0, [1], [2]) == pytest.approx(7.0)
    assert J_functional(2.0, [0], [5]) == 0.0


def test_Kp_reduces_to_K_at_two():
    rng = np.random.default_rng(4)
    for _ in range(15):
        lam = random_couple(rng, n_max=6)
        x = random_vector(rng, lam.size)
        t = float(np.exp(rng.uniform(-4, 4)))
        assert Kp_functional(t, x, lam, 2.0) == pytest.approx(
            K_functional(t, x, lam), rel=1e-12)
    assert Kp_functional(1.0, [1], [1], 3.0) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        Kp_functional(1.0, [1], [1], 0.5)


def test_Ep_examples():
    # Spending the whole budget on the single coordinate.
    assert Ep_functional(0.25, [1], [1], 2.0) == pytest.approx(0.25)
    # Budget covering the vector: zero error.
    assert Ep_functional(5.0, [1, 1], [1, 2], 2.0) == 0.0
    # No budget: the full weighted norm.
    assert Ep_functional(0.0, [1, 1], [1, 2], 2.0) == pytest.approx(3.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_legendre_pair(p):
    rng = np.random.default_rng(5)
    lam = random_couple(rng, n_max=4, w_lo=1e-2, w_hi=1e2)
    x = random_vector(rng, lam.size)
    for t in np.logspace(-2, 2, 7):
        direct = Kp_functional(t, x, lam, p)
        via_ep = kp_legendre_from_ep(t, x, lam, p)
        assert via_ep == pytest.approx(direct, rel=1e-6, abs=1e-12)
    smax = float(np.sum(np.abs(x) ** p))
    for s in np.linspace(0.05, 0.95, 5) * smax:
        direct = Ep_functional(s, x, lam, p)
        via_kp = ep_legendre_from_kp(s, x, lam, p)
        assert via_kp == pytest.approx(direct, rel=1e-6, abs=1e-10)


def test_K_order_implies_E_order():
    rng = np.random.default_rng(6)
    grid = TimeGrid.default().points
    for _ in range(10):
        lam = random_couple(rng, n_max=5)
        x = random_vector(rng, lam.size)
        y = random_vector(rng, lam.size)
        ratios = K_functional(grid, y, lam) / K_functional(grid, x, lam)
        scale = np.sqrt(0.9 / max(np.max(ratios),
                                  norm0_sq(y) / norm0_sq(x),
                                  norm1_sq(y, lam) / norm1_sq(x, lam)))
        y = y * scale
        smax = float(np.sum(np.abs(x) ** 2))
        for s in np.linspace(0.0, 1.0, 9) * smax:
            assert Ep_functional(s, y, lam, 2.0) <= Ep_functional(s, x, lam, 2.0) + 1e-8


def test_operator_norms():
    assert operator_norms(np.eye(3), [1, 2, 3]) == pytest.approx((1.0, 1.0))
    # Diagonal operators commute with the weight.
    assert operator_norms(np.diag([0.5, 2.0]), [1, 4]) == pytest.approx((2.0, 2.0))
    rng = np.random.default_rng(7)
    lam = random_couple(rng, n_max=6)
    T = random_vector(rng, lam.size**2).reshape(lam.size, lam.size)
    _, n1 = operator_norms(T, lam)
    A = np.diag(np.sqrt(lam))
    ref = np.linalg.norm(A @ T @ np.linalg.inv(A), 2)
    assert n1 == pytest.approx(ref, rel=1e-12)


def test_relative_k_bound_check():
    ok, worst, _ = relative_k_bound_check(np.eye(2), [1, 4], 1.0, 1.0)
    assert ok and worst == pytest.approx(1.0, abs=1e-12)
    ok, worst, _ = relative_k_bound_check(0.3 * np.eye(2), [1, 4], 0.5, 0.5)
    assert ok
    bad = np.eye(2) * 2.0
    ok, worst, witness = relative_k_bound_check(bad, [1, 4], 1.0, 1.0)
    assert not ok and witness is not None


def test_diagonalize_pair_round_trip():
    rng = np.random.default_rng(8)
    n = 4
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    B0 = G @ G.conj().T + n * np.eye(n)
    H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    B1 = H @ H.conj().T + 0.5 * np.eye(n)
    lam, V = diagonalize_pair(B0, B1)
    assert np.all(np.diff(lam) >= 0)
    # V carries the quadratic forms to the canonical pair.
    assert np.allclose(V.conj().T @ B0 @ V, np.eye(n), atol=1e-10)
    assert np.allclose(V.conj().T @ B1 @ V, np.diag(lam), atol=1e-10)

"""Quadratic interpolation methods: K-form, J-form, and the complex method.

Every exact quadratic interpolation norm is an integral of the
K-functional against a positive measure on the extended half-line; the
same norms arise from a J-form minimal-decomposition problem with its
own measure, and the two descriptions are linked by a nontrivial
bijection of measures.  This module evaluates both forms, checks the
bijection, performs Fan-style reiteration, folds the power-p variants,
and computes the complex-method norm by minimizing a Poisson-kernel
quadratic form over polynomials on the unit strip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .couple import as_weights, as_vector, norm0_sq, norm1_sq
from .pick import ExtendedMeasure, PickFunctionRep, eval_pick, geometric_measure, _as_h

__all__ = [
    "MethodSpec",
    "ComplexMethodConfig",
    "k_method_norm",
    "h_from_j_measure",
    "j_method_norm_direct",
    "kj_bijection_check",
    "reiterate",
    "power_p_function",
    "poisson_kernel",
    "complex_method_norm",
    "geometric_j_measure",
]


@dataclass(frozen=True)
class MethodSpec:
    """An exact quadratic method: its kind and representing measure."""

    kind: str  # "K" or "J"
    measure: ExtendedMeasure

    def __post_init__(self):
        if self.kind not in ("K", "J"):
            raise ValueError("kind must be 'K' or 'J'")
        if self.measure.is_zero:
            raise ValueError("method measure must be nonzero")


def geometric_j_measure(theta: float, quad_nodes: int = 256) -> ExtendedMeasure:
    """The J-side measure whose method is lam -> lam^theta.

    Its density c_theta t^(theta-1) / (1+t) is the K-side geometric
    density at exponent 1 - theta (the constant is symmetric in theta).
    """
    return geometric_measure(1.0 - theta, quad_nodes=quad_nodes)


def _as_measure(m) -> ExtendedMeasure:
    return m.measure if isinstance(m, (MethodSpec, PickFunctionRep)) else m


def k_method_norm(measure, lam, x) -> float:
    """Squared K-method norm: integral of (1 + 1/t) K(t, x) d(measure).

    The integrand extends to the endpoints by its limits: the weighted
    squared norm at t = 0 and the plain squared norm at t = inf.
    Accepts an ExtendedMeasure, a MethodSpec, or a PickFunctionRep.
    """
    measure = _as_measure(measure)
    w = as_weights(lam)
    v = as_vector(x, w.size)
    mod2 = np.abs(v) ** 2

    def f(t):
        return np.sum((1.0 + t)[:, None] * w * mod2 / (1.0 + t[:, None] * w), axis=1)

    return float(measure.integrate(f, float(np.sum(w * mod2)), float(np.sum(mod2))))


def h_from_j_measure(measure):
    """The spectral function of the J-method for the given measure.

    h(lam)^-1 integrates (1 + t) / (1 + t lam); the integrand's
    endpoint limits are 1 at t = 0 and 1/lam at t = inf.
    """
    measure = _as_measure(measure)
    if measure.is_zero:
        raise ValueError("J-method measure must be nonzero")

    def h(lam):
        lam_arr = np.asarray(lam, dtype=float)

        def f(t):
            return (1.0 + t) / (1.0 + t * lam_arr[..., None])

        denom = measure.integrate(f, np.ones_like(lam_arr), 1.0 / lam_arr)
        out = 1.0 / denom
        return float(out) if np.isscalar(lam) or lam_arr.ndim == 0 else out

    return h


def _atomic_nodes(measure: ExtendedMeasure):
    """Finite atoms plus endpoint masses as (t, mass) with t in [0, inf]."""
    if measure.density is not None:
        raise ValueError("the direct J-method solver needs an atomic measure")
    t = measure.atoms[:, 0] if measure.atoms.size else np.zeros(0)
    m = measure.atoms[:, 1] if measure.atoms.size else np.zeros(0)
    if measure.mass_at_zero > 0:
        t = np.append(t, 0.0)
        m = np.append(m, measure.mass_at_zero)
    if measure.mass_at_inf > 0:
        t = np.append(t, np.inf)
        m = np.append(m, measure.mass_at_inf)
    if m.size == 0 or np.all(m == 0):
        raise ValueError("J-method measure must carry mass")
    keep = m > 0
    return t[keep], m[keep]


def j_method_norm_direct(measure: ExtendedMeasure, lam, x):
    """J-method norm of an atomic measure, two independent ways.

    The direct route solves, per eigencoordinate, the exact quadratic
    program of distributing x over the atoms u(t_j) with
    sum_j m_j u(t_j) = x minimizing sum_j m_j J(t_j, u(t_j)) / (1+t_j),
    via its KKT system.  The closed route evaluates the spectral
    function of the measure.  Returns (direct, closed, gap,
    minimizer_gap) where minimizer_gap compares the QP solution with
    the known optimal profile.
    """
    w = as_weights(lam)
    v = as_vector(x, w.size)
    t, m = _atomic_nodes(measure)
    k = t.size

    # Per coordinate the QP weight of |u_j|^2 is m_j (1 + t_j lam) / (1 + t_j),
    # with limits m_j at t = 0 and m_j lam at t = inf.
    with np.errstate(invalid="ignore"):
        wj = m[None, :] * (1.0 + t[None, :] * w[:, None]) / (1.0 + t[None, :])
    wj = np.where(np.isinf(t)[None, :], m[None, :] * w[:, None], wj)

    direct = 0.0
    u_sol = np.zeros((w.size, k), dtype=complex)
    for i in range(w.size):
        kkt = np.zeros((k + 1, k + 1))
        kkt[:k, :k] = 2.0 * np.diag(wj[i])
        kkt[:k, k] = m
        kkt[k, :k] = m
        rhs = np.zeros(k + 1, dtype=complex)
        rhs[k] = v[i]
        try:
            sol = np.linalg.solve(kkt, rhs)
        except np.linalg.LinAlgError as exc:
            raise ValueError("singular constraint system: measure has no influence") from exc
        u_sol[i] = sol[:k]
        direct += float(np.sum(wj[i] * np.abs(sol[:k]) ** 2))

    h = h_from_j_measure(measure)
    hw = np.asarray(h(w), dtype=float)
    closed = float(np.sum(hw * np.abs(v) ** 2))
    gap = abs(direct - closed) / max(abs(closed), 1e-300)

    # The optimal profile is phi_t(A) x with
    # phi_t(lam) = (1+t) / (1+t lam) * h(lam).
    with np.errstate(invalid="ignore"):
        phi = (1.0 + t[None, :]) / (1.0 + t[None, :] * w[:, None])
    phi = np.where(np.isinf(t)[None, :], 1.0 / w[:, None], phi)
    u_opt = phi * hw[:, None] * v[:, None]
    scale = float(np.max(np.abs(u_opt))) or 1.0
    minimizer_gap = float(np.max(np.abs(u_sol - u_opt))) / scale
    return direct, closed, gap, minimizer_gap


def kj_bijection_check(rho: ExtendedMeasure, nu: ExtendedMeasure,
                       lam_grid=None) -> float:
    """Worst relative gap in the K-versus-J correspondence identity.

    The two measures represent the same method exactly when the
    K-side spectral function equals the J-side one pointwise.
    """
    if lam_grid is None:
        lam_grid = np.logspace(-3, 3, 65)
    lam_grid = np.asarray(lam_grid, dtype=float)
    lhs = eval_pick(rho, lam_grid)
    rhs = h_from_j_measure(nu)(lam_grid)
    return float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))


def reiterate(h, h0, h1):
    """Fan reiteration: the method h applied to the couple (H_h0, H_h1).

    Returns (phi, check) where phi(lam) = h0(lam) h(h1(lam)/h0(lam)) is
    the composite spectral function, and check(lam, x) evaluates the
    reiterated norm both as the direct spectral sum of phi and as the
    K-method norm on the derived couple (weights h1/h0, base change by
    sqrt(h0)), returning (direct, derived, relative gap).
    """
    h = _as_h(h)
    h0 = _as_h(h0)
    h1 = _as_h(h1)

    def phi(lam):
        lam = np.asarray(lam, dtype=float)
        b0 = np.asarray(h0(lam), dtype=float)
        b1 = np.asarray(h1(lam), dtype=float)
        return b0 * np.asarray(h(b1 / b0), dtype=float)

    def check(lam, x):
        if not isinstance(h, PickFunctionRep):
            raise TypeError("the reiteration check needs a measure-backed outer function")
        w = as_weights(lam)
        v = as_vector(x, w.size)
        b0 = np.asarray(h0(w), dtype=float)
        b1 = np.asarray(h1(w), dtype=float)
        direct = float(np.sum(phi(w) * np.abs(v) ** 2))
        derived = k_method_norm(h.measure, b1 / b0, np.sqrt(b0) * v)
        gap = abs(direct - derived) / max(abs(direct), 1e-300)
        return direct, derived, gap

    return phi, check


def power_p_function(measure: ExtendedMeasure, p: float, mode: str):
    """Spectral function of the power-p method for the given measure.

    mode "K" folds the t-factor of the power-p K-functional into the
    integrand:
        h(lam) = integral (1 + t^(1/(p-1)))^(p-1) lam
                          / (1 + (t lam)^(1/(p-1)))^(p-1) d(measure),
    which reduces to the Pick kernel at p = 2.  mode "J" inverts
        h(lam)^(-1/(p-1)) = integral ((1+t) / (1+t lam))^(1/(p-1)) d(measure).
    """
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    if mode not in ("K", "J"):
        raise ValueError("mode must be 'K' or 'J'")
    q = 1.0 / (p - 1.0)

    if mode == "K":
        def h(lam):
            lam_arr = np.asarray(lam, dtype=float)

            def f(t):
                with np.errstate(over="ignore"):
                    num = np.exp((p - 1.0) * np.log1p(t**q)) * lam_arr[..., None]
                    den = np.exp((p - 1.0) * np.log1p((t * lam_arr[..., None]) ** q))
                return num / den

            out = measure.integrate(f, lam_arr, np.ones_like(lam_arr))
            return float(out) if np.isscalar(lam) or lam_arr.ndim == 0 else out

        return h

    def h(lam):
        lam_arr = np.asarray(lam, dtype=float)

        def f(t):
            return ((1.0 + t) / (1.0 + t * lam_arr[..., None])) ** q

        denom = measure.integrate(f, np.ones_like(lam_arr), (1.0 / lam_arr) ** q)
        out = denom ** (-(p - 1.0))
        return float(out) if np.isscalar(lam) or lam_arr.ndim == 0 else out

    return h


# ---------------------------------------------------------------------------
# the complex method on the unit strip


def poisson_kernel(j: int, theta: float, t):
    """Harmonic measure density of the strip boundary line Re z = j.

    P_j(theta, t) = e^(-pi t) sin(theta pi)
                    / (sin^2(theta pi) + (cos(theta pi) - (-1)^j e^(-pi t))^2),
    evaluated stably on both tails.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    if j not in (0, 1):
        raise ValueError("j must be 0 or 1")
    t = np.asarray(t, dtype=float)
    s = np.sin(theta * np.pi)
    c = np.cos(theta * np.pi)
    sign = -1.0 if j else 1.0
    # For t < 0 multiply numerator and denominator by e^(2 pi t).
    e_neg = np.exp(-np.pi * np.abs(t))
    pos = e_neg * s / (s**2 + (c - sign * e_neg) ** 2)
    neg = e_neg * s / (s**2 * e_neg**2 + (c * e_neg - sign) ** 2)
    out = np.where(t >= 0, pos, neg)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ComplexMethodConfig:
    """Strip parameter, polynomial degree, and quadrature resolution."""

    theta: float
    poly_degree: int = 12
    quad_nodes: int = 512

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0, 1)")
        if self.poly_degree < 1:
            raise ValueError("poly_degree must be at least 1")
        if self.poly_degree > 16:
            raise ValueError("degrees beyond 16 exhaust the Gram conditioning; capped")


def _strip_quadrature(nodes: int):
    """Quadrature for integrals of e^(-pi |t|)-decaying functions on R.

    Gauss-Legendre in u after the inverse-tanh substitution
    t = 4 atanh(u); the kernels' decay turns the endpoints into
    high-order zeros.
    """
    u, wu = np.polynomial.legendre.leggauss(nodes)
    t = 4.0 * np.arctanh(u)
    w = wu * 4.0 / (1.0 - u**2)
    return t, w


def complex_method_norm(lam: float, cfg: ComplexMethodConfig) -> float:
    """Degree-capped complex-method value h_N(lam) for a scalar weight.

    Minimizes the boundary quadratic form
        integral |f(it)|^2 P_0 dt + lam * integral |f(1+it)|^2 P_1 dt
    over polynomials of degree at most N with f(theta) = 1.  The value
    decreases in N toward lam^theta.  Vector norms follow by summing
    h_N over the eigencoordinates.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    theta = cfg.theta
    N = cfg.poly_degree
    t, wq = _strip_quadrature(cfg.quad_nodes)
    p0 = poisson_kernel(0, theta, t)
    p1 = poisson_kernel(1, theta, t)

    # Vandermonde of the monomials on the two boundary lines.
    z0 = 1j * t
    z1 = 1.0 + 1j * t
    V0 = z0[:, None] ** np.arange(N + 1)
    V1 = z1[:, None] ** np.arange(N + 1)
    G0 = (V0 * (wq * p0)[:, None]).conj().T @ V0
    G1 = (V1 * (wq * p1)[:, None]).conj().T @ V1
    G = G0 + lam * G1
    G = (G + G.conj().T) / 2.0

    # Diagonal equilibration before the Cholesky solve.
    d = np.sqrt(np.real(np.diag(G)))
    Gh = G / np.outer(d, d)
    v = theta ** np.arange(N + 1) / d
    try:
        cf = cho_factor(Gh)
        y = cho_solve(cf, v)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(
            f"Gram matrix not numerically positive at degree {N}") from exc
    quad = float(np.real(np.vdot(v, y)))
    if quad <= 0:
        raise ArithmeticError("Gram solve lost positivity; reduce the degree")
    return 1.0 / quad

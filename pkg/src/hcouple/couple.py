"""Finite-dimensional weighted Hilbert couples and their functionals.

A couple is the pair (l2^n, l2^n(lam)) of the plain and weighted
sequence spaces over C^n, identified by its weight vector lam > 0
(the eigenvalues of the operator A = diag(lam) in the joint eigenbasis).
This module computes the quadratic K- and J-functionals, the
reparametrized k-functional, the power-p variants K_p and E_p, and the
two operator norms of a matrix acting on the couple.

Every functional has a closed form in the eigenbasis; the `k_oracle`
and `Ep_functional` routines instead run independent numeric
minimizations so the closed forms can be cross-checked against them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "WeightVector",
    "TimeGrid",
    "as_weights",
    "as_vector",
    "as_operator",
    "norm0_sq",
    "norm1_sq",
    "k_functional",
    "K_functional",
    "k_oracle",
    "K_oracle",
    "Kp_functional",
    "Ep_functional",
    "J_functional",
    "kp_legendre_from_ep",
    "ep_legendre_from_kp",
    "operator_norms",
    "relative_k_bound_check",
    "diagonalize_pair",
]


@dataclass(frozen=True)
class WeightVector:
    """Positive weights lam identifying the couple l2^n(lam).

    ``sorted_strict`` asserts the values are strictly increasing, which
    is what the contraction construction requires (unit multiplicity).
    """

    values: np.ndarray
    sorted_strict: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("weights must be a nonempty 1-D array")
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0.0):
            raise ValueError("weights must be finite and strictly positive")
        if self.sorted_strict and np.any(np.diff(vals) <= 0.0):
            raise ValueError("weights are not strictly increasing")

    @property
    def n(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class TimeGrid:
    """Discretization of the time half-line used by domination checks.

    The grid holds finitely many strictly increasing positive points;
    the flags add the closed-form limits at t=0 and t=infinity, which
    are evaluated analytically rather than by large/small surrogates.
    """

    points: np.ndarray = field(default_factory=lambda: _default_points())
    include_zero_limit: bool = True
    include_inf_limit: bool = True

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("grid must be a nonempty 1-D array")
        if not np.all(np.isfinite(pts)) or np.any(pts <= 0.0):
            raise ValueError("grid points must be finite and positive")
        if np.any(np.diff(pts) <= 0.0):
            raise ValueError("grid points must be strictly increasing")

    @staticmethod
    def default() -> "TimeGrid":
        return TimeGrid()


def _default_points() -> np.ndarray:
    # 65 log-spaced points; K(t,x) is rational in t with poles on the
    # negative axis, so log spacing resolves every transition scale of
    # weights within [1e-6, 1e6].
    return np.logspace(-6.0, 6.0, 65)


def as_weights(lam) -> np.ndarray:
    """Coerce lam (WeightVector or array_like) to a validated array."""
    if isinstance(lam, WeightVector):
        return lam.values
    return WeightVector(np.asarray(lam, dtype=float)).values


def as_vector(x, n: int | None = None) -> np.ndarray:
    """Coerce a couple element to a finite complex 1-D array."""
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1:
        raise ValueError("couple vector must be 1-D")
    if not np.all(np.isfinite(v)):
        raise ValueError("couple vector has non-finite entries")
    if n is not None and v.size != n:
        raise ValueError(f"dimension mismatch: vector has {v.size} entries, couple has {n}")
    return v


def as_operator(T, n: int | None = None) -> np.ndarray:
    """Coerce an operator to a finite complex square matrix."""
    M = np.asarray(T, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("operator must be a square matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError("operator has non-finite entries")
    if n is not None and M.shape[0] != n:
        raise ValueError(f"dimension mismatch: operator is {M.shape[0]}x{M.shape[0]}, couple has {n}")
    return M


def norm0_sq(x) -> float:
    """Squared norm of the unweighted space l2^n."""
    v = as_vector(x)
    return float(np.sum(np.abs(v) ** 2))


def norm1_sq(x, lam) -> float:
    """Squared norm of the weighted space l2^n(lam)."""
    w = as_weights(lam)
    v = as_vector(x, w.size)
    return float(np.sum(w * np.abs(v) ** 2))


def k_functional(t, x, lam):
    """Reparametrized k-functional k(t, x) = sum_i lam_i |x_i|^2 / (t + lam_i).

    Equals K(1/t, x) for t > 0; at t = 0 it is the squared l2 norm and
    t*k(t) tends to the squared weighted norm as t grows.  Accepts
    scalar or array t and returns matching shape.
    """
    w = as_weights(lam)
    v = as_vector(x, w.size)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0) or not np.all(np.isfinite(t_arr)):
        raise ValueError("t must be finite and >= 0")
    mod2 = np.abs(v) ** 2
    out = np.sum(w * mod2 / (t_arr[..., None] + w), axis=-1)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def K_functional(t, x, lam):
    """Quadratic K-functional K(t, x) = sum_i t lam_i |x_i|^2 / (1 + t lam_i)."""
    w = as_weights(lam)
    v = as_vector(x, w.size)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0.0) or not np.all(np.isfinite(t_arr)):
        raise ValueError("t must be finite and > 0")
    mod2 = np.abs(v) ** 2
    tw = t_arr[..., None] * w
    out = np.sum(tw * mod2 / (1.0 + tw), axis=-1)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def _golden_min(f, a: float, b: float, tol: float = 1e-13) -> float:
    """Golden-section minimizer of a scalar unimodal function on [a, b]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def K_oracle(t: float, x, lam) -> float:
    """K(t, x) by direct minimization over decompositions x = x0 + x1.

    Deliberately avoids the closed form: for each coordinate the optimal
    x0_i is collinear with x_i (splitting off any orthogonal component
    increases both terms), leaving a 1-D convex problem per coordinate
    that is solved by golden section.
    """
    w = as_weights(lam)
    v = as_vector(x, w.size)
    if not (np.isfinite(t) and t > 0.0):
        raise ValueError("t must be finite and > 0")
    total = 0.0
    for wi, vi in zip(w, v):
        m2 = abs(vi) ** 2
        if m2 == 0.0:
            continue

        def cost(u, c=t * wi):
            return u * u + c * (1.0 - u) ** 2

        u_star = _golden_min(cost, -0.5, 1.5)
        total += m2 * cost(u_star)
    return total


def k_oracle(t: float, x, lam) -> float:
    """k(t, x) by direct minimization (independent of the closed form)."""
    if t < 0.0 or not np.isfinite(t):
        raise ValueError("t must be finite and >= 0")
    if t == 0.0:
        # The weight on the complement blows up, forcing x1 = 0.
        return norm0_sq(x)
    return K_oracle(1.0 / t, x, lam)


def J_functional(t: float, x, lam) -> float:
    """J(t, x) = |x|_0^2 + t |x|_1^2 on the intersection."""
    if not (np.isfinite(t) and t > 0.0):
        raise ValueError("t must be finite and > 0")
    return norm0_sq(x) + t * norm1_sq(x, lam)


def Kp_functional(t: float, x, lam, p: float) -> float:
    """Power-p K-functional of the weighted lp couple.

    K_p(t, x) = sum_i |x_i|^p * t lam_i / (1 + (t lam_i)^(1/(p-1)))^(p-1).
    Reduces to K_functional at p = 2; the p = 1 limit is
    sum_i |x_i| min(1, t lam_i).
    """
    if p < 1.0:
        raise ValueError("p must be >= 1")
    w = as_weights(lam)
    v = as_vector(x, w.size)
    if not (np.isfinite(t) and t > 0.0):
        raise ValueError("t must be finite and > 0")
    modp = np.abs(v) ** p
    tw = t * w
    if p == 1.0:
        return float(np.sum(modp * np.minimum(1.0, tw)))
    q = 1.0 / (p - 1.0)
    # (1 + z^q)^(p-1) computed in log space to survive huge t*lam.
    denom = np.exp((p - 1.0) * np.log1p(tw**q))
    return float(np.sum(modp * tw / denom))


def Ep_functional(s: float, x, lam, p: float) -> float:
    """E_p(s, x) = inf { |x - x0|_1^p : |x0|_0^p <= s } by numeric minimization.

    The budget s is allocated across coordinates by solving the convex
    program with a KKT multiplier found by bisection; no formula from
    the K_p side is reused, so this is a valid oracle for the Legendre
    relations.
    """
    if p < 1.0:
        raise ValueError("p must be >= 1")
    if s < 0.0 or not np.isfinite(s):
        raise ValueError("s must be finite and >= 0")
    w = as_weights(lam)
    v = as_vector(x, w.size)
    mod = np.abs(v)
    modp = mod**p
    total = float(np.sum(modp))
    if s >= total:
        return 0.0
    if s == 0.0:
        return float(np.sum(w * modp))
    if p == 1.0:
        # Greedy: spend the budget on coordinates with the largest weight.
        order = np.argsort(-w)
        rem, val = s, 0.0
        for i in order:
            take = min(rem, modp[i])
            val += w[i] * (modp[i] - take)
            rem -= take
        return float(val)

    q = 1.0 / (p - 1.0)

    def spend(mu: float) -> float:
        # Per-coordinate optimal budget for multiplier mu.
        r = (mu / w) ** q
        return float(np.sum(modp / (1.0 + r) ** p))

    # spend is decreasing in mu; bracket the root of spend(mu) = s.
    lo, hi = 1e-300, 1.0
    while spend(hi) > s:
        hi *= 4.0
    lo = hi
    while spend(lo) < s:
        lo /= 4.0
        if lo < 1e-280:
            break
    for _ in range(200):
        mid = np.sqrt(lo * hi)
        if spend(mid) > s:
            lo = mid
        else:
            hi = mid
    mu = np.sqrt(lo * hi)
    r = (mu / w) ** q
    si = modp / (1.0 + r) ** p
    return float(np.sum(w * (mod - si ** (1.0 / p)) ** p))


def kp_legendre_from_ep(t: float, x, lam, p: float) -> float:
    """inf_s { s + t E_p(s) } computed by golden section over s.

    The objective is convex in s, so the line search recovers the true
    infimum; this is the Legendre route to K_p.
    """
    w = as_weights(lam)
    v = as_vector(x, w.size)
    s_max = float(np.sum(np.abs(v) ** p))
    if s_max == 0.0:
        return 0.0

    def obj(s):
        return s + t * Ep_functional(s, v, w, p)

    # Coarse log scan for a bracket, then golden refinement.
    scan = np.concatenate(([0.0], np.geomspace(s_max * 1e-12, s_max, 121)))
    vals = [obj(s) for s in scan]
    i = int(np.argmin(vals))
    lo = scan[max(i - 1, 0)]
    hi = scan[min(i + 1, len(scan) - 1)]
    s_star = _golden_min(obj, lo, hi, tol=1e-13 * max(s_max, 1.0))
    return min(obj(s_star), vals[i])


def ep_legendre_from_kp(s: float, x, lam, p: float) -> float:
    """sup_t { (K_p(t) - s) / t } computed by scan plus golden section."""
    w = as_weights(lam)
    v = as_vector(x, w.size)

    def neg_obj(logt):
        t = np.exp(logt)
        return -(Kp_functional(t, v, w, p) - s) / t

    grid = np.linspace(np.log(1e-12 / np.max(w)), np.log(1e12 / np.min(w)), 241)
    vals = [neg_obj(g) for g in grid]
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    t_star = _golden_min(neg_obj, lo, hi, tol=1e-13)
    return max(-neg_obj(t_star), -vals[i], 0.0)


def operator_norms(T, lam) -> tuple[float, float]:
    """Return (|T|, |T|_A): the l2 -> l2 and l2(lam) -> l2(lam) norms.

    The weighted norm is the spectral norm of A^(1/2) T A^(-1/2) with
    A = diag(lam).
    """
    w = as_weights(lam)
    M = as_operator(T, w.size)
    n0 = float(np.linalg.norm(M, 2))
    half = np.sqrt(w)
    n1 = float(np.linalg.norm((half[:, None] * M) / half[None, :], 2))
    return n0, n1


def relative_k_bound_check(T, lam, M0: float, M1: float, grid: TimeGrid | None = None,
                           trials: int = 50, seed: int = 0, tol: float = 1e-9):
    """Check K(t, Tx) <= M0^2 K(M1^2 t / M0^2, x) over the grid and random x.

    Returns (passed, worst_ratio, witness); witness is the first
    violating (t, x) pair or None.  The worst ratio is the maximum of
    K(t,Tx) / (M0^2 K(M1^2 t/M0^2, x)) over all samples.
    """
    w = as_weights(lam)
    M = as_operator(T, w.size)
    if M0 <= 0 or M1 <= 0:
        raise ValueError("M0 and M1 must be positive")
    grid = grid or TimeGrid.default()
    rng = np.random.default_rng(seed)
    n = w.size
    xs = [np.eye(n)[i] + 0j for i in range(n)]
    for _ in range(trials):
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        xs.append(z / np.linalg.norm(z))
    shift = (M1 / M0) ** 2
    worst = 0.0
    witness = None
    for x in xs:
        Tx = M @ x
        lhs = K_functional(grid.points, Tx, w)
        rhs = (M0**2) * K_functional(grid.points * shift, x, w)
        # Closed-form limits: t -> 0 gives the weighted norms scaled by
        # M1^2, t -> inf the plain norms scaled by M0^2.
        lhs0, rhs0 = norm1_sq(Tx, w), (M1**2) * norm1_sq(x, w)
        lhs_inf, rhs_inf = norm0_sq(Tx), (M0**2) * norm0_sq(x)
        if grid.include_zero_limit:
            lhs = np.append(lhs, lhs0)
            rhs = np.append(rhs, rhs0)
        if grid.include_inf_limit:
            lhs = np.append(lhs, lhs_inf)
            rhs = np.append(rhs, rhs_inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0), np.where(lhs > 0, np.inf, 0.0))
        r = float(np.max(ratios))
        if r > worst:
            worst = r
            if r > 1.0 + tol and witness is None:
                idx = int(np.argmax(ratios))
                t_w = grid.points[idx] if idx < grid.points.size else (0.0 if idx == grid.points.size else np.inf)
                witness = (t_w, x.copy())
    return worst <= 1.0 + tol, worst, witness


def diagonalize_pair(B0, B1) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a couple given by Gram matrices (B0, B1) to weight form.

    B0 and B1 are the Hermitian positive matrices of the two squared
    norms in a common basis.  Returns (lam, V) with lam increasing such
    that the change of variables y = V^-1 x carries the couple to
    (l2^n, l2^n(lam)); columns of V are the B0-orthonormal eigenvectors.
    """
    B0 = np.asarray(B0, dtype=complex)
    B1 = np.asarray(B1, dtype=complex)
    L = np.linalg.cholesky(B0)
    Linv = np.linalg.inv(L)
    C = Linv @ B1 @ Linv.conj().T
    lam, U = np.linalg.eigh((C + C.conj().T) / 2.0)
    if np.any(lam <= 0):
        raise ValueError("the pair is not a regular couple (B1 not positive on the basis)")
    V = Linv.conj().T @ U
    return lam, V

"""Positive regular Pick functions: measure representations and tests.

A function of this class has the form

    h(lam) = m_inf + m_0 lam + integral (1+t) lam / (1 + t lam) drho(t)

for a positive measure rho on the extended half-line.  The module
represents such measures finitely (endpoint masses, atoms, and a named
density with an attached quadrature rule), evaluates and fits them, and
provides seeded randomized verifiers for the matrix-order properties
that characterize the class: exact interpolation, matrix monotonicity,
matrix concavity, and their two-variable analogues.

The randomized verifiers are one-sided: a pass is evidence that the
necessary inequalities hold on the sampled instances, while only a
feasible measure fit certifies membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls
from scipy.special import roots_jacobi

from .couple import as_weights

__all__ = [
    "ExtendedMeasure",
    "PickFunctionRep",
    "TwoVarMeasure",
    "geometric_measure",
    "geometric_constant",
    "sample_pick_measure",
    "eval_pick",
    "quadratic_norm_check",
    "FitResult",
    "fit_pick_measure",
    "exact_interp_randomized_test",
    "typeH_profile",
    "typeH_bound_check",
    "exponent_envelope_check",
    "dual_transforms",
    "donoghue_transform",
    "matrix_monotone_test",
    "matrix_concavity_test",
    "hansen_check",
    "two_var_apply",
    "two_var_interp_test",
    "pick_kernel",
    "psd_slack",
]


def geometric_constant(theta: float) -> float:
    """Normalization making the power function come out exactly.

    The density t^(-theta) / (1+t) integrates the Pick kernel to
    lam^theta * pi / sin(theta pi), so the constant is its reciprocal.
    """
    return float(np.sin(theta * np.pi) / np.pi)


def pick_kernel(t, lam):
    """(1+t) lam / (1 + t lam) with the endpoint limits lam and 1.

    Broadcasts t against lam; t may contain 0 and inf.
    """
    t = np.asarray(t, dtype=float)
    lam = np.asarray(lam, dtype=float)
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        val = (1.0 + t) * lam / (1.0 + t * lam)
    ones = np.ones(np.broadcast(t, lam).shape)
    return np.where(np.isinf(t), ones, val)


@dataclass(frozen=True)
class ExtendedMeasure:
    """Positive measure on [0, inf]: endpoint masses, atoms, a density.

    The only named density is geometric(theta), meaning
    c_theta t^(-theta) / (1+t) dt with c_theta = sin(theta pi) / pi; it
    carries a Gauss-Jacobi rule (exact for the endpoint singularities
    after the substitution t = u/(1-u)) discretizing it into
    `quad_nodes` effective atoms.
    """

    mass_at_zero: float = 0.0
    mass_at_inf: float = 0.0
    atoms: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    density: tuple[str, float] | None = None
    quad_nodes: int = 256

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "atoms", atoms)
        if self.mass_at_zero < 0 or self.mass_at_inf < 0:
            raise ValueError("endpoint masses must be nonnegative")
        if atoms.size:
            if np.any(atoms[:, 0] <= 0) or np.any(~np.isfinite(atoms[:, 0])):
                raise ValueError("atom locations must be finite and positive")
            if np.any(atoms[:, 1] < 0):
                raise ValueError("atom masses must be nonnegative")
            if np.unique(atoms[:, 0]).size != atoms.shape[0]:
                raise ValueError("atom locations must be distinct")
        if self.density is not None:
            kind, theta = self.density
            if kind != "geometric":
                raise ValueError(f"unknown density {kind!r}")
            if not 0.0 < theta < 1.0:
                raise ValueError("geometric density needs 0 < theta < 1")

    @property
    def is_zero(self) -> bool:
        return (self.mass_at_zero == 0 and self.mass_at_inf == 0
                and self.atoms.size == 0 and self.density is None)

    def density_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Effective atoms (locations, masses) of the density part."""
        if self.density is None:
            return np.zeros(0), np.zeros(0)
        _, theta = self.density
        with np.errstate(divide="ignore", invalid="ignore"):
            # scipy's recurrence emits a spurious warning for the k = 1
            # term when alpha + beta = -1; the masked value is unused.
            xj, wj = roots_jacobi(self.quad_nodes, theta - 1.0, -theta)
        u = 0.5 * (xj + 1.0)
        t = u / (1.0 - u)
        return t, geometric_constant(theta) * wj

    def finite_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """All finite-location mass: atoms plus discretized density."""
        td, md = self.density_nodes()
        if self.atoms.size:
            return np.concatenate((self.atoms[:, 0], td)), np.concatenate((self.atoms[:, 1], md))
        return td, md

    def integrate(self, f, f_zero, f_inf):
        """integral f(t) d(this measure) with endpoint limit values.

        f is evaluated (vectorized) at the finite nodes; f_zero and
        f_inf are the integrand's limits at t = 0 and t = inf.
        """
        t, mass = self.finite_nodes()
        total = self.mass_at_zero * f_zero + self.mass_at_inf * f_inf
        if t.size:
            total = total + np.tensordot(f(t), mass, axes=([-1], [0]))
        return total

    def scaled(self, c: float) -> "ExtendedMeasure":
        if c < 0:
            raise ValueError("measure scale must be nonnegative")
        atoms = self.atoms.copy()
        if atoms.size:
            atoms[:, 1] *= c
        out = ExtendedMeasure(self.mass_at_zero * c, self.mass_at_inf * c,
                              atoms, None, self.quad_nodes)
        if self.density is not None:
            # Fold the density scale into extra atoms; densities carry
            # no scale field of their own.
            td, md = self.density_nodes()
            merged = np.concatenate((out.atoms, np.column_stack((td, md * c))))
            out = ExtendedMeasure(out.mass_at_zero, out.mass_at_inf, merged,
                                  None, self.quad_nodes)
        return out


def geometric_measure(theta: float, quad_nodes: int = 256) -> ExtendedMeasure:
    """The measure representing lam -> lam^theta."""
    return ExtendedMeasure(density=("geometric", float(theta)), quad_nodes=quad_nodes)


def eval_pick(measure: ExtendedMeasure, lam):
    """h(lam) for the measure-represented function; lam scalar or array."""
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= 0):
        raise ValueError("lam must be positive")
    t, mass = measure.finite_nodes()
    vals = measure.mass_at_zero * lam_arr + measure.mass_at_inf
    if t.size:
        vals = vals + np.sum(mass * pick_kernel(t, lam_arr[..., None]), axis=-1)
    return float(vals) if np.isscalar(lam) or lam_arr.ndim == 0 else vals


@dataclass(frozen=True)
class PickFunctionRep:
    """A function of the class, carried by its representing measure."""

    measure: ExtendedMeasure

    def __post_init__(self):
        if not self.measure.is_zero:
            v = eval_pick(self.measure, 1.0)
            if not (np.isfinite(v) and v > 0):
                raise ValueError("measure does not evaluate to a finite positive h(1)")

    def __call__(self, lam):
        return eval_pick(self.measure, lam)


def _as_h(h):
    """Accept a PickFunctionRep, an ExtendedMeasure, or a callable."""
    if isinstance(h, PickFunctionRep):
        return h
    if isinstance(h, ExtendedMeasure):
        return PickFunctionRep(h)
    return h


def quadratic_norm_check(h, lam, x, rtol: float = 1e-7):
    """Two routes to the intermediate quadratic norm.

    lhs integrates (1 + 1/t) K(t, x) against the representing measure
    (endpoint limits are the weighted and plain squared norms); rhs is
    the spectral sum of h(lam_i) |x_i|^2.  Returns (lhs, rhs, gap) with
    gap relative to rhs; the contract is gap <= rtol.
    """
    h = _as_h(h)
    if not isinstance(h, PickFunctionRep):
        raise TypeError("quadratic_norm_check needs a measure-backed function")
    w = as_weights(lam)
    v = np.asarray(x, dtype=complex)
    mod2 = np.abs(v) ** 2

    def f(t):
        tw = t[:, None] * w
        return np.sum((1.0 + t)[:, None] * w * mod2 / (1.0 + tw), axis=1)

    lhs = h.measure.integrate(f, float(np.sum(w * mod2)), float(np.sum(mod2)))
    rhs = float(np.sum(h(w) * mod2))
    gap = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    return lhs, rhs, gap


@dataclass(frozen=True)
class FitResult:
    feasible: bool
    rep: PickFunctionRep | None
    residual: float


def _nnls_on_grid(lam, hv, t_grid, maxiter):
    A = np.column_stack((lam, np.ones_like(lam), pick_kernel(t_grid, lam[:, None])))
    masses, rnorm = nnls(A, hv, maxiter=maxiter)
    return masses, rnorm


def fit_pick_measure(points, t_grid=None, rtol: float = 1e-6,
                     maxiter: int | None = None, refine_rounds: int = 3) -> FitResult:
    """Nonnegative least squares fit of a representing measure to data.

    points is a sequence of (lam_i, h_i) with distinct positive lam_i
    and positive h_i.  Candidate atoms start from 200 log-spaced
    locations in [1e-8, 1e8] plus both endpoints; the grid is then
    zoomed around the active atoms a few times, since an atom falling
    between candidates otherwise caps the residual near the grid
    spacing squared.  Feasibility means a relative l2 residual at most
    `rtol`; this is a computable surrogate for exact membership, not a
    theorem.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be a sequence of (lam, h) pairs")
    lam = pts[:, 0]
    hv = pts[:, 1]
    if np.any(lam <= 0) or np.any(hv <= 0):
        raise ValueError("lam and h values must be positive")
    if np.unique(lam).size != lam.size:
        raise ValueError("lam values must be distinct")
    if t_grid is None:
        t_grid = np.logspace(-8.0, 8.0, 200)
    t_grid = np.asarray(t_grid, dtype=float)
    scale = np.linalg.norm(hv)

    try:
        base_grid = t_grid
        masses, rnorm = _nnls_on_grid(lam, hv, t_grid, maxiter)
        spacing = np.sqrt(np.max(t_grid[1:] / t_grid[:-1])) if t_grid.size > 1 else 2.0
        for _ in range(refine_rounds):
            if rnorm / scale < 1e-13:
                break
            active = t_grid[masses[2:] > 0]
            if active.size == 0:
                break
            local = active[:, None] * np.geomspace(1.0 / spacing, spacing, 9)[None, :]
            t_new = np.unique(np.concatenate((base_grid, active, local.ravel())))
            m_new, r_new = _nnls_on_grid(lam, hv, t_new, maxiter)
            if r_new >= rnorm:
                break
            t_grid, masses, rnorm = t_new, m_new, r_new
            spacing = np.sqrt(spacing)
    except RuntimeError:
        return FitResult(False, None, np.inf)
    residual = rnorm / scale
    if residual > rtol:
        return FitResult(False, None, float(residual))
    keep = masses[2:] > 0
    atoms = np.column_stack((t_grid[keep], masses[2:][keep]))
    measure = ExtendedMeasure(mass_at_zero=float(masses[0]),
                              mass_at_inf=float(masses[1]), atoms=atoms)
    return FitResult(True, PickFunctionRep(measure), float(residual))


# ---------------------------------------------------------------------------
# randomized matrix-order verifiers


def psd_slack(D) -> float:
    """Minimum eigenvalue of the symmetrized matrix."""
    D = np.asarray(D)
    H = (D + D.conj().T) / 2.0
    return float(np.min(np.linalg.eigvalsh(H)))


def _psd_tol(D, tol):
    return -tol * (1.0 + float(np.linalg.norm(D, 2)))


def _couple_rescale(T, w):
    """Rescale T so max of its two couple norms is 1."""
    n0 = np.linalg.norm(T, 2)
    half = np.sqrt(w)
    n1 = np.linalg.norm((half[:, None] * T) / half[None, :], 2)
    s = max(n0, n1)
    return T / s if s > 0 else T


def exact_interp_randomized_test(h, lam, trials: int = 300, seed: int = 0,
                                 tol: float = 1e-9):
    """Sample couple contractions and check T* h(A) T <= h(A).

    A is diag(lam).  Returns (True, None) on a clean pass or (False, T)
    with the first violating contraction.  A pass is sampling evidence
    for the necessary condition, not a proof of membership.
    """
    h = _as_h(h)
    w = as_weights(lam)
    n = w.size
    hw = np.asarray(h(w), dtype=float)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        T = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        T = _couple_rescale(T, w)
        D = np.diag(hw) - T.conj().T @ (hw[:, None] * T)
        if psd_slack(D) < _psd_tol(D, tol):
            return False, T
    return True, None


def typeH_profile(h, t_grid=None, s_grid=None):
    """H(t) = sup over s of h(st) / h(s) on the grids."""
    h = _as_h(h)
    if t_grid is None:
        t_grid = np.logspace(-3, 3, 61)
    if s_grid is None:
        s_grid = np.logspace(-4, 4, 161)
    t_grid = np.asarray(t_grid, dtype=float)
    s_grid = np.asarray(s_grid, dtype=float)
    hs = np.asarray(h(s_grid), dtype=float)
    prof = np.empty(t_grid.size)
    for i, t in enumerate(t_grid):
        prof[i] = np.max(np.asarray(h(s_grid * t), dtype=float) / hs)
    return t_grid, prof


def typeH_bound_check(h, H, grid=None, tol: float = 1e-9):
    """Check h(lam)/h(mu) <= H(lam/mu) (1 + tol) over all grid pairs.

    Returns (passed, worst_excess, witness_pair).
    """
    h = _as_h(h)
    if grid is None:
        grid = np.logspace(-3, 3, 61)
    grid = np.asarray(grid, dtype=float)
    hv = np.asarray(h(grid), dtype=float)
    ratios = hv[:, None] / hv[None, :]
    bound = np.asarray(H(grid[:, None] / grid[None, :]), dtype=float)
    excess = ratios / bound
    worst = float(np.max(excess))
    if worst <= 1.0 + tol:
        return True, worst, None
    i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
    return False, worst, (float(grid[i]), float(grid[j]))


def exponent_envelope_check(h, theta_minus: float, theta_plus: float,
                            c: float = 1.0, grid=None, tol: float = 1e-9):
    """Check the two-sided power envelope around the point c.

    min(lam^a, lam^b) <= h(c lam)/h(c) <= max(lam^a, lam^b) with
    a = theta_minus, b = theta_plus, within relative tol.
    """
    if theta_minus > theta_plus:
        raise ValueError("theta_minus must not exceed theta_plus")
    h = _as_h(h)
    if grid is None:
        grid = np.logspace(-3, 3, 61)
    grid = np.asarray(grid, dtype=float)
    ratio = np.asarray(h(c * grid), dtype=float) / float(h(np.asarray(c)))
    lower = np.minimum(grid**theta_minus, grid**theta_plus)
    upper = np.maximum(grid**theta_minus, grid**theta_plus)
    ok = np.all(ratio >= lower * (1.0 - tol)) and np.all(ratio <= upper * (1.0 + tol))
    return bool(ok)


def dual_transforms(h):
    """The two classical involutions of the class.

    h_tilde(lam) = lam h(1/lam) and h_star(lam) = 1 / h(1/lam).  For a
    measure-backed input, h_tilde is returned measure-backed: its
    measure is the pushforward under t -> 1/t with the endpoints
    swapped.  h_star has no measure transform in closed form and is
    returned as a plain callable.
    """
    h = _as_h(h)
    if isinstance(h, PickFunctionRep):
        mu = h.measure
        atoms = mu.atoms.copy()
        td, md = mu.density_nodes()
        if td.size:
            atoms = np.concatenate((atoms, np.column_stack((td, md))))
        if atoms.size:
            atoms = np.column_stack((1.0 / atoms[:, 0], atoms[:, 1]))
        flipped = ExtendedMeasure(mass_at_zero=mu.mass_at_inf,
                                  mass_at_inf=mu.mass_at_zero, atoms=atoms)
        h_tilde = PickFunctionRep(flipped)
    else:
        def h_tilde(lam, _h=h):
            lam = np.asarray(lam, dtype=float)
            return lam * np.asarray(_h(1.0 / lam), dtype=float)

    def h_star(lam, _h=h):
        lam = np.asarray(lam, dtype=float)
        return 1.0 / np.asarray(_h(1.0 / lam), dtype=float)

    return h_tilde, h_star


def donoghue_transform(h):
    """Carry h to the unit-interval parametrization k(s) = s h((1-s)/s).

    Returns (k, support) where k is defined on (0, 1) and, for a
    measure-backed h, support = (s_points, masses) is the transformed
    measure under s = 1/(1+t) (the t = 0 endpoint lands at s = 1 and
    t = inf at s = 0); otherwise support is None.
    """
    h = _as_h(h)

    def k(s, _h=h):
        s = np.asarray(s, dtype=float)
        if np.any((s <= 0) | (s >= 1)):
            raise ValueError("the transform lives on 0 < s < 1")
        return s * np.asarray(_h((1.0 - s) / s), dtype=float)

    support = None
    if isinstance(h, PickFunctionRep):
        mu = h.measure
        t, mass = mu.finite_nodes()
        s_pts = np.concatenate(([1.0], 1.0 / (1.0 + t), [0.0]))
        masses = np.concatenate(([mu.mass_at_zero], mass, [mu.mass_at_inf]))
        keep = masses > 0
        support = (s_pts[keep], masses[keep])
    return k, support


def _apply_scalar(h, A):
    """h(A) for Hermitian positive A via the eigendecomposition."""
    vals, vecs = np.linalg.eigh(A)
    hv = np.asarray(h(vals), dtype=float)
    return (vecs * hv) @ vecs.conj().T


def _classic_monotone_pair(n: int, eps: float = 1e-3):
    """The standard 2x2 pair violating monotonicity of the square."""
    A1 = np.array([[1.0, 1.0], [1.0, 1.0]]) + eps * np.eye(2)
    A2 = np.array([[2.0, 1.0], [1.0, 1.0]]) + eps * np.eye(2)
    if n == 2:
        return A1, A2
    P1 = np.eye(n)
    P2 = np.eye(n)
    P1[:2, :2] = A1
    P2[:2, :2] = A2
    return P1, P2


def matrix_monotone_test(h, n: int = 4, trials: int = 300, seed: int = 0,
                         tol: float = 1e-9):
    """Sample ordered pairs A1 <= A2 and check h(A1) <= h(A2).

    The first candidate embeds the classic square-counterexample pair;
    the rest are random.  Returns (True, None) or (False, (A1, A2)).
    """
    h = _as_h(h)
    rng = np.random.default_rng(seed)
    candidates = []
    if n >= 2:
        candidates.append(_classic_monotone_pair(n))
    for _ in range(trials):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A2 = G @ G.conj().T / n + 0.05 * np.eye(n)
        H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        D = H @ H.conj().T / n
        lo = float(np.min(np.linalg.eigvalsh(A2)))
        hi = float(np.max(np.linalg.eigvalsh(D)))
        A1 = A2 - (0.9 * lo / max(hi, 1e-12)) * rng.uniform(0.1, 1.0) * D
        candidates.append((A1, A2))
    for A1, A2 in candidates:
        D = _apply_scalar(h, A2) - _apply_scalar(h, A1)
        if psd_slack(D) < _psd_tol(D, tol):
            return False, (A1, A2)
    return True, None


def matrix_concavity_test(h, n: int = 4, trials: int = 300, seed: int = 0,
                          tol: float = 1e-9):
    """Sample PD pairs and check the matrix Jensen inequality.

    lam h(A1) + (1-lam) h(A2) <= h(lam A1 + (1-lam) A2) in the PSD
    order.  Returns (True, None) or (False, (A1, A2, lam)).
    """
    h = _as_h(h)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        G1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        G2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A1 = G1 @ G1.conj().T / n + 0.05 * np.eye(n)
        A2 = G2 @ G2.conj().T / n + 0.05 * np.eye(n)
        s = float(rng.uniform(0.05, 0.95))
        D = _apply_scalar(h, s * A1 + (1 - s) * A2) \
            - s * _apply_scalar(h, A1) - (1 - s) * _apply_scalar(h, A2)
        if psd_slack(D) < _psd_tol(D, tol):
            return False, (A1, A2, s)
    return True, None


def hansen_check(h, n: int = 4, trials: int = 300, seed: int = 0,
                 tol: float = 1e-9):
    """Check T* h(A) T <= h(T* A T) for random A > 0 and |T| <= 1."""
    h = _as_h(h)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A = G @ G.conj().T / n + 0.05 * np.eye(n)
        T = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        T = T / max(np.linalg.norm(T, 2), 1e-12)
        lhs = T.conj().T @ _apply_scalar(h, A) @ T
        rhs = _apply_scalar(h, T.conj().T @ A @ T)
        D = rhs - lhs
        if psd_slack(D) < _psd_tol(D, tol):
            return False, (A, T)
    return True, None


# ---------------------------------------------------------------------------
# two variables


@dataclass(frozen=True)
class TwoVarMeasure:
    """Atomic positive measure on [0, inf]^2 (inf encoded as np.inf).

    Represents h(a, b) = sum of mass * kernel(t1, a) * kernel(t2, b),
    the product form of two-variable interpolation functions.
    """

    atoms: np.ndarray  # rows (t1, t2, mass)

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float).reshape(-1, 3)
        object.__setattr__(self, "atoms", atoms)
        if np.any(atoms[:, 2] <= 0):
            raise ValueError("masses must be positive")
        if np.any(atoms[:, :2] < 0):
            raise ValueError("atom locations must lie in [0, inf]")

    def __call__(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        out = np.zeros(np.broadcast(a, b).shape)
        for t1, t2, m in self.atoms:
            out = out + m * pick_kernel(t1, a) * pick_kernel(t2, b)
        return out


def two_var_apply(h2, lam1, lam2) -> np.ndarray:
    """h(A1, A2) on the tensor product of diagonal couples.

    Returns the (n1 n2) x (n1 n2) diagonal matrix with entries
    h(lam1_i, lam2_j) in the first-factor-major ordering.
    """
    w1 = as_weights(lam1)
    w2 = as_weights(lam2)
    vals = np.asarray(h2(w1[:, None], w2[None, :]), dtype=float)
    return np.diag(vals.ravel())


def _two_var_on_matrices(h2, A1, A2) -> np.ndarray:
    """h(A1, A2) via the spectral resolutions of Hermitian A1, A2."""
    v1, U1 = np.linalg.eigh(A1)
    v2, U2 = np.linalg.eigh(A2)
    vals = np.asarray(h2(v1[:, None], v2[None, :]), dtype=float)
    U = np.kron(U1, U2)
    return (U * vals.ravel()) @ U.conj().T


def two_var_interp_test(h2, lam1, lam2, trials: int = 100, seed: int = 0,
                        tol: float = 1e-9,
                        checks: tuple = ("four_term", "separate", "rectangle")):
    """Randomized checks of the two-variable interpolation inequality.

    For sampled couple contractions T1, T2 the four-term inequality

        h + (T1 x T2)* h (T1 x T2) >= (T1 x 1)* h (T1 x 1)
                                      + (1 x T2)* h (1 x T2)

    is tested in the PSD order on the tensor product, along with the
    separate interpolation reduction (T2 = 0) and the rectangle
    monotonicity h(A1', A2') - h(A1', A2) - h(A1, A2') + h(A1, A2) >= 0
    for random ordered pairs.  `checks` selects which of the three run;
    functions with only the separate property (such as the square root
    of a sum) are expected to fail the four-term test.  Returns
    (passed, report).
    """
    w1 = as_weights(lam1)
    w2 = as_weights(lam2)
    n1, n2 = w1.size, w2.size
    Hmat = two_var_apply(h2, w1, w2)
    rng = np.random.default_rng(seed)
    report = {"four_term": 0, "separate": 0, "rectangle": 0}
    for _ in range(trials):
        T1 = _couple_rescale(rng.standard_normal((n1, n1))
                             + 1j * rng.standard_normal((n1, n1)), w1)
        T2 = _couple_rescale(rng.standard_normal((n2, n2))
                             + 1j * rng.standard_normal((n2, n2)), w2)
        K12 = np.kron(T1, T2)
        K1 = np.kron(T1, np.eye(n2))
        K2 = np.kron(np.eye(n1), T2)
        if "four_term" in checks:
            D = Hmat + K12.conj().T @ Hmat @ K12 \
                - K1.conj().T @ Hmat @ K1 - K2.conj().T @ Hmat @ K2
            if psd_slack(D) < _psd_tol(D, tol):
                return False, {"failure": "four_term", "T1": T1, "T2": T2}
            report["four_term"] += 1
        if "separate" in checks:
            Dsep = Hmat - K1.conj().T @ Hmat @ K1
            if psd_slack(Dsep) < _psd_tol(Dsep, tol):
                return False, {"failure": "separate", "T1": T1}
            Dsep2 = Hmat - K2.conj().T @ Hmat @ K2
            if psd_slack(Dsep2) < _psd_tol(Dsep2, tol):
                return False, {"failure": "separate", "T2": T2}
            report["separate"] += 1
    # Rectangle monotonicity on random ordered pairs of full matrices.
    for _ in range(max(trials // 4, 1) if "rectangle" in checks else 0):
        mats = []
        for n in (n1, n2):
            G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            A = G @ G.conj().T / n + 0.1 * np.eye(n)
            H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            Ap = A + H @ H.conj().T / (2 * n)
            mats.append((A, Ap))
        (A1, A1p), (A2, A2p) = mats
        D = _two_var_on_matrices(h2, A1p, A2p) - _two_var_on_matrices(h2, A1p, A2) \
            - _two_var_on_matrices(h2, A1, A2p) + _two_var_on_matrices(h2, A1, A2)
        if psd_slack(D) < _psd_tol(D, tol):
            return False, {"failure": "rectangle", "pairs": ((A1, A1p), (A2, A2p))}
        report["rectangle"] += 1
    return True, report


def sample_pick_measure(rng, max_atoms: int = 4,
                        with_density: bool = False) -> ExtendedMeasure:
    """A random representing measure for property tests (seeded rng)."""
    n_atoms = int(rng.integers(1, max_atoms + 1))
    t = np.sort(np.exp(rng.uniform(np.log(1e-3), np.log(1e3), n_atoms)))
    m = rng.uniform(0.1, 2.0, n_atoms)
    density = ("geometric", float(rng.uniform(0.15, 0.85))) if with_density else None
    return ExtendedMeasure(mass_at_zero=float(rng.uniform(0, 0.5)),
                           mass_at_inf=float(rng.uniform(0, 0.5)),
                           atoms=np.column_stack((t, m)), density=density)

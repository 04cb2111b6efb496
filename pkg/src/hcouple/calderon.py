"""Constructive couple contractions from K-domination, with certificates.

Given two vectors whose k-functionals satisfy a strict pointwise
domination, this module constructs a matrix T mapping the dominating
vector onto the dominated one while contracting both couple norms.
The route: strip phases, pick an auxiliary factor rho > 1, interpolate
the domination polynomial P through prescribed node values, split its
zeros by a sign rule, and assemble T from a polynomial basis that is
diagonal at the source nodes.  Every constructed map ships with a
certificate of measured margins that `verify_certificate` re-checks
from scratch.

Also included: the relative (two-couple) and rescaled variants, the
two partial-isometry block maps built from a single seed polynomial,
and the experimental weighted-lp analogue of the assembly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig

from .couple import (
    TimeGrid,
    as_vector,
    as_weights,
    norm0_sq,
    norm1_sq,
    operator_norms,
)
from .polynomials import RealPolynomial

__all__ = [
    "DominationError",
    "ConstructionError",
    "ZeroSplitting",
    "ContractionCertificate",
    "check_domination",
    "preprocess_phases",
    "build_domination_polynomial",
    "split_zeros",
    "assemble_contraction",
    "construct_calderon_map",
    "construct_relative_map",
    "scaled_map",
    "loewner_maps",
    "lp_experimental_matrix",
    "verify_certificate",
    "lp_operator_norm",
]

MAX_DIMENSION = 12  # conditioning cap for the interpolation + rootfind stage


class DominationError(ValueError):
    """The required K-domination does not hold (or admits no rho > 1)."""


class ConstructionError(RuntimeError):
    """The construction pipeline failed (degenerate zeros, conditioning)."""


# ---------------------------------------------------------------------------
# domination check and phase preprocessing


def k_values_with_limits(ts, x, lam):
    """k(t, x) on the grid plus the closed-form t=0 and t=inf limits.

    Returns (values_on_ts, value_at_0, weighted_limit) where the last
    entry is lim t*k(t) = |x|_1^2.
    """
    w = as_weights(lam)
    v = as_vector(x, w.size)
    mod2 = np.abs(v) ** 2
    vals = np.sum(w * mod2 / (ts[:, None] + w), axis=1)
    return vals, float(np.sum(mod2)), float(np.sum(w * mod2))


def check_domination(x0, y0, lam, grid: TimeGrid | None = None) -> float:
    """Worst-case ratio k(t, y0) / k(t, x0) over the grid and both limits.

    A return value r < 1 certifies strict domination with margin 1/r.
    """
    grid = grid or TimeGrid.default()
    w = as_weights(lam)
    x = as_vector(x0, w.size)
    y = as_vector(y0, w.size)
    if norm0_sq(x) == 0.0:
        if norm0_sq(y) == 0.0:
            return 0.0
        raise DominationError("x0 = 0 cannot dominate a nonzero y0")
    kx, kx0, kx1 = k_values_with_limits(grid.points, x, w)
    ky, ky0, ky1 = k_values_with_limits(grid.points, y, w)
    ratios = [np.max(ky / kx)]
    if grid.include_zero_limit:
        ratios.append(ky0 / kx0)
    if grid.include_inf_limit:
        ratios.append(ky1 / kx1)
    return float(np.max(ratios))


def preprocess_phases(x0, y0, floor_rel: float = 1e-6):
    """Strip unit phases from both vectors, nudging zero moduli.

    Returns (xm, ym, phase_x, phase_y, nudged) where xm, ym are strictly
    positive moduli, the phases are unit complex diagonals restoring the
    input data, and nudged counts the coordinates lifted to the floor.

    The floor keeps the zeros of the domination polynomial resolvable:
    a coordinate of relative size eps parks a zero of P at distance
    ~eps^2 from a pole, which double precision stops resolving around
    eps ~ 1e-8.  The mapping residual against the original data grows
    linearly with any nudge applied to it.
    """
    x = as_vector(x0)
    y = as_vector(y0, x.size)
    nudged = 0

    def polar(v):
        nonlocal nudged
        mod = np.abs(v)
        scale = float(np.max(mod))
        phases = np.where(mod > 0, v / np.where(mod > 0, mod, 1.0), 1.0 + 0j)
        floor = floor_rel * (scale if scale > 0 else 1.0)
        low = mod < floor
        nudged += int(np.sum(low))
        return np.where(low, floor, mod), phases

    xm, px = polar(x)
    ym, py = polar(y)
    return xm, ym, px, py, nudged


# ---------------------------------------------------------------------------
# the domination polynomial and its zero splitting


def _check_interlacing(alpha: np.ndarray, beta: np.ndarray):
    merged = np.empty(2 * beta.size)
    merged[0::2] = beta
    merged[1::2] = alpha
    if np.any(np.diff(merged) <= 0.0):
        raise DominationError("weights do not interlace: need beta_1 < alpha_1 < beta_2 < ...")


def _node_products(alpha: np.ndarray, beta: np.ndarray):
    """Derivative values of L = L_alpha * L_beta at its own roots.

    Returns (Lp_beta, Lp_alpha): L'(-beta_k) > 0 and L'(-alpha_i) < 0.
    """
    diff_bb = beta[None, :] - beta[:, None]
    np.fill_diagonal(diff_bb, 1.0)
    lpb_beta = np.prod(diff_bb, axis=1)  # L_beta'(-beta_k)
    la_beta = np.prod(alpha[None, :] - beta[:, None], axis=1)  # L_alpha(-beta_k)
    diff_aa = alpha[None, :] - alpha[:, None]
    np.fill_diagonal(diff_aa, 1.0)
    lpa_alpha = np.prod(diff_aa, axis=1)  # L_alpha'(-alpha_i)
    lb_alpha = np.prod(beta[None, :] - alpha[:, None], axis=1)  # L_beta(-alpha_i)
    return la_beta * lpb_beta, lpa_alpha * lb_alpha


def _L_polynomial(alpha: np.ndarray, beta: np.ndarray) -> RealPolynomial:
    """L = prod (t + alpha_i)(t + beta_i) in product (Newton) form."""
    roots = np.concatenate((-alpha, -beta))
    coeffs = np.zeros(roots.size + 1)
    coeffs[-1] = 1.0
    return RealPolynomial(np.append(roots, 0.0), coeffs)


@dataclass(frozen=True)
class DominationPolynomial:
    """The numerator P of k_beta - k_alpha over L, held in residue form.

    P(t) = sum_j c_j prod_{i != j} (t - d_i) where the poles d_j are the
    negated node weights and the residues c_j are known in closed form
    from the data.  This representation evaluates and differentiates
    stably for nodes spanning many orders of magnitude, where a divided
    difference table loses all accuracy; roots come from a generalized
    companion pencil in the Lagrange basis, Newton-polished on the
    rational form.
    """

    poles: np.ndarray
    residues: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "poles", np.asarray(self.poles, dtype=float))
        object.__setattr__(self, "residues", np.asarray(self.residues, dtype=float))
        if self.poles.shape != self.residues.shape or self.poles.ndim != 1:
            raise ValueError("poles and residues must be 1-D arrays of equal length")

    @property
    def degree(self) -> int:
        return self.poles.size - 1

    @property
    def leading_coefficient(self) -> float:
        return float(np.sum(self.residues))

    @property
    def nodes(self) -> np.ndarray:
        return self.poles

    def node_values(self) -> np.ndarray:
        """P at its own defining nodes, P(d_j) = c_j prod_{i != j} (d_j - d_i)."""
        diff = self.poles[:, None] - self.poles[None, :]
        np.fill_diagonal(diff, 1.0)
        return self.residues * np.prod(diff, axis=1)

    def rational(self, t):
        """R(t) = P(t) / prod (t - d_j) = sum_j c_j / (t - d_j)."""
        t = np.asarray(t, dtype=np.result_type(np.asarray(t).dtype, float))
        return np.sum(self.residues / (t[..., None] - self.poles), axis=-1)

    def __call__(self, t):
        t = np.asarray(t)
        dtype = np.result_type(t.dtype, float)
        shifts = t[..., None] - self.poles  # (..., M)
        out = np.zeros(t.shape, dtype=dtype)
        M = self.poles.size
        for j in range(M):
            mask = np.ones(M, dtype=bool)
            mask[j] = False
            out = out + self.residues[j] * np.prod(shifts[..., mask], axis=-1)
        return out if out.ndim else out[()]

    def derivative_at(self, t):
        """P'(t) away from the poles, via the product and rational parts."""
        t = np.asarray(t, dtype=complex)
        shifts = t[..., None] - self.poles
        L = np.prod(shifts, axis=-1)
        R = np.sum(self.residues / shifts, axis=-1)
        Lp = L * np.sum(1.0 / shifts, axis=-1)
        Rp = -np.sum(self.residues / shifts**2, axis=-1)
        out = Lp * R + L * Rp
        out = np.real_if_close(out, tol=1e6)
        return out if out.ndim else out[()]

    def roots(self, polish_steps: int = 5) -> np.ndarray:
        """Zeros via the Lagrange-basis companion pencil.

        The pencil ([[0, c^T], [1, diag(d)]], diag(0, 1, ..., 1)) has
        the zeros of P as its finite eigenvalues; entries stay at the
        scale of the data, unlike monomial coefficients.
        """
        M = self.poles.size
        A0 = np.zeros((M + 1, M + 1))
        A0[0, 1:] = self.residues
        A0[1:, 0] = 1.0
        A0[np.arange(1, M + 1), np.arange(1, M + 1)] = self.poles
        A1 = np.eye(M + 1)
        A1[0, 0] = 0.0
        vals = eig(A0, A1, right=False)
        scale = float(np.max(np.abs(self.poles))) + 1.0
        finite = vals[np.isfinite(vals) & (np.abs(vals) < 1e10 * scale)]
        deg = self.degree
        if finite.size < deg:
            raise ConstructionError("companion pencil lost roots (degenerate leading term)")
        if finite.size > deg:
            finite = finite[np.argsort(np.abs(finite))][:deg]
        return self._polish(finite, polish_steps)

    def _polish(self, r: np.ndarray, steps: int) -> np.ndarray:
        """Newton-polish approximate zeros against the rational form."""
        for _ in range(steps):
            shifts = r[:, None] - self.poles[None, :]
            near_pole = np.min(np.abs(shifts) / np.abs(self.poles)[None, :], axis=1) < 1e-13
            with np.errstate(divide="ignore", invalid="ignore"):
                R = np.sum(self.residues / shifts, axis=1)
                Rp = -np.sum(self.residues / shifts**2, axis=1)
                step = R / Rp
            step = np.where(near_pole | ~np.isfinite(step), 0.0, step)
            r = r - step
        return r

    def anchored_roots(self, weak_rel: float = 1e-7):
        """Roots split into regular zeros and pole-anchored zeros.

        A pole whose residue is tiny (a near-zero coordinate) carries a
        zero of P at a distance from it that double precision cannot
        resolve through the root value alone.  Such zeros are returned
        as (pole index, offset) pairs with the offset solved to full
        relative precision by fixed-point iteration on
        h = -c_j / R_rest(d_j + h); the remaining zeros come from the
        companion pencil of the strong subsystem, polished on the full
        rational function.

        Returns (regular, anchor_idx, offsets): `regular` are complex
        root values; the anchored zeros sit at poles[anchor_idx] +
        offsets.
        """
        d, c = self.poles, self.residues
        M = d.size
        idx = np.arange(M)
        anchor_list = []
        offset_list = []
        strong = np.ones(M, dtype=bool)
        for j in range(M):
            others = idx != j
            S = np.sum(c[others] / (d[j] - d[others]))
            if S == 0.0 or abs(c[j] / S) > weak_rel * abs(d[j]):
                continue
            h = -c[j] / S
            converged = False
            for _ in range(12):
                S = np.sum(c[others] / ((d[j] + h) - d[others]))
                h_new = -c[j] / S
                if h_new == h or abs(h_new - h) <= 1e-14 * abs(h_new):
                    h = h_new
                    converged = True
                    break
                h = h_new
            if converged:
                strong[j] = False
                anchor_list.append(j)
                offset_list.append(h)
        anchor_idx = np.array(anchor_list, dtype=int)
        offsets = np.array(offset_list, dtype=float)
        if np.count_nonzero(strong) < 2:
            raise ConstructionError("fewer than two poles carry mass; problem is degenerate")
        sub = DominationPolynomial(d[strong], c[strong])
        regular = self._polish(sub.roots(polish_steps=3), 3)
        return regular, anchor_idx, offsets


def build_domination_polynomial(x0, y0, alpha, beta, grid: TimeGrid | None = None,
                                node_powers: float = 2.0,
                                rtol: float = 1e-8) -> DominationPolynomial:
    """The numerator P of k_beta(t, x0) - k_alpha(t, y0) over L.

    P is pinned down by its values at the 2n negated weights (the
    residues of the rational difference); it is returned in residue
    form and verified against the directly evaluated difference on the
    grid to `rtol` relative (skipped when grid is None).  `node_powers`
    is 2 for the quadratic construction and p for the lp variant.
    """
    alpha = as_weights(alpha)
    beta = as_weights(beta)
    x = np.asarray(x0, dtype=float)
    y = np.asarray(y0, dtype=float)
    n = beta.size
    if alpha.size != n or x.size != n or y.size != n:
        raise ValueError("dimension mismatch among x0, y0, alpha, beta")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise ValueError("node data must be strictly positive (strip phases first)")
    if n > MAX_DIMENSION:
        raise ConstructionError(
            f"dimension {n} exceeds the conditioning cap {MAX_DIMENSION}; "
            "raise hcouple.calderon.MAX_DIMENSION explicitly to override")
    _check_interlacing(alpha, beta)

    p = node_powers
    poles = np.concatenate((-beta, -alpha))
    residues = np.concatenate(((x**p) * beta, -(y**p) * alpha))
    P = DominationPolynomial(poles, residues)
    if P.leading_coefficient <= 0.0:
        raise DominationError("domination fails in the t -> inf limit (weighted norms)")

    lp_beta, lp_alpha = _node_products(alpha, beta)
    vals_beta = (x**p) * beta * lp_beta
    vals_alpha = -(y**p) * alpha * lp_alpha
    if np.any(vals_alpha <= 0.0) or np.any(vals_beta <= 0.0):
        raise ConstructionError("node values violate the required sign pattern")

    if grid is not None:
        ts = grid.points
        kb = np.sum((x[None, :] ** p) * beta / (ts[:, None] + beta), axis=1)
        ka = np.sum((y[None, :] ** p) * alpha / (ts[:, None] + alpha), axis=1)
        lhs = P.rational(ts).real
        if np.any(lhs <= 0.0) or P.rational(0.0).real <= 0.0:
            raise DominationError("P(t) <= 0 on the grid: domination fails at the chosen rho")
        err = np.max(np.abs(lhs - (kb - ka)) / np.maximum(kb, 1e-300))
        if err > rtol:
            raise ConstructionError(
                f"residue identity fails: representation error {err:.3e} exceeds {rtol:.1e}")
    return P


@dataclass(frozen=True)
class ZeroSplitting:
    """Classified zeros of the domination polynomial.

    deltas and gammas are the positive numbers whose negatives are the
    real zeros, separated by the sign of L(-r) P'(-r); complex_pairs
    holds one representative (positive imaginary part) per conjugate
    pair.  Counts satisfy 2m - 1 + 2(n - m) = deg P with m = len(deltas).

    Zeros parked against a pole by a near-zero coordinate additionally
    carry that pole and the exact zero-pole offset (NaN pole marks a
    free zero), so downstream products can difference them without
    catastrophic cancellation.
    """

    deltas: np.ndarray
    gammas: np.ndarray
    complex_pairs: np.ndarray
    m: int
    n: int
    delta_anchor_poles: np.ndarray | None = None
    delta_anchor_offsets: np.ndarray | None = None
    gamma_anchor_poles: np.ndarray | None = None
    gamma_anchor_offsets: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "deltas", np.asarray(self.deltas, dtype=float))
        object.__setattr__(self, "gammas", np.asarray(self.gammas, dtype=float))
        object.__setattr__(self, "complex_pairs", np.asarray(self.complex_pairs, dtype=complex))
        for name, size in (("delta", self.deltas.size), ("gamma", self.gammas.size)):
            poles = getattr(self, f"{name}_anchor_poles")
            offs = getattr(self, f"{name}_anchor_offsets")
            if poles is None:
                poles = np.full(size, np.nan)
                offs = np.zeros(size)
            else:
                poles = np.asarray(poles, dtype=float)
                offs = np.asarray(offs, dtype=float)
                if poles.size != size or offs.size != size:
                    raise ValueError("anchor arrays must match the zero arrays")
            object.__setattr__(self, f"{name}_anchor_poles", poles)
            object.__setattr__(self, f"{name}_anchor_offsets", offs)
        if self.deltas.size != self.m or self.gammas.size != self.m - 1:
            raise ValueError("inconsistent real-zero counts")
        if self.complex_pairs.size != self.n - self.m:
            raise ValueError("inconsistent complex-pair count")


def split_zeros(P, L=None,
                simple_rtol: float = 1e-7, class_rtol: float = 1e-9) -> ZeroSplitting:
    """Find and classify the zeros of P against the node polynomial L.

    Real zeros -r are deltas when L(-r) P'(-r) > 0 and gammas when the
    product is negative.  For the residue-form P this sign equals the
    sign of R'(-r) where R = P / L, since P' = L R' at a zero of P; the
    classification is ambiguous, and a retry with perturbed data is
    requested, only near a genuine double zero.  Zero gaps are judged
    relative to each zero's own magnitude (the spectrum spans orders of
    magnitude, so a global radius would misfire).
    """
    deg = P.degree
    if deg % 2 == 0:
        raise ConstructionError("P has even degree; expected exact degree 2n - 1")
    n = (deg + 1) // 2

    if not isinstance(P, DominationPolynomial):
        if L is None:
            raise ValueError("split_zeros needs the node polynomial L for a generic P")
        roots = P.roots()
        is_real = np.abs(roots.imag) <= simple_rtol * np.abs(roots)
        real_roots = np.sort(roots[is_real].real)
        complex_shifts = -roots[~is_real]
        pairs = np.sort_complex(complex_shifts[complex_shifts.imag > 0])
        if 2 * pairs.size != complex_shifts.size:
            raise ConstructionError("complex zeros are not conjugate-paired")
        if np.any(real_roots >= 0.0):
            raise DominationError("P has a zero on [0, inf): domination fails")
        r = -real_roots
        s = np.real(L(-r) * P.derivative_at(-r))
        scale = float(np.max(np.abs(s))) if s.size else 1.0
        if s.size and np.min(np.abs(s)) <= class_rtol * scale:
            raise ConstructionError("ambiguous zero classification; perturb the data and retry")
        deltas = np.sort(r[s > 0])
        gammas = np.sort(r[s < 0])
        m = deltas.size
        if gammas.size != m - 1 or 2 * m - 1 + 2 * pairs.size != deg or m + pairs.size != n:
            raise ConstructionError(
                f"zero split counts are inconsistent: {m} deltas, {gammas.size} gammas, "
                f"{pairs.size} pairs for degree {deg}")
        return ZeroSplitting(deltas, gammas, pairs, m, n)

    regular, anchor_idx, anchor_off = P.anchored_roots()
    if regular.size > 1:
        dists = np.abs(regular[:, None] - regular[None, :])
        local = np.maximum(np.abs(regular)[:, None], np.abs(regular)[None, :])
        np.fill_diagonal(dists, np.inf)
        if np.min(dists / np.maximum(local, 1e-300)) <= simple_rtol:
            raise ConstructionError("near-multiple zero detected; perturb the data and retry")
    is_real = np.abs(regular.imag) <= simple_rtol * np.abs(regular)
    real_roots = regular[is_real].real
    complex_shifts = -regular[~is_real]
    pairs = np.sort_complex(complex_shifts[complex_shifts.imag > 0])
    if 2 * pairs.size != complex_shifts.size:
        raise ConstructionError("complex zeros are not conjugate-paired")
    if np.any(real_roots >= 0.0) or np.any(P.poles[anchor_idx] + anchor_off >= 0.0):
        raise DominationError("P has a zero on [0, inf): domination fails")

    # Classify by the sign of R'(-r): P' = L R' at a simple zero, and
    # L(-r)^2 > 0, so this is the sign rule for delta versus gamma.
    shifts = real_roots[:, None] - P.poles[None, :]
    rprime = -np.sum(P.residues / shifts**2, axis=1)
    rprime_scale = np.sum(np.abs(P.residues) / np.abs(shifts) ** 2, axis=1)
    if real_roots.size and np.min(np.abs(rprime) / rprime_scale) <= class_rtol:
        raise ConstructionError("ambiguous zero classification; perturb the data and retry")
    # R' at an anchored zero, differencing every shift through the
    # anchor pole so nothing cancels.
    anch_sign = np.empty(anchor_idx.size)
    for out_i, (j, h) in enumerate(zip(anchor_idx, anchor_off)):
        sh = (P.poles[j] - P.poles) + h
        sh[j] = h
        anch_sign[out_i] = np.sign(-np.sum(P.residues / sh**2))

    r_vals = np.concatenate((-real_roots, -(P.poles[anchor_idx] + anchor_off)))
    r_poles = np.concatenate((np.full(real_roots.size, np.nan), P.poles[anchor_idx]))
    r_offs = np.concatenate((np.zeros(real_roots.size), anchor_off))
    r_sign = np.concatenate((np.sign(rprime), anch_sign))

    def take(mask):
        order = np.argsort(r_vals[mask])
        return (r_vals[mask][order], r_poles[mask][order], r_offs[mask][order])

    deltas, d_poles, d_offs = take(r_sign > 0)
    gammas, g_poles, g_offs = take(r_sign < 0)
    m = deltas.size
    if gammas.size != m - 1 or 2 * m - 1 + 2 * pairs.size != deg or m + pairs.size != n:
        raise ConstructionError(
            f"zero split counts are inconsistent: {m} deltas, {gammas.size} gammas, "
            f"{pairs.size} pairs for degree {deg}")

    split = ZeroSplitting(deltas, gammas, pairs, m, n,
                          delta_anchor_poles=d_poles, delta_anchor_offsets=d_offs,
                          gamma_anchor_poles=g_poles, gamma_anchor_offsets=g_offs)

    # The factored form must reproduce the defining node values; with
    # anchored differencing this check is tight.
    lead = P.leading_coefficient
    vals = P.node_values()
    rec = lead * _anchored_real_prod(P.poles, split) * np.real(
        _prod_shift(P.poles, pairs) * _prod_shift(P.poles, np.conj(pairs)))
    rel = np.abs(rec - vals) / np.abs(vals)
    if np.any(rel > 1e-8):
        raise ConstructionError(
            f"factored form fails to reproduce node values (error {np.max(rel):.2e})")
    return split


def _anchored_prod(eval_poles: np.ndarray, zeros: np.ndarray,
                   anchor_poles: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """prod over zeros of (d' + zero) at exact pole points d'.

    Anchored zeros are differenced through their pole: d' + zero equals
    (d' - anchor) - offset with the pole difference exact in floats.
    """
    out = np.ones(eval_poles.size)
    for zero, ap, off in zip(zeros, anchor_poles, offsets):
        if np.isnan(ap):
            out = out * (eval_poles + zero)
        else:
            out = out * ((eval_poles - ap) - off)
    return out


def _anchored_real_prod(eval_poles: np.ndarray, split: ZeroSplitting) -> np.ndarray:
    """prod over all real zeros (deltas and gammas) at pole points."""
    return _anchored_prod(eval_poles, split.deltas,
                          split.delta_anchor_poles, split.delta_anchor_offsets) \
        * _anchored_prod(eval_poles, split.gammas,
                         split.gamma_anchor_poles, split.gamma_anchor_offsets)


# ---------------------------------------------------------------------------
# assembly


def _prod_shift(t, shifts):
    """prod_j (t + shifts_j) for scalar/array t; empty product is 1."""
    shifts = np.asarray(shifts)
    if shifts.size == 0:
        return np.ones_like(np.asarray(t, dtype=complex))
    t = np.asarray(t)
    return np.prod(t[..., None] + shifts, axis=-1)


def assemble_contraction(x0, y0, alpha, beta, split: ZeroSplitting,
                         P=None, return_complex: bool = False):
    """Assemble the contraction matrix from the zero splitting.

    Uses the basis (Q_k) that is diagonal at the source nodes: row i,
    column k is Q_k(-alpha_i) / sqrt(-alpha_i L'(-alpha_i) P(-alpha_i)),
    projected onto its real part.  P's node values enter through their
    closed forms in the data, so the polynomial object itself is
    accepted only for interface symmetry with the split.  The condensed
    closed form is evaluated as a cross-check; a disagreement beyond
    1e-6 raises.
    """
    alpha = as_weights(alpha)
    beta = as_weights(beta)
    x = np.asarray(x0, dtype=float)
    y = np.asarray(y0, dtype=float)
    n = beta.size
    lp_beta, lp_alpha = _node_products(alpha, beta)  # L'(-beta_k), L'(-alpha_i)
    P_beta = (x**2) * beta * lp_beta
    P_alpha = -(y**2) * alpha * lp_alpha

    rad_beta = beta * lp_beta * P_beta          # = (x_k beta_k L'(-beta_k))^2
    rad_alpha = -alpha * lp_alpha * P_alpha     # = (y_i alpha_i L'(-alpha_i))^2
    if np.any(rad_beta <= 0.0) or np.any(rad_alpha <= 0.0):
        raise ConstructionError("negative radicand: zero splitting is corrupted")

    ld_a = _anchored_prod(-alpha, split.deltas,
                          split.delta_anchor_poles, split.delta_anchor_offsets)
    lc_a = _prod_shift(-alpha, split.complex_pairs)
    lb_a = _prod_shift(-alpha, beta)
    ld_b = _anchored_prod(-beta, split.deltas,
                          split.delta_anchor_poles, split.delta_anchor_offsets)
    lc_b = _prod_shift(-beta, split.complex_pairs)
    diff_bb = beta[None, :] - beta[:, None]
    np.fill_diagonal(diff_bb, 1.0)
    lpb_b = np.prod(diff_bb, axis=1)  # L_beta'(-beta_k)

    # Q_k(-alpha_i) expanded over products of the split factors.
    denom_k = ld_b * lc_b * lpb_b
    num_i = ld_a * lc_a * lb_a
    tau = (num_i[:, None] / (beta[None, :] - alpha[:, None])) \
        * (np.sqrt(rad_beta)[None, :] / denom_k[None, :]) \
        / np.sqrt(rad_alpha)[:, None]

    # Cross-check against the condensed closed form, which carries
    # L_alpha(-beta_k) and L_alpha'(-alpha_i) in place of the beta-side
    # factors.  The two routes are algebraically equal.
    la_b = _prod_shift(-beta, alpha)
    diff_aa = alpha[None, :] - alpha[:, None]
    np.fill_diagonal(diff_aa, 1.0)
    lpa_a = np.prod(diff_aa, axis=1)
    tau_condensed = (1.0 / (alpha[:, None] - beta[None, :])) \
        * (x[None, :] * beta[None, :] * ld_a[:, None] * lc_a[:, None] * la_b[None, :]) \
        / (y[:, None] * alpha[:, None] * ld_b[None, :] * lc_b[None, :] * lpa_a[:, None])
    mismatch = np.max(np.abs(tau - tau_condensed)) / max(1.0, float(np.max(np.abs(tau))))
    if mismatch > 1e-6:
        raise ConstructionError(
            f"proof-route and condensed assemblies disagree by {mismatch:.2e}")

    T = tau.real.copy()
    if return_complex:
        return T, tau
    return T


# ---------------------------------------------------------------------------
# certificates


@dataclass
class ContractionCertificate:
    """A constructed map plus every measured margin proving its claims.

    For diagonal maps `source_weights is target_weights`; for relative
    and rescaled maps they differ and T may be rectangular.  The norm
    bounds certified are norm0 <= M0 and norm1 <= M1 / sqrt(rho), with
    M0 = M1 = 1 for the plain construction.
    """

    T: np.ndarray
    rho: float
    norm0: float
    norm1: float
    map_residual: float
    domination_margin: float
    phases_x: np.ndarray
    phases_y: np.ndarray
    source_weights: np.ndarray
    target_weights: np.ndarray
    m: int
    n: int
    deltas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    gammas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    complex_pairs: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    M0: float = 1.0
    M1: float = 1.0
    # Norms of the complex assembly before its real projection; when
    # m < n these attain the bounds 1 and rho^(-1/2) exactly.
    sharp_norm0: float = 0.0
    sharp_norm1: float = 0.0
    perturbation_scale: float = 0.0
    nudged_coordinates: int = 0
    seed: int = 0

    def to_dict(self) -> dict:
        def cplx(a):
            a = np.asarray(a, dtype=complex)
            return [[float(z.real), float(z.imag)] for z in a.ravel()]

        return {
            "T": [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(self.T, dtype=complex)],
            "rho": float(self.rho),
            "norm0": float(self.norm0),
            "norm1": float(self.norm1),
            "map_residual": float(self.map_residual),
            "domination_margin": float(self.domination_margin),
            "phases_x": cplx(self.phases_x),
            "phases_y": cplx(self.phases_y),
            "source_weights": [float(v) for v in self.source_weights],
            "target_weights": [float(v) for v in self.target_weights],
            "m": int(self.m),
            "n": int(self.n),
            "deltas": [float(v) for v in self.deltas],
            "gammas": [float(v) for v in self.gammas],
            "complex_pairs": cplx(self.complex_pairs),
            "M0": float(self.M0),
            "M1": float(self.M1),
            "sharp_norm0": float(self.sharp_norm0),
            "sharp_norm1": float(self.sharp_norm1),
            "perturbation_scale": float(self.perturbation_scale),
            "nudged_coordinates": int(self.nudged_coordinates),
            "seed": int(self.seed),
        }

    @staticmethod
    def from_dict(d: dict) -> "ContractionCertificate":
        def unc(pairs):
            return np.array([complex(re, im) for re, im in pairs])

        T = np.array([[complex(re, im) for re, im in row] for row in d["T"]])
        return ContractionCertificate(
            T=T,
            rho=float(d["rho"]),
            norm0=float(d["norm0"]),
            norm1=float(d["norm1"]),
            map_residual=float(d["map_residual"]),
            domination_margin=float(d["domination_margin"]),
            phases_x=unc(d["phases_x"]),
            phases_y=unc(d["phases_y"]),
            source_weights=np.asarray(d["source_weights"], dtype=float),
            target_weights=np.asarray(d["target_weights"], dtype=float),
            m=int(d["m"]),
            n=int(d["n"]),
            deltas=np.asarray(d["deltas"], dtype=float),
            gammas=np.asarray(d["gammas"], dtype=float),
            complex_pairs=unc(d["complex_pairs"]),
            M0=float(d["M0"]),
            M1=float(d["M1"]),
            sharp_norm0=float(d.get("sharp_norm0", 0.0)),
            sharp_norm1=float(d.get("sharp_norm1", 0.0)),
            perturbation_scale=float(d["perturbation_scale"]),
            nudged_coordinates=int(d["nudged_coordinates"]),
            seed=int(d["seed"]),
        )


def _domination_margin(T, src_w, dst_w, rho, grid: TimeGrid, trials: int, seed: int,
                       M0: float = 1.0, M1: float = 1.0):
    """Pointwise margin of the (possibly rescaled) domination claim.

    Measures min over the grid and test vectors of
    M0^2 k_src(t (M0/M1)^2, x) - k_(rho dst)(t, Tx); at M0 = M1 = 1
    this is the plain contraction claim.  Test vectors are the source
    basis plus `trials` random unit complex vectors; the limits t = 0
    and t -> inf are evaluated in closed form (where they reduce to the
    two operator-norm bounds).  Returns (margin, witness) with
    witness = (t, x) at the minimum.
    """
    rng = np.random.default_rng(seed)
    n_src = src_w.size
    alpha = rho * dst_w
    shift = (M0 / M1) ** 2
    xs = [np.eye(n_src)[i] + 0j for i in range(n_src)]
    for _ in range(trials):
        z = rng.standard_normal(n_src) + 1j * rng.standard_normal(n_src)
        xs.append(z / np.linalg.norm(z))
    margin = np.inf
    witness = None
    ts = grid.points
    for x in xs:
        Tx = np.asarray(T) @ x
        kb = np.sum(src_w * np.abs(x) ** 2 / (shift * ts[:, None] + src_w), axis=1)
        ka = np.sum(alpha * np.abs(Tx) ** 2 / (ts[:, None] + alpha), axis=1)
        diffs = M0**2 * kb - ka
        cand_t = ts
        if grid.include_zero_limit:
            diffs = np.append(diffs, M0**2 * norm0_sq(x) - norm0_sq(Tx))
            cand_t = np.append(cand_t, 0.0)
        if grid.include_inf_limit:
            diffs = np.append(diffs, M1**2 * norm1_sq(x, src_w) - norm1_sq(Tx, alpha))
            cand_t = np.append(cand_t, np.inf)
        i = int(np.argmin(diffs))
        if diffs[i] < margin:
            margin = float(diffs[i])
            witness = (float(cand_t[i]), x.copy())
    return margin, witness


def _measure_certificate(T, x0, y0, src_w, dst_w, rho, grid, trials, seed,
                         M0: float = 1.0, M1: float = 1.0):
    x = as_vector(x0, src_w.size)
    y = as_vector(y0, dst_w.size)
    Tx = np.asarray(T) @ x
    scale = max(float(np.max(np.abs(y))), float(np.max(np.abs(x))), 1e-300)
    residual = float(np.max(np.abs(Tx - y))) / scale
    n0 = float(np.linalg.norm(T, 2))
    n1 = float(np.linalg.norm((np.sqrt(dst_w)[:, None] * np.asarray(T)) / np.sqrt(src_w)[None, :], 2))
    margin, witness = _domination_margin(T, src_w, dst_w, rho, grid, trials, seed, M0, M1)
    return residual, n0, n1, margin, witness


def _auto_rho(worst_ratio: float, lam: np.ndarray) -> float:
    excess = 1.0 / worst_ratio - 1.0
    if excess <= 0.0:
        raise DominationError(f"domination fails: worst ratio {worst_ratio:.6g} >= 1")
    rho = 1.0 + excess / 4.0
    if lam.size > 1:
        gap = float(np.min(lam[1:] / lam[:-1]))
        if gap <= 1.0:
            raise DominationError("duplicate weights admit no rho > 1")
        rho = min(rho, np.sqrt(gap))
    if rho <= 1.0:
        raise DominationError("no admissible rho > 1")
    return rho


_PERTURB_LADDER = (0.0, 1e-12, 1e-10, 1e-8, 1e-6)


def construct_calderon_map(x0, y0, lam, rho: float | None = None, seed: int = 0,
                           grid: TimeGrid | None = None, max_retries: int = 32,
                           trials: int = 50) -> ContractionCertificate:
    """Construct T with T x0 = y0 contracting the couple of weights lam.

    Requires strictly increasing weights and strict domination of the
    k-functional of y0 by that of x0.  rho is chosen automatically
    inside the admissible window unless given.  The perturbation ladder
    nudges the moduli (multiplicatively, seeded) only when the zero
    structure of P is degenerate, escalating from 1e-12 to 1e-6.
    """
    w = as_weights(lam)
    if np.any(np.diff(w) <= 0.0):
        raise DominationError("weights must be strictly increasing with distinct entries")
    if w.size > MAX_DIMENSION:
        raise ConstructionError(
            f"dimension {w.size} exceeds the conditioning cap {MAX_DIMENSION}; "
            "raise hcouple.calderon.MAX_DIMENSION explicitly to override")
    grid = grid or TimeGrid.default()
    x = as_vector(x0, w.size)
    y = as_vector(y0, w.size)

    # Proportional data y = c x admits the exact certificate T = c I;
    # the pipeline would otherwise degenerate (its domination margin is
    # constant in t, and equal to 1 when |c| = 1).
    nx2 = norm0_sq(x)
    if nx2 > 0.0:
        c_prop = complex(np.vdot(x, y) / nx2)
        if float(np.max(np.abs(y - c_prop * x))) <= 1e-14 * max(float(np.max(np.abs(y))), 1e-300):
            if abs(c_prop) > 1.0 + 1e-15:
                raise DominationError("y0 = c x0 with |c| > 1 is never dominated")
            mod = abs(c_prop)
            # Back rho off the exact bound so the certified margin stays
            # strictly positive in the weighted-norm limit.
            rho_prop = (1.0 - 1e-10) / mod**2 if mod < 1.0 - 1e-10 else 1.0
            T = c_prop * np.eye(w.size, dtype=complex)
            residual, n0, n1, margin, _ = _measure_certificate(
                T, x, y, w, w, rho_prop, grid, trials, seed)
            ones = np.ones(w.size, dtype=complex)
            return ContractionCertificate(
                T=T, rho=rho_prop, norm0=n0, norm1=n1, map_residual=residual,
                domination_margin=margin, phases_x=ones, phases_y=ones,
                source_weights=w, target_weights=w, m=w.size, n=w.size,
                sharp_norm0=mod, sharp_norm1=mod, seed=seed)

    # Coordinates carrying no mass on either side split off exactly; T
    # acts as zero there, which preserves every contraction property.
    dead = (np.abs(x) == 0.0) & (np.abs(y) == 0.0)
    if np.any(dead):
        keep = ~dead
        inner = construct_calderon_map(x[keep], y[keep], w[keep], rho=rho, seed=seed,
                                       grid=grid, max_retries=max_retries, trials=trials)
        n_full = w.size
        T = np.zeros((n_full, n_full), dtype=complex)
        T[np.ix_(keep, keep)] = inner.T
        px = np.ones(n_full, dtype=complex)
        py = np.ones(n_full, dtype=complex)
        px[keep] = inner.phases_x
        py[keep] = inner.phases_y
        residual, n0, n1, margin, _ = _measure_certificate(
            T, x, y, w, w, inner.rho, grid, trials, seed)
        return ContractionCertificate(
            T=T, rho=inner.rho, norm0=n0, norm1=n1, map_residual=residual,
            domination_margin=margin, phases_x=px, phases_y=py,
            source_weights=w, target_weights=w, m=inner.m, n=inner.n,
            deltas=inner.deltas, gammas=inner.gammas, complex_pairs=inner.complex_pairs,
            sharp_norm0=inner.sharp_norm0, sharp_norm1=inner.sharp_norm1,
            perturbation_scale=inner.perturbation_scale,
            nudged_coordinates=inner.nudged_coordinates, seed=seed)

    worst = check_domination(x, y, w, grid)
    if rho is None:
        rho = _auto_rho(worst, w)
    else:
        if rho <= 1.0:
            raise DominationError("rho must exceed 1")
        if w.size > 1 and rho * np.max(w[:-1] / w[1:]) >= 1.0:
            raise DominationError("rho violates the interlacing rho*lam_i < lam_(i+1)")
        if worst > 1.0 / rho:
            raise DominationError(
                f"domination margin too small for rho={rho}: worst ratio {worst:.6g} > 1/rho")

    xm, ym, px, py, nudged = preprocess_phases(x, y)

    # Joint rescalings leave T invariant; normalize for conditioning.
    s_lam = float(np.exp(np.mean(np.log(w))))
    lam_n = w / s_lam
    grid_n = TimeGrid(grid.points / s_lam, grid.include_zero_limit, grid.include_inf_limit)
    s_vec = float(np.max(xm))
    xm = xm / s_vec
    ym = ym / s_vec

    beta = lam_n
    alpha = rho * lam_n
    rng = np.random.default_rng(seed)
    last_err: Exception | None = None
    used_scale = 0.0
    for attempt in range(max_retries):
        mag = _PERTURB_LADDER[min(attempt, len(_PERTURB_LADDER) - 1)]
        if mag == 0.0:
            xt, yt = xm, ym
        else:
            xt = xm * (1.0 + mag * rng.uniform(-1.0, 1.0, xm.size))
            yt = ym * (1.0 + mag * rng.uniform(-1.0, 1.0, ym.size))
        try:
            P = build_domination_polynomial(xt, yt, alpha, beta, grid_n)
            split = split_zeros(P, _L_polynomial(alpha, beta))
            T_real, tau = assemble_contraction(xt, yt, alpha, beta, split, P,
                                               return_complex=True)
            used_scale = mag
            break
        except ConstructionError as exc:
            last_err = exc
            continue
    else:
        raise ConstructionError(
            f"perturbation retries exhausted ({max_retries}); last failure: {last_err}")

    # Norms of the complex assembly witness the sharpness of the bounds;
    # they are invariant under the phase restoration below.
    sharp0 = float(np.linalg.norm(tau, 2))
    sharp1 = float(np.linalg.norm((np.sqrt(lam_n)[:, None] * tau) / np.sqrt(lam_n)[None, :], 2))

    T = (py[:, None] * T_real) * np.conj(px)[None, :]
    residual, n0, n1, margin, _ = _measure_certificate(T, x, y, w, w, rho, grid, trials, seed)
    return ContractionCertificate(
        T=T, rho=rho, norm0=n0, norm1=n1, map_residual=residual,
        domination_margin=margin, phases_x=px, phases_y=py,
        source_weights=w, target_weights=w, m=split.m, n=split.n,
        deltas=split.deltas * s_lam, gammas=split.gammas * s_lam,
        complex_pairs=split.complex_pairs * s_lam,
        sharp_norm0=sharp0, sharp_norm1=sharp1,
        perturbation_scale=used_scale, nudged_coordinates=nudged, seed=seed)


def _separate_collisions(weights: np.ndarray, is_target: np.ndarray,
                         rel: float) -> np.ndarray:
    """Separate near-equal direct-sum weights, directionally.

    Target-couple slots only move up and source slots only move down.
    Any contraction built on the modified weights then contracts the
    original couples exactly: raising a target weight or lowering a
    source weight only weakens the inequality being certified, so the
    separation costs no tolerance in the certificate.
    """
    w = weights.copy()
    n = w.size
    # Cluster maximal runs of near-equal weights (sorted input).
    start = 0
    clusters = []
    for i in range(1, n + 1):
        if i == n or w[i] > w[i - 1] * (1.0 + 8 * n * rel):
            clusters.append((start, i))
            start = i
    for a, b in clusters:
        if b - a == 1:
            continue
        base = float(np.exp(np.mean(np.log(w[a:b]))))
        src = [i for i in range(a, b) if not is_target[i]]
        tgt = [i for i in range(a, b) if is_target[i]]
        for k, i in enumerate(reversed(src)):
            w[i] = base * (1.0 - rel * (k + 1))
        for k, i in enumerate(tgt):
            w[i] = base * (1.0 + rel * (k + 1))
    order = np.argsort(w, kind="stable")
    if np.any(np.diff(w[order]) <= 0.0):
        raise ConstructionError("weight separation failed to produce distinct weights")
    if np.any(w[is_target] < weights[is_target]) or np.any(w[~is_target] > weights[~is_target]):
        raise ConstructionError("weight separation broke directionality")
    return w, order


def construct_relative_map(x0, source_lam, y0, target_lam, seed: int = 0,
                           grid: TimeGrid | None = None, rho: float | None = None,
                           collision_rel: float = 1e-5,
                           max_retries: int = 32, trials: int = 50) -> ContractionCertificate:
    """Map x0 in the source couple onto y0 in the target couple.

    Forms the direct sum of the two couples, separates colliding
    weights directionally (targets up, sources down, so the certified
    inequalities transfer exactly to the original weights), runs the
    diagonal construction on the sum, and compresses to the rectangular
    target-by-source block.
    """
    sw = as_weights(source_lam)
    tw = as_weights(target_lam)
    x = as_vector(x0, sw.size)
    y = as_vector(y0, tw.size)
    grid = grid or TimeGrid.default()

    if sw.size == tw.size and np.array_equal(sw, tw):
        # Identical couples reduce to the diagonal construction.
        return construct_calderon_map(x, y, sw, rho=rho, seed=seed, grid=grid,
                                      max_retries=max_retries, trials=trials)

    kx = k_values_with_limits(grid.points, x, sw)
    ky = k_values_with_limits(grid.points, y, tw)
    grid_worst = float(np.max(ky[0] / kx[0]))
    limit_worst = max(ky[1] / kx[1], ky[2] / kx[2])
    if grid_worst >= 1.0 or limit_worst > 1.0:
        raise DominationError(
            f"relative domination fails: worst ratio {max(grid_worst, limit_worst):.6g} >= 1")
    # Equality in a limit alone (a norm equality) is admissible: shrink
    # the target infinitesimally and rescale the map afterwards.  The
    # shrink shows up in the certificate norms at the same order.
    shrink = 4e-10 if limit_worst > 1.0 - 1e-12 else 0.0
    y_work = y * (1.0 - shrink)

    # Direct sum: target slots first, then source slots.
    weights = np.concatenate((tw, sw))
    is_target = np.zeros(weights.size, dtype=bool)
    is_target[: tw.size] = True
    vec_x = np.concatenate((np.zeros(tw.size, dtype=complex), x))
    vec_y = np.concatenate((y_work, np.zeros(sw.size, dtype=complex)))
    order0 = np.argsort(weights, kind="stable")
    weights = weights[order0]
    is_target = is_target[order0]
    vec_x = vec_x[order0]
    vec_y = vec_y[order0]
    weights, reorder = _separate_collisions(weights, is_target, collision_rel)
    weights = weights[reorder]
    vec_x = vec_x[reorder]
    vec_y = vec_y[reorder]

    cert_sum = construct_calderon_map(vec_x, vec_y, weights, rho=rho, seed=seed,
                                      grid=grid, max_retries=max_retries, trials=trials)
    # Compress: rows at target positions, columns at source positions.
    inv = np.argsort(order0[reorder])
    target_rows = inv[: tw.size]
    source_cols = inv[tw.size:]
    T = cert_sum.T[np.ix_(target_rows, source_cols)]
    if shrink > 0.0:
        T = T / (1.0 - shrink)

    residual, n0, n1, margin, _ = _measure_certificate(
        T, x, y, sw, tw, cert_sum.rho, grid, trials, seed)
    return ContractionCertificate(
        T=T, rho=cert_sum.rho, norm0=n0, norm1=n1, map_residual=residual,
        domination_margin=margin, phases_x=cert_sum.phases_x, phases_y=cert_sum.phases_y,
        source_weights=sw, target_weights=tw, m=cert_sum.m, n=cert_sum.n,
        deltas=cert_sum.deltas, gammas=cert_sum.gammas, complex_pairs=cert_sum.complex_pairs,
        sharp_norm0=cert_sum.sharp_norm0, sharp_norm1=cert_sum.sharp_norm1,
        perturbation_scale=cert_sum.perturbation_scale,
        nudged_coordinates=cert_sum.nudged_coordinates, seed=seed)


def scaled_map(x0, y0, lam, M0: float, M1: float, seed: int = 0,
               grid: TimeGrid | None = None, **kwargs) -> ContractionCertificate:
    """Construct T with T x0 = y0, |T|_0 <= M0 and |T|_1 <= M1.

    Rescales the source couple so the generalized domination
    K(t, y0) <= M0^2 K(M1^2 t / M0^2, x0) becomes plain domination,
    then delegates.  M0 = M1 reduces to the diagonal construction on
    (M0 x0, y0).
    """
    if M0 <= 0 or M1 <= 0:
        raise ValueError("M0 and M1 must be positive")
    w = as_weights(lam)
    x = as_vector(x0, w.size)
    y = as_vector(y0, w.size)
    if M0 == M1:
        cert = construct_calderon_map(M0 * x, y, w, seed=seed, grid=grid, **kwargs)
        T = cert.T * M0
        src_w, tgt_w = w, w
    else:
        lam_src = (M1 / M0) ** 2 * w
        cert = construct_relative_map(M0 * x, lam_src, y, w, seed=seed, grid=grid, **kwargs)
        T = cert.T * M0
        src_w, tgt_w = w, w
    grid = grid or TimeGrid.default()
    residual, n0, n1, margin, _ = _measure_certificate(
        T, x, y, src_w, tgt_w, cert.rho, grid, kwargs.get("trials", 50), seed,
        M0=M0, M1=M1)
    return ContractionCertificate(
        T=T, rho=cert.rho, norm0=n0, norm1=n1, map_residual=residual,
        domination_margin=margin, phases_x=cert.phases_x,
        phases_y=cert.phases_y, source_weights=src_w, target_weights=tgt_w,
        m=cert.m, n=cert.n, deltas=cert.deltas, gammas=cert.gammas,
        complex_pairs=cert.complex_pairs, M0=M0, M1=M1,
        sharp_norm0=cert.sharp_norm0, sharp_norm1=cert.sharp_norm1,
        perturbation_scale=cert.perturbation_scale,
        nudged_coordinates=cert.nudged_coordinates, seed=seed)


def verify_certificate(cert: ContractionCertificate, x0, y0, lam=None,
                       grid: TimeGrid | None = None, trials: int = 100, seed: int = 1,
                       tol_residual: float = 1e-8, tol_norm: float = 1e-9,
                       tol_domination: float = 1e-9) -> dict:
    """Re-measure every certificate claim independently.

    Checks the mapping residual, both operator norms against M0 and
    M1 / sqrt(rho), and the pointwise k-domination for basis vectors
    plus `trials` random complex vectors over the grid.  Returns a
    report dict with measured values, a `passed` flag, a list of
    violations, and the sharpness diagnostics when the splitting has
    complex pairs (m < n).
    """
    grid = grid or TimeGrid.default()
    src_w = cert.source_weights if lam is None else as_weights(lam)
    tgt_w = cert.target_weights if lam is None else as_weights(lam)
    x = as_vector(x0, src_w.size)
    y = as_vector(y0, tgt_w.size)
    residual, n0, n1, margin, witness = _measure_certificate(
        cert.T, x, y, src_w, tgt_w, cert.rho, grid, trials, seed,
        M0=cert.M0, M1=cert.M1)

    bound0 = cert.M0 * (1.0 + tol_norm) + tol_norm
    bound1 = cert.M1 / np.sqrt(cert.rho) * (1.0 + tol_norm) + tol_norm
    violations = []
    if residual > tol_residual:
        violations.append(("map_residual", residual, tol_residual))
    if n0 > bound0:
        violations.append(("norm0", n0, bound0))
    if n1 > bound1:
        violations.append(("norm1", n1, bound1))
    if margin < -tol_domination:
        t_w, x_w = witness if witness else (None, None)
        violations.append(("domination", margin, -tol_domination))
    report = {
        "passed": not violations,
        "violations": violations,
        "map_residual": residual,
        "norm0": n0,
        "norm1": n1,
        "rho": cert.rho,
        "domination_margin": margin,
        "witness": witness if violations else None,
        "stored_vs_measured": {
            "norm0": abs(n0 - cert.norm0),
            "norm1": abs(n1 - cert.norm1),
            "map_residual": abs(residual - cert.map_residual),
        },
    }
    if cert.m < cert.n:
        # With complex zeros present the bounds are attained by the
        # complex assembly; report its stored norms next to the real
        # projection's measured ones.
        report["sharpness"] = {
            "complex_norm0": cert.sharp_norm0,
            "complex_norm1": cert.sharp_norm1,
            "complex_norm0_defect": 1.0 - cert.sharp_norm0,
            "complex_norm1_defect": 1.0 / np.sqrt(cert.rho) - cert.sharp_norm1,
            "real_norm0": n0,
            "real_norm1": n1,
        }
    return report


# ---------------------------------------------------------------------------
# partial isometries from a seed polynomial


def _poly_eval(q, t):
    if isinstance(q, RealPolynomial):
        return q(t)
    coeffs = np.asarray(q, dtype=float)  # lowest power first
    return np.polynomial.polynomial.polyval(t, coeffs)


def _poly_degree(q) -> int:
    if isinstance(q, RealPolynomial):
        return q.degree
    coeffs = np.trim_zeros(np.asarray(q, dtype=float), "b")
    return max(coeffs.size - 1, 0)


def loewner_maps(case: int, q, lam):
    """Partial-isometry couple maps built from a seed polynomial q.

    The weights split into xi (odd positions) and eta (even positions).
    Case 1 sends the odd-position subspace to the even one and is a
    partial isometry for the weighted norm; case 2 goes the other way
    and is a partial isometry for the unweighted norm.  Returns
    (x0, y0, T) with T x0 = y0 embedded as an n-by-n matrix.
    """
    w = as_weights(lam)
    n = w.size
    if np.any(np.diff(w) <= 0.0):
        raise ValueError("weights must be strictly increasing")
    xi_idx = np.arange(0, n, 2)   # positions 1, 3, ... (1-based odd)
    eta_idx = np.arange(1, n, 2)  # positions 2, 4, ...
    xi = w[xi_idx]
    eta = w[eta_idx]
    if case == 1:
        max_deg = (n - 1) // 2
    elif case == 2:
        max_deg = (n - 2) // 2
        if eta.size == 0:
            raise ValueError("case 2 needs at least one even-position weight")
    else:
        raise ValueError("case must be 1 or 2")
    if _poly_degree(q) > max_deg:
        raise ValueError(f"deg q = {_poly_degree(q)} exceeds the case-{case} bound {max_deg}")

    # Derivatives of L_lambda at its own roots, split by parity.
    diff = w[None, :] - w[:, None]
    np.fill_diagonal(diff, 1.0)
    lp = np.prod(diff, axis=1)  # L_lambda'(-lam_k); sign alternates with position
    lp_xi = lp[xi_idx]   # positive
    lp_eta = lp[eta_idx]  # negative
    if np.any(lp_xi <= 0) or np.any(lp_eta >= 0):
        raise ConstructionError("sign pattern of L' broke; weights are not strictly increasing")

    q_xi = _poly_eval(q, -xi)
    q_eta = _poly_eval(q, -eta)

    x0 = np.zeros(n)
    y0 = np.zeros(n)
    T = np.zeros((n, n))
    if case == 1:
        # Source on odd positions, image on even ones.
        x_o = q_xi / np.sqrt(xi * lp_xi)
        y_e = q_eta / np.sqrt(-eta * lp_eta)
        x0[xi_idx] = x_o
        y0[eta_idx] = y_e
        # Lagrange composition through the xi nodes.
        block = np.empty((eta.size, xi.size))
        for kk, xk in enumerate(xi):
            others = np.delete(xi, kk)
            denom = np.prod(others - xk) if others.size else 1.0
            ell = np.prod(others[None, :] - eta[:, None], axis=1) if others.size else np.ones(eta.size)
            block[:, kk] = (ell / denom) * np.sqrt(xi[kk] * lp_xi[kk]) / np.sqrt(-eta * lp_eta)
        T[np.ix_(eta_idx, xi_idx)] = block
    else:
        # Source on even positions, image on odd ones.
        x_e = -q_eta / np.sqrt(-lp_eta)
        y_o = q_xi / np.sqrt(lp_xi)
        x0[eta_idx] = x_e
        y0[xi_idx] = y_o
        block = np.empty((xi.size, eta.size))
        for kk, ek in enumerate(eta):
            others = np.delete(eta, kk)
            denom = np.prod(others - ek) if others.size else 1.0
            ell = np.prod(others[None, :] - xi[:, None], axis=1) if others.size else np.ones(xi.size)
            block[:, kk] = -(ell / denom) * np.sqrt(-lp_eta[kk]) / np.sqrt(lp_xi)
        T[np.ix_(xi_idx, eta_idx)] = block

    if np.max(np.abs(T @ x0 - y0)) > 1e-9 * max(1.0, float(np.max(np.abs(y0)))):
        raise ConstructionError("seed-polynomial map failed to reproduce its own data")
    return x0, y0, T


# ---------------------------------------------------------------------------
# experimental weighted-lp variant


def lp_operator_norm(T, p: float, weights=None, iters: int = 200, starts: int = 8,
                     seed: int = 0) -> float:
    """Estimate |T|_{lp -> lp} by nonlinear power iteration.

    With `weights` the norm is taken in lp(w) on both sides (realized by
    conjugation with diag(w)^(1/p)).  This is a lower-bound estimate;
    no closed form is known away from p = 2.
    """
    A = np.asarray(T, dtype=complex)
    if weights is not None:
        d = as_weights(weights) ** (1.0 / p)
        A = (d[:, None] * A) / d[None, :]
    q = p / (p - 1.0)
    rng = np.random.default_rng(seed)
    n = A.shape[1]

    def dual(v, r):
        av = np.abs(v)
        nv = np.sum(av**r) ** (1.0 / r)
        if nv == 0.0:
            return v
        u = (av / nv) ** (r - 1.0) * np.exp(1j * np.angle(v))
        return u

    best = 0.0
    for _ in range(starts):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x /= np.sum(np.abs(x) ** p) ** (1.0 / p)
        for _ in range(iters):
            y = A @ x
            ny = np.sum(np.abs(y) ** p) ** (1.0 / p)
            if ny == 0.0:
                break
            best = max(best, ny)
            z = A.conj().T @ dual(y, p)
            x = dual(z, q)
            nx = np.sum(np.abs(x) ** p) ** (1.0 / p)
            if nx == 0.0:
                break
            x /= nx
        y = A @ x
        best = max(best, float(np.sum(np.abs(y) ** p) ** (1.0 / p)))
    return float(best)


def lp_experimental_matrix(x0, y0, lam, p: float, rho: float, seed: int = 0,
                           grid: TimeGrid | None = None, diag_trials: int = 20):
    """The lp analogue of the assembly; no contraction guarantee.

    Builds the modified polynomial with p-th powers in the node data,
    splits its zeros, and assembles the closed-form matrix carrying
    (p-1)-th powers of the data.  Returns (T, norms, report) where
    norms holds power-iteration estimates of both lp operator norms and
    report carries the mapping residual and a K_p domination diagnostic
    over random vectors.
    """
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    if rho <= 1.0:
        raise ValueError("rho must exceed 1")
    w = as_weights(lam)
    x = np.asarray(x0, dtype=float)
    y = np.asarray(y0, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("the lp variant expects strictly positive data")
    grid = grid or TimeGrid.default()
    if w.size > 1 and rho * np.max(w[:-1] / w[1:]) >= 1.0:
        raise DominationError("rho violates the interlacing rho*lam_i < lam_(i+1)")
    beta = w
    alpha = rho * w
    P = build_domination_polynomial(x, y, alpha, beta, grid, node_powers=p)
    split = split_zeros(P, _L_polynomial(alpha, beta))

    lp_beta, lp_alpha = _node_products(alpha, beta)
    ld_a = _anchored_prod(-alpha, split.deltas,
                          split.delta_anchor_poles, split.delta_anchor_offsets)
    lc_a = _prod_shift(-alpha, split.complex_pairs)
    ld_b = _anchored_prod(-beta, split.deltas,
                          split.delta_anchor_poles, split.delta_anchor_offsets)
    lc_b = _prod_shift(-beta, split.complex_pairs)
    la_b = _prod_shift(-beta, alpha)
    diff_aa = alpha[None, :] - alpha[:, None]
    np.fill_diagonal(diff_aa, 1.0)
    lpa_a = np.prod(diff_aa, axis=1)
    tau = (1.0 / (alpha[:, None] - beta[None, :])) \
        * ((x[None, :] ** (p - 1.0)) * beta[None, :] * ld_a[:, None] * lc_a[:, None] * la_b[None, :]) \
        / ((y[:, None] ** (p - 1.0)) * alpha[:, None] * ld_b[None, :] * lc_b[None, :] * lpa_a[:, None])
    T = tau.real.copy()

    scale = max(float(np.max(np.abs(y))), 1e-300)
    residual = float(np.max(np.abs(T @ x - y))) / scale
    if residual > 1e-6:
        raise ConstructionError(f"lp assembly failed to map the data: residual {residual:.2e}")
    norms = {
        "lp": lp_operator_norm(T, p, seed=seed),
        "lp_weighted": lp_operator_norm(T, p, weights=w, seed=seed),
    }
    # Diagnostic only: how badly K_p domination can fail on random data.
    from .couple import Kp_functional

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(diag_trials):
        z = rng.standard_normal(w.size)
        z /= np.linalg.norm(z)
        for t in grid.points[:: max(1, grid.points.size // 16)]:
            kz = Kp_functional(t, z + 0j, w, p)
            ktz = Kp_functional(t, (T @ z) + 0j, w, p)
            if kz > 0:
                worst = max(worst, ktz / kz)
    report = {"map_residual": residual, "kp_domination_sup": worst, "m": split.m, "n": split.n}
    return T, norms, report

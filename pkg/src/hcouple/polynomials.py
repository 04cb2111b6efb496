"""Real polynomials in Newton divided-difference form.

The contraction construction interpolates a polynomial of degree
2n - 1 through prescribed values at 2n real nodes.  The Newton form is
stable to evaluate at and near the nodes; monomial coefficients are
produced only for companion-matrix root finding, after which the roots
are polished against the Newton form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RealPolynomial", "newton_interpolate", "poly_from_roots"]


def _leja_order(nodes: np.ndarray, values: np.ndarray):
    """Reorder interpolation data by Leja ordering (greedy max spread).

    Keeps the divided-difference triangle well scaled for nodes that
    span several orders of magnitude.
    """
    n = nodes.size
    order = np.empty(n, dtype=int)
    taken = np.zeros(n, dtype=bool)
    order[0] = int(np.argmax(np.abs(nodes)))
    taken[order[0]] = True
    dist = np.abs(nodes - nodes[order[0]])
    for k in range(1, n):
        dist[taken] = -1.0
        j = int(np.argmax(dist))
        order[k] = j
        taken[j] = True
        dist = np.minimum(dist, np.abs(nodes - nodes[j]))
    return nodes[order], values[order]


@dataclass(frozen=True)
class RealPolynomial:
    """Polynomial stored as Newton divided differences over real nodes.

    ``nodes`` and ``coeffs`` have equal length m and represent
    p(t) = c0 + c1 (t - z0) + ... + c_{m-1} (t - z0)...(t - z_{m-2}).
    """

    nodes: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        coeffs = np.asarray(self.coeffs, dtype=float)
        if nodes.shape != coeffs.shape or nodes.ndim != 1:
            raise ValueError("nodes and coefficients must be 1-D arrays of equal length")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        """Index of the last nonzero Newton coefficient."""
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else 0

    @property
    def leading_coefficient(self) -> float:
        return float(self.coeffs[-1])

    def __call__(self, t):
        t = np.asarray(t)
        result = np.full(t.shape, self.coeffs[-1], dtype=np.result_type(t.dtype, float))
        for c, z in zip(self.coeffs[-2::-1], self.nodes[-2::-1]):
            result = result * (t - z) + c
        return result if result.ndim else result[()]

    def derivative_at(self, t):
        """Evaluate p'(t) by differentiating the Newton Horner recursion."""
        t = np.asarray(t)
        dtype = np.result_type(t.dtype, float)
        p = np.full(t.shape, self.coeffs[-1], dtype=dtype)
        dp = np.zeros(t.shape, dtype=dtype)
        for c, z in zip(self.coeffs[-2::-1], self.nodes[-2::-1]):
            dp = dp * (t - z) + p
            p = p * (t - z) + c
        return dp if dp.ndim else dp[()]

    def monomial_coefficients(self) -> np.ndarray:
        """Coefficients in the monomial basis, highest power first."""
        coeffs = np.array([self.coeffs[-1]])
        for c, z in zip(self.coeffs[-2::-1], self.nodes[-2::-1]):
            coeffs = np.append(coeffs, 0.0)
            coeffs[1:] -= z * coeffs[:-1]
            coeffs[-1] += c
        return coeffs

    def roots(self, polish_steps: int = 3) -> np.ndarray:
        """All roots via the companion matrix, Newton-polished.

        The monomial conversion limits attainable accuracy for widely
        spread nodes, so each companion root is refined by a few Newton
        iterations on the stable Newton-form evaluation.
        """
        mono = self.monomial_coefficients()
        lead = np.abs(mono[0])
        if lead == 0.0:
            raise ValueError("zero leading coefficient; degree is degenerate")
        r = np.roots(mono)
        for _ in range(polish_steps):
            dp = self.derivative_at(r)
            p = self(r)
            safe = np.abs(dp) > 0
            step = np.where(safe, p / np.where(safe, dp, 1.0), 0.0)
            r = r - step
        return r


def newton_interpolate(nodes, values) -> RealPolynomial:
    """Interpolating polynomial through (nodes, values) in Newton form."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if nodes.ndim != 1 or nodes.shape != values.shape:
        raise ValueError("nodes and values must be 1-D arrays of equal length")
    if np.unique(nodes).size != nodes.size:
        raise ValueError("interpolation nodes must be distinct")
    z, f = _leja_order(nodes, values)
    c = f.astype(float).copy()
    m = z.size
    for k in range(1, m):
        c[k:] = (c[k:] - c[k - 1 : -1]) / (z[k:] - z[: m - k])
    return RealPolynomial(z, c)


def poly_from_roots(roots, lead: float = 1.0) -> RealPolynomial:
    """Real polynomial lead * prod (t - r_i) with real or conjugate-paired roots."""
    roots = np.atleast_1d(np.asarray(roots, dtype=complex))
    mono = np.atleast_1d(np.poly(roots)) * lead if roots.size else np.array([lead])
    if np.max(np.abs(mono.imag)) > 1e-8 * max(np.max(np.abs(mono)), 1.0):
        raise ValueError("roots are not closed under conjugation")
    mono = mono.real
    # Store as a Newton form with all nodes at zero (plain monomial).
    return RealPolynomial(np.zeros(mono.size), mono[::-1].copy())

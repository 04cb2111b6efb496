#!/usr/bin/env python3
"""Representing measures and matrix-order tests.

The spectral functions of exact quadratic interpolation norms form the
class of positive Pick functions regular on the half-line: integrals of
(1+t) lam / (1 + t lam) against a positive measure.  This script
evaluates measure-backed functions, fits a measure to samples by
nonnegative least squares, and runs the seeded matrix-order testers.
"""

import numpy as np

from hcouple import (
    ExtendedMeasure,
    PickFunctionRep,
    donoghue_transform,
    dual_transforms,
    eval_pick,
    exact_interp_randomized_test,
    fit_pick_measure,
    geometric_measure,
    matrix_concavity_test,
    matrix_monotone_test,
    quadratic_norm_check,
    typeH_profile,
)

# The geometric measure represents the power function exactly.
g = geometric_measure(0.5)
print("geometric(0.5) evaluated at 4:", eval_pick(g, 4.0), "(power value 2)")

# Endpoint masses give the two marginal norms; an atom interpolates.
mix = ExtendedMeasure(mass_at_zero=0.3, mass_at_inf=0.2, atoms=[[1.0, 0.5]])
lams = np.logspace(-2, 2, 5)
print("mixed measure h(lam):", np.round(eval_pick(mix, lams), 6))
print()

# The intermediate quadratic norm can be computed two ways: as the
# K-functional integral and as the spectral sum; they agree to 1e-7.
lam = np.array([0.5, 2.0, 8.0])
x = np.array([1.0, 0.5, -0.25])
lhs, rhs, gap = quadratic_norm_check(PickFunctionRep(g), lam, x)
print(f"norm two ways: integral {lhs:.10f}, spectral {rhs:.10f}, gap {gap:.1e}")
print()

# Fitting: samples of the square root are feasible, samples of the
# square are not (the class is quasi-concave).
pts = [(v, float(np.sqrt(v))) for v in np.logspace(-1, 1, 8)]
fit = fit_pick_measure(pts)
print("fit of sqrt samples: feasible =", fit.feasible, " residual =", fit.residual)
bad = fit_pick_measure([(0.5, 0.25), (1.0, 1.0), (2.0, 4.0)])
print("fit of square samples: feasible =", bad.feasible,
      f" residual = {bad.residual:.3f}")
print()

# Randomized verifiers: members pass, the square is refuted with an
# explicit ordered pair.
sqrt_fn = lambda l: np.sqrt(np.maximum(l, 0))
print("sqrt passes exact-interpolation sampling:",
      exact_interp_randomized_test(sqrt_fn, [1.0, 4.0, 9.0], trials=300, seed=0)[0])
ok, witness = matrix_monotone_test(lambda l: l**2, n=2, trials=300, seed=0)
print("square passes monotonicity:", ok)
A1, A2 = witness
print("  witness pair eigenvalues:", np.linalg.eigvalsh(A1).round(4),
      "<=", np.linalg.eigvalsh(A2).round(4))
print("square passes concavity:",
      matrix_concavity_test(lambda l: l**2, n=2, trials=300, seed=0)[0])
print()

# Classical involutions and the unit-interval transform.
h_tilde, h_star = dual_transforms(PickFunctionRep(geometric_measure(0.3)))
print("dual exponents of lam^0.3 at lam=4:", h_tilde(4.0), h_star(4.0))
k, support = donoghue_transform(PickFunctionRep(g))
print("unit-interval transform of sqrt at 1/2:", k(0.5))

# The growth profile H(t) = sup_s h(st)/h(s) of a member never exceeds
# max(1, t).
t_grid, prof = typeH_profile(PickFunctionRep(mix))
print("profile below max(1, t):", bool(np.all(prof <= np.maximum(1, t_grid) + 1e-9)))

#!/usr/bin/env python3
"""Tour of the couple functionals.

A finite-dimensional weighted couple is the pair (l2^n, l2^n(lam)) with
positive weights lam.  This script evaluates the K-, J-, K_p- and
E_p-functionals of a small couple, cross-checks the closed forms
against the independent minimization oracles, and prints the K-curve
of a vector.
"""

import numpy as np

from hcouple import (
    Ep_functional,
    J_functional,
    K_functional,
    Kp_functional,
    TimeGrid,
    k_functional,
    k_oracle,
    operator_norms,
)

lam = np.array([0.5, 2.0, 8.0])
x = np.array([1.0, -0.5, 0.25 + 0.1j])

print("couple weights:", lam)
print("vector x:", x)
print()

# The K-functional interpolates between the two squared norms: it grows
# like t * |x|_1^2 for small t and saturates at |x|_0^2.
print("t, K(t, x):")
for t in np.logspace(-3, 3, 7):
    print(f"  {t:10.3e}  {K_functional(t, x, lam):.10f}")
print(f"  plain norm^2    {np.sum(np.abs(x)**2):.10f}")
print(f"  weighted norm^2 {np.sum(lam * np.abs(x)**2):.10f}")
print()

# The reparametrized k-functional is K at reciprocal time; its closed
# form is a weighted sum of simple poles.  The oracle minimizes over
# decompositions directly and must agree to ten digits.
for t in (0.0, 0.3, 5.0):
    closed = k_functional(t, x, lam)
    oracle = k_oracle(t, x, lam)
    print(f"k({t}, x) closed {closed:.12f}   oracle {oracle:.12f}   "
          f"gap {abs(closed - oracle):.1e}")
print()

# J is the intersection-norm family; at t = 1 it is the squared
# intersection norm itself.
print("J(1, x) =", J_functional(1.0, x, lam))
print()

# Power-p variants and the Legendre relation between K_p and E_p:
# K_p(t) equals the infimum of s + t E_p(s).
p = 3.0
t = 1.7
kp = Kp_functional(t, x, lam, p)
s_grid = np.linspace(0.0, float(np.sum(np.abs(x)**p)), 4001)
legendre = min(s + t * Ep_functional(s, x, lam, p) for s in s_grid)
print(f"K_{p}({t}, x) = {kp:.8f};  inf_s (s + t E_p(s)) on a grid = {legendre:.8f}")
print()

# Operator norms on the couple: the weighted norm conjugates by the
# square root of the weight matrix.
T = np.array([[0.5, 0.1, 0.0], [0.0, 0.6, 0.2], [0.0, 0.0, 0.4]])
n0, n1 = operator_norms(T, lam)
print(f"|T| = {n0:.6f}, |T| on the weighted side = {n1:.6f}")

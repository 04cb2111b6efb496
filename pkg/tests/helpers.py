"""Shared instance generators for the test suite (all seeded)."""

import numpy as np

from hcouple.calderon import check_domination


def random_couple(rng, n_max=8, w_lo=1e-3, w_hi=1e3, min_gap=1e-6):
    """Strictly increasing weights with a guaranteed relative gap."""
    n = int(rng.integers(1, n_max + 1))
    lam = np.sort(np.exp(rng.uniform(np.log(w_lo), np.log(w_hi), n)))
    if n > 1 and np.min(np.diff(lam) / lam[:-1]) < min_gap:
        lam = lam * np.cumprod(np.full(n, 1.0 + 10 * min_gap))
        lam = np.sort(lam)
    return lam


def random_vector(rng, n, complex_entries=True):
    if complex_entries:
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return rng.standard_normal(n) + 0j


def dominated_pair(rng, lam, margin_lo=1.05, margin_hi=2.0):
    """(x, y) with strict k-domination at a margin in the given range.

    The margin is 1 / worst ratio; y is rescaled to land the draw.
    """
    n = lam.size
    x = random_vector(rng, n)
    y = random_vector(rng, n)
    worst = check_domination(x, y, lam)
    target = float(rng.uniform(margin_lo, margin_hi))
    y = y * np.sqrt(1.0 / (worst * target))
    return x, y

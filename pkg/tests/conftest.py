"""Shared fixtures and helpers for the spotvol test suite."""

import math

import numpy as np
from hypothesis import settings

from spotvol import TickSeries

settings.register_profile("spotvol", deadline=None, max_examples=60)
settings.load_profile("spotvol")


def brownian_ticks(n, sigma_sq, tau, seed, x0=0.0):
    """Constant-volatility log-price plus i.i.d. gaussian noise, n ticks."""
    rng = np.random.default_rng(seed)
    dx = rng.standard_normal(n) * math.sqrt(sigma_sq / n)
    x = x0 + np.cumsum(dx)
    y = x + tau * rng.standard_normal(n) if tau > 0 else x
    return TickSeries(y)

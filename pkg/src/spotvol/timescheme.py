"""Tick-time vs real-time conversion.

Estimating in tick time means reindexing the ticks equidistantly and
ignoring timestamps; the resulting variance curve is per tick-time unit.
The trading intensity nu (time-density of ticks, averaging to one over the
session) converts it back: real-time variance = nu * tick-time variance.
"""

import math

import numpy as np

from .preaverage import TickSeries
from .wavelet import VolatilityCurve

__all__ = [
    "RawTickData",
    "IntensityCurve",
    "to_tick_time",
    "estimate_intensity",
    "tick_to_real",
    "total_variation",
]


class RawTickData:
    """Timestamped trades: strictly increasing times, positive prices."""

    def __init__(self, times, prices):
        self.times = np.asarray(times, dtype=np.float64)
        self.prices = np.asarray(prices, dtype=np.float64)
        if self.times.ndim != 1 or self.times.shape != self.prices.shape:
            raise ValueError("times and prices must be 1-d and equal length")
        if len(self.times) < 2:
            raise ValueError("need at least 2 ticks")
        if not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(self.prices > 0):
            raise ValueError("prices must be positive")
        if not (np.all(np.isfinite(self.times))
                and np.all(np.isfinite(self.prices))):
            raise ValueError("non-finite tick data")

    def __len__(self):
        return len(self.times)

    @property
    def span(self):
        return float(self.times[-1] - self.times[0])


class IntensityCurve:
    """Trading intensity on normalized session time [0, 1].

    Dimensionless: the session average is ~1.  ``bandwidth`` is the window
    half-width delta in normalized time.
    """

    def __init__(self, grid, nu, bandwidth):
        self.grid = np.asarray(grid, dtype=np.float64)
        self.nu = np.asarray(nu, dtype=np.float64)
        if self.grid.shape != self.nu.shape or self.grid.ndim != 1:
            raise ValueError("grid and nu must be 1-d and equal length")
        if np.any(self.nu < 0):
            raise ValueError("intensity must be nonnegative")
        self.bandwidth = float(bandwidth)

    def __len__(self):
        return len(self.grid)

    def at(self, t):
        """Piecewise-constant value, stepping at the grid points."""
        t = np.asarray(t, dtype=np.float64)
        idx = np.clip(np.searchsorted(self.grid, t, side="right") - 1,
                      0, len(self.grid) - 1)
        out = self.nu[idx]
        if out.ndim == 0:
            return float(out)
        return out

    def integral(self):
        """Session integral by the midpoint rule (grid points as centers)."""
        return float(np.mean(self.nu))


def to_tick_time(raw, log_ref):
    """Log-prices reindexed equidistantly; timestamps are dropped."""
    if log_ref <= 0:
        raise ValueError("reference price must be positive")
    return TickSeries(np.log(raw.prices / log_ref))


def estimate_intensity(raw, target_count=None, grid=None):
    """Windowed tick counts normalized to a dimensionless intensity.

    The half-width delta is set so an average-density window holds
    ``target_count`` ticks (default 2*sqrt(n)).  Windows hitting the
    session edge are clipped and renormalized by their actual width.
    """
    n = len(raw) - 1
    if target_count is None:
        target_count = 2.0 * math.sqrt(n)
    if target_count <= 0:
        raise ValueError("target count must be positive")
    if n < 4 * target_count:
        raise ValueError("too few ticks for the requested window size")
    t0, tn = raw.times[0], raw.times[-1]
    span = tn - t0
    delta = target_count * span / (2.0 * n)
    if grid is None:
        nw = max(int(n / target_count), 4)
        grid = (np.arange(nw) + 0.5) / nw
    grid = np.asarray(grid, dtype=np.float64)
    if np.any((grid < 0) | (grid > 1)):
        raise ValueError("grid points must lie in [0, 1]")
    centers = t0 + grid * span
    lo = np.maximum(centers - delta, t0)
    hi = np.minimum(centers + delta, tn)
    counts = (np.searchsorted(raw.times, hi, side="right")
              - np.searchsorted(raw.times, lo, side="left"))
    nu = counts * span / (np.maximum(hi - lo, 1e-300) * n)
    return IntensityCurve(grid, nu, delta / span)


def tick_to_real(sigma_tt, nu):
    """Real-time variance curve: pointwise product nu * sigma_tt.

    The intensity is resampled to the curve's cells by piecewise-constant
    interpolation at cell centers.
    """
    n_cells = sigma_tt.n_cells
    centers = (np.arange(n_cells) + 0.5) / n_cells
    values = sigma_tt.values * nu.at(centers)
    meta = dict(sigma_tt.meta)
    meta["time_scheme"] = "real"
    return VolatilityCurve(values, meta)


def total_variation(curve):
    """Sum of absolute cell-to-cell changes of a curve."""
    return float(np.sum(np.abs(np.diff(curve.values))))

"""Bivariate spot covolatility for synchronously observed pairs.

The product of the two windowed averages plays the role the squared
average plays in the univariate case.  With independent noise on the two
series no bias correction is needed, and the products feed the identical
standardize/shrink/reconstruct pipeline.  Curves are signed.
"""

import math

import numpy as np

from ._kernels import preaverage_core
from .preaverage import (BlockGeometry, PreAveragedSeries, TickSeries,
                         block_geometry, catalog, noise_level)
from .threshold import denoise_series
from .tuning import C_OVER_SNR_DEFAULT, SNR_FLOOR

__all__ = ["PairedTicks", "covol_values", "covol_estimate"]


class PairedTicks:
    """Two tick series observed at identical times."""

    def __init__(self, y1, y2):
        self.y1 = y1 if isinstance(y1, TickSeries) else TickSeries(y1)
        self.y2 = y2 if isinstance(y2, TickSeries) else TickSeries(y2)
        if len(self.y1) != len(self.y2):
            raise ValueError("paired series must have equal length")
        if not np.array_equal(self.y1.times, self.y2.times):
            raise ValueError("paired series must share their time grid")

    def __len__(self):
        return len(self.y1)


def covol_values(pair, lam, geom):
    """Z values m * ybar1_i * ybar2_i on the block grid, no bias term."""
    w = lam.weights(geom.block_len)
    wsq = w * w
    ybar1, _ = preaverage_core(pair.y1.values, geom.block_len, geom.m, w, wsq)
    ybar2, _ = preaverage_core(pair.y2.values, geom.block_len, geom.m, w, wsq)
    return PreAveragedSeries(geom.m * (ybar1 * ybar2), geom)


def _covol_snr(pair, lam, floor=SNR_FLOOR):
    """Pilot signal-to-noise ratio, symmetric in the two series.

    Signal: coarse-block mean of |Z|-products; noise: average of the two
    increment-based noise variances.  Every operation commutes under
    swapping the inputs, so the estimate is bit-identical either way.
    """
    n = len(pair)
    m_pilot = int(math.sqrt(n))
    geom = BlockGeometry.from_block_count(n, m_pilot)
    zs = covol_values(pair, lam, geom)
    pilot = abs(float(np.sum(zs.z)) / geom.m)
    tau_sq = 0.5 * (noise_level(pair.y1.values) + noise_level(pair.y2.values))
    if pilot <= 0.0 or tau_sq <= 0.0:
        return float(floor)
    return float(max(math.sqrt(pilot / tau_sq), floor))


def covol_estimate(pair, lam=None, c=None, j0=2, j_I=None,
                   c_over_snr=C_OVER_SNR_DEFAULT):
    """Signed covolatility curve through the shared shrinkage pipeline."""
    if not isinstance(pair, PairedTicks):
        raise TypeError("expected a PairedTicks instance")
    if lam is None:
        lam = catalog(4)
    snr = None
    if c is None:
        snr = _covol_snr(pair, lam)
        c = c_over_snr * snr
    geom = block_geometry(len(pair), c)
    zs = covol_values(pair, lam, geom)
    curve, info = denoise_series(zs, j0=j0, j_I=j_I)
    curve.meta.update({
        "kind": "covolatility", "n": geom.n, "m": geom.m,
        "block_len": geom.block_len, "c": geom.c, "snr": snr,
        "lambda": lam.name, "pipeline": info,
    })
    return curve

"""Orthonormal Haar pyramid on dyadically padded series.

The forward transform reflect-pads a length-N series on the right up to the
next power of two, then runs the standard two-tap pyramid.  Pairwise step:
approx (a[2k] + a[2k+1])/sqrt(2), detail (a[2k] - a[2k+1])/sqrt(2).  Detail
coefficients whose support lies entirely inside the padded tail are flagged
so that statistics can be computed on genuine data only while shrinkage
still acts on the full coefficient vector.
"""

import math

import numpy as np

__all__ = [
    "WaveletCoefficients",
    "VolatilityCurve",
    "dwt",
    "idwt",
    "reconstruct",
]

_SQRT2 = math.sqrt(2.0)


class WaveletCoefficients:
    """Pyramid output: approx at the coarsest kept level plus detail levels.

    ``details[i]`` holds level j0+i with 2**(j0+i) coefficients; ``pad[i]``
    flags coefficients supported entirely by padded cells.  ``n`` is the
    unpadded series length and 2**big_j the padded one.
    """

    def __init__(self, approx, details, pad, n, j0, big_j):
        self.approx = np.asarray(approx, dtype=np.float64)
        self.details = [np.asarray(d, dtype=np.float64) for d in details]
        self.pad = [np.asarray(p, dtype=bool) for p in pad]
        self.n = int(n)
        self.j0 = int(j0)
        self.big_j = int(big_j)
        if len(self.approx) != 2 ** self.j0:
            raise ValueError("approx length does not match the coarse level")
        for i, d in enumerate(self.details):
            if len(d) != 2 ** (self.j0 + i):
                raise ValueError("detail level length mismatch")

    def levels(self):
        """Yield (level, detail_array, pad_flags) from coarse to fine."""
        for i, d in enumerate(self.details):
            yield self.j0 + i, d, self.pad[i]

    def copy(self):
        return WaveletCoefficients(
            self.approx.copy(), [d.copy() for d in self.details],
            [p.copy() for p in self.pad], self.n, self.j0, self.big_j)

    def energy(self):
        """Sum of squared coefficients (equals the padded series energy)."""
        total = float(np.dot(self.approx, self.approx))
        for d in self.details:
            total += float(np.dot(d, d))
        return total


def _pad_pow2(values):
    n = len(values)
    big_j = max(int(math.ceil(math.log2(n))), 0) if n > 1 else 0
    target = 2 ** big_j
    if target < n:
        big_j += 1
        target = 2 ** big_j
    if target == n:
        return np.array(values, dtype=np.float64), big_j
    return np.pad(values, (0, target - n), mode="reflect"), big_j


def dwt(values, j0=0):
    """Forward pyramid down to coarse level j0 (clipped to the data size).

    Coefficient scaling: with the padded series viewed as a piecewise
    constant function f on [0,1] split into 2**big_j cells, the detail at
    (j, k) equals 2**(big_j/2) times the inner product of f with the unit
    L2-normalized step atom at that dilation.  The factor is the same for
    all levels, so an orthonormal transform of i.i.d. cell noise keeps the
    per-coefficient noise standard deviation unchanged, which is what the
    downstream risk minimization presumes.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or len(values) < 1:
        raise ValueError("need a non-empty one-dimensional series")
    a, big_j = _pad_pow2(values)
    n = len(values)
    j0 = int(j0)
    if j0 < 0:
        raise ValueError("coarse level must be nonnegative")
    j0 = min(j0, big_j)
    details = []
    pad = []
    for j in range(big_j - 1, j0 - 1, -1):
        d = (a[0::2] - a[1::2]) / _SQRT2
        a = (a[0::2] + a[1::2]) / _SQRT2
        support = 2 ** (big_j - j)
        first_padded = -(-n // support)  # ceil: first index with support >= n
        flags = np.arange(len(d)) >= first_padded
        details.append(d)
        pad.append(flags)
    details.reverse()
    pad.reverse()
    return WaveletCoefficients(a, details, pad, n, j0, big_j)


def idwt(coeffs):
    """Inverse pyramid; returns the full padded series of length 2**big_j."""
    a = coeffs.approx.copy()
    for _, d, _flags in coeffs.levels():
        out = np.empty(2 * len(a))
        out[0::2] = (a + d) / _SQRT2
        out[1::2] = (a - d) / _SQRT2
        a = out
    return a


def reconstruct(coeffs):
    """Inverse transform truncated to the original (unpadded) length."""
    return idwt(coeffs)[:coeffs.n]


class VolatilityCurve:
    """Piecewise-constant curve on [0, 1] with equal-width cells.

    ``value(t)`` returns the cell containing t, with t = 1 assigned to the
    last cell.  Grid point (i-1)/m of a pre-averaged series with m blocks
    lands exactly in cell i-2 when the curve has m-1 cells.
    """

    def __init__(self, values, meta=None):
        self.values = np.asarray(values, dtype=np.float64)
        if self.values.ndim != 1 or len(self.values) == 0:
            raise ValueError("curve needs a nonempty value vector")
        self.n_cells = len(self.values)
        self.meta = {} if meta is None else dict(meta)

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        idx = np.clip((t * self.n_cells).astype(np.int64), 0, self.n_cells - 1)
        out = self.values[idx]
        if out.ndim == 0:
            return float(out)
        return out

    def __len__(self):
        return self.n_cells

    def integral(self):
        """Integral over [0, 1]: cell mean."""
        return float(np.mean(self.values))

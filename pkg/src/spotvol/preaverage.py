"""Block pre-averaging of noisy tick series.

Transforms n observed log-prices into m-1 regression-type values whose
conditional mean tracks the spot variance.  Each value is built from a
window of 2*block_len ticks, weighted by an antisymmetric function on
[0,2], squared, bias-corrected with a quadratic-variation term and scaled
by the block count.
"""

import math

import numpy as np
from scipy import integrate

from ._kernels import preaverage_core

__all__ = [
    "TickSeries",
    "PreAverageFunction",
    "BlockGeometry",
    "PreAveragedSeries",
    "normalize",
    "catalog",
    "catalog_size",
    "block_geometry",
    "pre_average",
    "scalar_product",
    "noise_level",
]


class TickSeries:
    """Observed log-prices; times default to the equidistant grid i/n."""

    def __init__(self, values, times=None):
        self.values = np.asarray(values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("tick values must be one-dimensional")
        if times is None:
            n = len(self.values)
            times = np.arange(1, n + 1) / n
        self.times = np.asarray(times, dtype=np.float64)
        if len(self.times) != len(self.values):
            raise ValueError("times and values length mismatch")

    def __len__(self):
        return len(self.values)


class PreAverageFunction:
    """Normalized antisymmetric weight function on [0,2].

    Satisfies lam(t) = -lam(2-t) and the normalization
    (2 * int_0^1 (int_0^s lam)^2 ds) = 1.  ``antideriv`` is
    Lambda(u) = -int_0^u lam, which governs the diffusion response of the
    windowed averages.  The three one-sided integrals (mirror products and
    the squared norm on [0,1]) drive the closed-form error analysis; they
    are precomputed for catalog entries and integrated numerically
    otherwise.
    """

    def __init__(self, name, fn, antideriv=None, norm_const=1.0,
                 antideriv_mirror_integral=None, weight_mirror_integral=None,
                 weight_sq_integral=None):
        self.name = name
        self._fn = fn
        self._antideriv = antideriv
        self.norm_const = float(norm_const)
        self._mirror_a = antideriv_mirror_integral
        self._mirror_w = weight_mirror_integral
        self._sq_w = weight_sq_integral
        self._checked = False

    def __call__(self, u):
        u = np.asarray(u, dtype=np.float64)
        inside = (u >= 0.0) & (u <= 2.0)
        out = np.where(inside, self._fn(np.clip(u, 0.0, 2.0)), 0.0)
        if out.ndim == 0:
            return float(out)
        return out

    def antideriv(self, u):
        """Lambda(u) = -int_0^u lam(v) dv, zero at both endpoints."""
        u = np.asarray(u, dtype=np.float64)
        uc = np.clip(u, 0.0, 2.0)
        if self._antideriv is not None:
            out = self._antideriv(uc)
        else:
            flat = np.atleast_1d(uc).ravel()
            vals = np.array([
                -integrate.quad(self._fn, 0.0, x, epsabs=1e-12, limit=200)[0]
                for x in flat
            ])
            out = vals.reshape(np.shape(uc))
        if np.ndim(out) == 0:
            return float(out)
        return out

    def weights(self, block_len):
        """Discrete weights lam(k/block_len), k = 1..2*block_len.

        The closing node k = 2*block_len carries no weight (the support is
        treated as open at 2): with lam(2) = -lam(0) possibly nonzero, the
        k <-> 2*block_len-k antisymmetry pairing then cancels the whole sum
        and every window annihilates constant price levels.
        """
        k = np.arange(1, 2 * block_len + 1)
        w = self(k / block_len)
        w[-1] = 0.0
        return w

    def mirror_integrals(self):
        """(int Lam(u)Lam(1-u), int lam(u)lam(1-u), int lam^2) over [0,1]."""
        a, b, c = self._mirror_a, self._mirror_w, self._sq_w
        if a is None:
            a = integrate.quad(
                lambda u: self.antideriv(u) * self.antideriv(1.0 - u),
                0.0, 1.0, epsabs=1e-12, limit=200)[0]
        if b is None:
            b = integrate.quad(lambda u: self(u) * self(1.0 - u),
                               0.0, 1.0, epsabs=1e-12, limit=200)[0]
        if c is None:
            c = integrate.quad(lambda u: self(u) ** 2,
                               0.0, 1.0, epsabs=1e-12, limit=200)[0]
        return float(a), float(b), float(c)

    def normalization_residual(self):
        """|(2 int_0^1 Lambda(s)^2 ds)^(1/2) - 1| by adaptive quadrature."""
        val = integrate.quad(lambda s: self.antideriv(s) ** 2,
                             0.0, 1.0, epsabs=1e-12, limit=200)[0]
        return abs(math.sqrt(2.0 * val) - 1.0)

    def antisymmetry_residual(self, points=1000):
        """max |lam(t) + lam(2-t)| on a uniform grid over [0,1]."""
        t = np.linspace(0.0, 1.0, points)
        return float(np.max(np.abs(self(t) + self(2.0 - t))))

    def check(self, norm_tol=1e-8, antisym_tol=1e-9):
        if self.antisymmetry_residual() > antisym_tol:
            raise ValueError(f"{self.name}: weight function is not antisymmetric")
        if self.normalization_residual() > norm_tol:
            raise ValueError(f"{self.name}: weight function is not normalized")
        self._checked = True
        return self

    def ensure_valid(self):
        """Run check() once per instance; cached afterwards."""
        if not self._checked:
            self.check()
        return self


def normalize(raw, name="custom"):
    """Scale an antisymmetric weight shape to satisfy the normalization.

    The returned function is raw/norm_const with
    norm_const = (2 int_0^1 (int_0^s raw)^2 ds)^(1/2).
    """
    def inner(s):
        return integrate.quad(raw, 0.0, s, epsabs=1e-12, limit=200)[0]

    sq = integrate.quad(lambda s: inner(s) ** 2, 0.0, 1.0,
                        epsabs=1e-13, limit=200)[0]
    norm_const = math.sqrt(2.0 * sq)
    if norm_const < 1e-12:
        raise ValueError("degenerate weight shape: zero quadratic norm")
    fn = PreAverageFunction(
        name,
        lambda u, _r=raw, _c=norm_const: np.asarray(_r(u)) / _c,
        norm_const=norm_const,
    )
    return fn.check()


_SQ15 = math.sqrt(1.5)
_SQ3 = math.sqrt(3.0)
_PI = math.pi


def _step_fn(u):
    # value 0 at the midpoint keeps the antisymmetry identity exact there
    return _SQ15 * (np.sign(1.0 - np.asarray(u, dtype=np.float64)))


_CATALOG = {
    1: dict(
        name="cosine",
        fn=lambda u: (_PI / 2.0) * np.cos(_PI * u / 2.0),
        antideriv=lambda u: -np.sin(_PI * u / 2.0),
        norm_const=2.0 / _PI,
        A=1.0 / _PI, B=_PI / 4.0, C=_PI ** 2 / 8.0,
    ),
    2: dict(
        name="triple-cosine",
        fn=lambda u: (3.0 * _PI / 2.0) * np.cos(3.0 * _PI * u / 2.0),
        antideriv=lambda u: -np.sin(3.0 * _PI * u / 2.0),
        norm_const=2.0 / (3.0 * _PI),
        A=-1.0 / (3.0 * _PI), B=-3.0 * _PI / 4.0, C=9.0 * _PI ** 2 / 8.0,
    ),
    3: dict(
        name="step",
        fn=_step_fn,
        antideriv=lambda u: -_SQ15 * np.minimum(u, 2.0 - u),
        norm_const=math.sqrt(2.0 / 3.0),
        A=0.25, B=1.5, C=1.5,
    ),
    4: dict(
        name="sine",
        fn=lambda u: (_PI / _SQ3) * np.sin(_PI * u),
        antideriv=lambda u: -(1.0 - np.cos(_PI * u)) / _SQ3,
        norm_const=_SQ3 / _PI,
        A=1.0 / 6.0, B=_PI ** 2 / 6.0, C=_PI ** 2 / 6.0,
    ),
    5: dict(
        name="double-sine",
        fn=lambda u: (2.0 * _PI / _SQ3) * np.sin(2.0 * _PI * u),
        antideriv=lambda u: -(1.0 - np.cos(2.0 * _PI * u)) / _SQ3,
        norm_const=_SQ3 / (2.0 * _PI),
        A=0.5, B=-2.0 * _PI ** 2 / 3.0, C=2.0 * _PI ** 2 / 3.0,
    ),
    6: dict(
        name="cubic",
        fn=lambda u: (3.0 * math.sqrt(5.0) / 2.0) * (1.0 - u) ** 3,
        antideriv=lambda u: -(3.0 * math.sqrt(5.0) / 8.0)
        * (1.0 - (1.0 - u) ** 4),
        norm_const=2.0 / (3.0 * math.sqrt(5.0)),
        A=(45.0 / 64.0) * (379.0 / 630.0), B=45.0 / 560.0, C=45.0 / 28.0,
    ),
    7: dict(
        name="quintic",
        fn=lambda u: (math.sqrt(91.0) / 2.0) * (1.0 - u) ** 5,
        antideriv=lambda u: -(math.sqrt(91.0) / 12.0)
        * (1.0 - (1.0 - u) ** 6),
        norm_const=2.0 / math.sqrt(91.0),
        A=(91.0 / 144.0) * (5.0 / 7.0 + 1.0 / 12012.0),
        B=91.0 / 11088.0, C=91.0 / 44.0,
    ),
}


def catalog_size():
    return len(_CATALOG)


def catalog(index):
    """Shipped weight function number ``index`` (1-based)."""
    try:
        spec = _CATALOG[int(index)]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"no catalog weight function {index!r}") from exc
    return PreAverageFunction(
        spec["name"], spec["fn"], antideriv=spec["antideriv"],
        norm_const=spec["norm_const"],
        antideriv_mirror_integral=spec["A"],
        weight_mirror_integral=spec["B"],
        weight_sq_integral=spec["C"],
    )


class BlockGeometry:
    """Block layout: block_len = floor(sqrt(n)/c) ticks, m = n//block_len
    blocks, trailing remainder ticks dropped."""

    def __init__(self, n, c, block_len, m):
        if block_len < 2:
            raise ValueError("tuning constant too large: blocks shorter than 2 ticks")
        if m < 2:
            raise ValueError("fewer than 2 blocks; decrease the tuning constant")
        self.n = int(n)
        self.c = float(c)
        self.block_len = int(block_len)
        self.m = int(m)

    @property
    def retained(self):
        return self.m * self.block_len

    @classmethod
    def from_block_count(cls, n, m):
        """Geometry with a prescribed block count (pilot estimators)."""
        block_len = n // m
        return cls(n, math.sqrt(n) / block_len, block_len, m)

    def __repr__(self):
        return (f"BlockGeometry(n={self.n}, c={self.c:.6g}, "
                f"block_len={self.block_len}, m={self.m})")


def block_geometry(n, c):
    n = int(n)
    if n < 16:
        raise ValueError("need at least 16 observations")
    if c <= 0:
        raise ValueError("tuning constant must be positive")
    block_len = int(math.sqrt(n) / c)
    if block_len < 2:
        raise ValueError("tuning constant too large: blocks shorter than 2 ticks")
    return BlockGeometry(n, c, block_len, n // block_len)


class PreAveragedSeries:
    """Values Z_i = m*(ybar_i^2 - bias_i) for i = 2..m on grid (i-1)/m."""

    def __init__(self, z, geometry, rejected=None):
        self.z = np.asarray(z, dtype=np.float64)
        self.geometry = geometry
        self.grid = np.arange(1, geometry.m) / geometry.m
        if len(self.z) != geometry.m - 1:
            raise ValueError("series length does not match the geometry")
        if rejected is None:
            rejected = np.zeros(len(self.z), dtype=bool)
        self.rejected = np.asarray(rejected, dtype=bool)

    def __len__(self):
        return len(self.z)


def pre_average(ticks, lam, geom, bias_correction=True):
    """Apply the block transform to a tick series.

    The window of block i (i = 2..m) is the half-open tick range
    ((i-2)*block_len, i*block_len], exactly 2*block_len ticks; weight k of a
    window is lam(k/block_len).  Bias terms use the same weights squared on
    squared increments.  Set bias_correction=False for product-type values
    that need no noise correction.
    """
    y = ticks.values if isinstance(ticks, TickSeries) else np.asarray(ticks)
    if len(y) < geom.retained:
        raise ValueError("tick series shorter than the retained sample")
    w = lam.weights(geom.block_len)
    wsq = w * w
    ybar, bias = preaverage_core(y, geom.block_len, geom.m, w, wsq)
    if bias_correction:
        z = geom.m * (ybar * ybar - bias)
    else:
        z = geom.m * (ybar * ybar)
    return PreAveragedSeries(z, geom)


def scalar_product(zs, g):
    """Estimate <sigma^2, g> as (1/m) sum g((i-1)/m) Z_i."""
    gv = g(zs.grid) if callable(g) else np.asarray(g, dtype=np.float64)
    if len(gv) != len(zs.z):
        raise ValueError("weight vector length mismatch")
    return float(np.dot(gv, zs.z) / zs.geometry.m)


def noise_level(ticks):
    """Noise variance estimate: squared increments summed over 2n."""
    y = ticks.values if isinstance(ticks, TickSeries) else np.asarray(ticks)
    n = len(y)
    if n < 2:
        raise ValueError("need at least 2 observations")
    d = np.diff(y)
    return float(np.dot(d, d) / (2.0 * n))

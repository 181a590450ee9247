"""Synthetic tick data: square-root stochastic volatility, additive noise,
compound-Poisson jumps, price rounding, and curve scoring.

The latent log-price follows dX = -0.5*sigma^2 dt + sigma dW with variance
dsigma^2 = kappa*(theta - sigma^2) dt + eps*sigma dW~, corr(dW, dW~) = rho,
discretized by an Euler scheme with full truncation on a grid ``oversample``
times finer than the observation grid i/n.  Observations add i.i.d. noise
tau*eta with unit-variance eta (gaussian or uniform).  Scoring uses the
empirical mean integrated squared error against the true variance path.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from scipy.special import ndtri

from ._kernels import heston_euler
from .preaverage import TickSeries
from .wavelet import VolatilityCurve

__all__ = [
    "HestonParams",
    "NoiseSpec",
    "JumpSpec",
    "SimulatedDay",
    "simulate_heston",
    "heston_paths",
    "sigma2_on_grid",
    "add_noise",
    "add_jumps",
    "round_prices",
    "mise",
    "rmise",
    "OVERSAMPLE",
]

OVERSAMPLE = 10


@dataclass
class HestonParams:
    """Square-root stochastic volatility parameters.

    Defaults: rho=-2/3, theta=1e-5, kappa=4, eps=sqrt(kappa*theta), start
    at the long-run variance, zero initial log-price.  The default Feller
    ratio 2*kappa*theta/eps^2 equals 2, so the exact process is strictly
    positive.
    """
    rho: float = -2.0 / 3.0
    theta: float = 1e-5
    kappa: float = 4.0
    eps: float = math.sqrt(4e-5)
    sigma0_sq: float = 1e-5
    x0: float = 0.0

    def validate(self):
        vals = (self.rho, self.theta, self.kappa, self.eps, self.sigma0_sq,
                self.x0)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("non-finite model parameter")
        if abs(self.rho) > 1:
            raise ValueError("correlation must lie in [-1, 1]")
        if min(self.theta, self.kappa, self.sigma0_sq) <= 0:
            raise ValueError("theta, kappa, sigma0_sq must be positive")
        # eps = 0 freezes the variance path, handy for calibration checks
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        return self

    @property
    def feller_ratio(self):
        if self.eps == 0:
            return math.inf
        return 2.0 * self.kappa * self.theta / self.eps ** 2


@dataclass
class NoiseSpec:
    """Additive observation noise: tau * eta with unit-variance eta."""
    kind: str = "gaussian"
    std: float = 0.0
    state_dependent: object = None  # optional tau(t, x) replacing std

    def validate(self):
        if self.kind not in ("gaussian", "uniform"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not (self.std >= 0):
            raise ValueError("noise std must be nonnegative")
        return self


@dataclass
class JumpSpec:
    intensity: float = 0.0  # jumps per unit time
    size_std: float = 0.0  # log-price units

    def validate(self):
        if self.intensity < 0 or self.size_std < 0:
            raise ValueError("jump intensity and size std must be nonnegative")
        return self


@dataclass
class SimulatedDay:
    """Latent path at times i/n plus the true variance path and jump log."""
    ticks: TickSeries
    true_sigma2: np.ndarray
    jump_times: list = field(default_factory=list)
    clip_fraction: float = 0.0

    def sigma2_curve(self, geom):
        """True variance subsampled to the block grid of ``geom``.

        Grid point (i-1)/m corresponds exactly to tick (i-1)*block_len of
        the retained sample, so the dense path is read off at those ticks.
        """
        return sigma2_on_grid(self.true_sigma2, geom)


def sigma2_on_grid(sigma2_dense, geom):
    """Subsample a per-tick variance path to the m-1 block grid points."""
    idx = np.arange(1, geom.m) * geom.block_len - 1
    return np.asarray(sigma2_dense)[idx]


def simulate_heston(params, n, seed, oversample=OVERSAMPLE):
    """One day of the latent model at observation times i/n."""
    params.validate()
    n = int(n)
    if n < 16:
        raise ValueError("need at least 16 observations")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((2, n * oversample))
    dt = 1.0 / (n * oversample)
    x, v, clips = heston_euler(z[0], z[1], params.rho, params.kappa,
                               params.theta, params.eps, params.sigma0_sq,
                               params.x0, dt, oversample)
    return SimulatedDay(TickSeries(x[0]), v[0], [],
                        clips / (n * oversample))


def heston_paths(params, n, reps, seed, oversample=OVERSAMPLE, chunk=32):
    """Yield (x, v, clip_count) chunks of shape (<=chunk, n) for Monte Carlo.

    Replication r uses the r-th child of np.random.SeedSequence(seed), so
    results are independent of the chunk size and reproducible rep by rep.
    """
    params.validate()
    children = np.random.SeedSequence(seed).spawn(reps)
    dt = 1.0 / (n * oversample)
    for start in range(0, reps, chunk):
        stop = min(start + chunk, reps)
        rows = stop - start
        z1 = np.empty((rows, n * oversample))
        z2 = np.empty((rows, n * oversample))
        for r in range(rows):
            rng = np.random.default_rng(children[start + r])
            z = rng.standard_normal((2, n * oversample))
            z1[r] = z[0]
            z2[r] = z[1]
        x, v, clips = heston_euler(z1, z2, params.rho, params.kappa,
                                   params.theta, params.eps, params.sigma0_sq,
                                   params.x0, dt, oversample)
        yield x, v, clips


def add_noise(x, spec, seed):
    """Observed series Y = X + tau*eta at the same times.

    Both noise kinds are inverse-CDF transforms of the same uniform
    stream, so runs that differ only in `kind` share draws rep for rep
    and their error estimates can be compared without the Monte Carlo
    difference noise swamping the comparison.
    """
    spec.validate()
    if not isinstance(x, TickSeries):
        x = TickSeries(x)
    n = len(x)
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    if spec.kind == "gaussian":
        # the generator can emit exactly 0, which ndtri maps to -inf
        eta = ndtri(np.maximum(u, 2.0 ** -54))
    else:
        root3 = math.sqrt(3.0)
        eta = root3 * (2.0 * u - 1.0)
    if spec.state_dependent is not None:
        tau = np.broadcast_to(
            np.asarray(spec.state_dependent(x.times, x.values),
                       dtype=np.float64), (n,))
    else:
        tau = spec.std
    return TickSeries(x.values + tau * eta, x.times)


def add_jumps(ticks, spec, seed):
    """Add a compound-Poisson component; a jump shifts all later ticks."""
    spec.validate()
    rng = np.random.default_rng(seed)
    count = rng.poisson(spec.intensity)
    times = np.sort(rng.uniform(0.0, 1.0, count))
    sizes = rng.normal(0.0, spec.size_std, count)
    if count == 0:
        return TickSeries(ticks.values.copy(), ticks.times), []
    cum = np.concatenate(([0.0], np.cumsum(sizes)))
    idx = np.searchsorted(times, ticks.times, side="right")
    return (TickSeries(ticks.values + cum[idx], ticks.times),
            list(zip(times.tolist(), sizes.tolist())))


def round_prices(ticks, ref_price, tick_size):
    """Round the implied price to the grid, then return to log scale."""
    if ref_price <= 0 or tick_size <= 0:
        raise ValueError("reference price and tick size must be positive")
    price = ref_price * np.exp(ticks.values)
    snapped = np.round(price / tick_size) * tick_size
    return TickSeries(np.log(snapped / ref_price), ticks.times)


def _ise(estimate, truth):
    est = estimate.values if isinstance(estimate, VolatilityCurve) \
        else np.asarray(estimate, dtype=np.float64)
    tru = np.asarray(truth, dtype=np.float64)
    if est.shape != tru.shape:
        raise ValueError("estimate and truth grids have different lengths")
    diff = est - tru
    return float(np.mean(diff * diff))


def mise(estimates, truths):
    """Mean over runs of the integrated squared error (midpoint rule)."""
    if len(estimates) != len(truths):
        raise ValueError("need one truth per estimate")
    if not estimates:
        raise ValueError("empty inputs")
    return float(np.mean([_ise(e, t) for e, t in zip(estimates, truths)]))


def rmise(estimates, truths):
    """As ``mise`` but each run's error is divided by that run's
    integrated squared volatility."""
    if len(estimates) != len(truths):
        raise ValueError("need one truth per estimate")
    if not estimates:
        raise ValueError("empty inputs")
    out = []
    for e, t in zip(estimates, truths):
        tru = np.asarray(t, dtype=np.float64)
        denom = float(np.mean(tru * tru))
        if denom <= 0:
            raise ValueError("true variance path has zero energy")
        out.append(_ise(e, t) / denom)
    return float(np.mean(out))

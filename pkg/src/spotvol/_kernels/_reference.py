"""Numpy reference implementation of the hot kernels.

Used whenever the compiled extension is unavailable or disabled via the
SPOTVOL_NO_NATIVE environment variable.  Both implementations share the
same call signatures and are compared in tests and benchmarks.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def preaverage_core(y, block_len, m, w, wsq):
    """Windowed weighted means and bias terms for the block transform.

    Block i (i = 2..m) covers the 2*block_len ticks with 1-based indices
    (i-2)*block_len+1 .. i*block_len; ``w[k-1]`` is the weight attached to
    the k-th tick of a window and ``wsq`` the squared-weight vector applied
    to squared increments.  The first retained tick has no predecessor, so
    its squared increment is taken as 0.

    Returns (ybar, bias), each of length m-1.
    """
    ell = int(block_len)
    m = int(m)
    n_r = m * ell
    y = np.ascontiguousarray(y[:n_r], dtype=np.float64)
    d = np.empty(n_r)
    d[0] = 0.0
    np.subtract(y[1:], y[:-1], out=d[1:])
    np.square(d, out=d)
    windows = sliding_window_view(y, 2 * ell)[::ell]
    ybar = windows @ np.asarray(w, dtype=np.float64)
    ybar *= m / n_r
    dwindows = sliding_window_view(d, 2 * ell)[::ell]
    bias = dwindows @ np.asarray(wsq, dtype=np.float64)
    bias *= m * m / (2.0 * n_r * n_r)
    return ybar, bias


def heston_euler(z1, z2, rho, kappa, theta, eps, sigma0_sq, x0, dt, oversample):
    """Euler scheme for the square-root stochastic volatility model.

    z1, z2: (reps, n_obs*oversample) standard normal draws.  The variance
    process uses full truncation: negative states enter drift and diffusion
    clipped at zero but the state itself may stay negative.  Returns
    (x_obs, v_obs, clip_count) where x_obs and v_obs hold the log-price and
    the truncated variance at the n_obs observation times and clip_count is
    the number of fine-grid steps started from a negative variance state.
    """
    z1 = np.atleast_2d(np.asarray(z1, dtype=np.float64))
    z2 = np.atleast_2d(np.asarray(z2, dtype=np.float64))
    reps, total = z1.shape
    n_obs = total // oversample
    sdt = np.sqrt(dt)
    rho_c = np.sqrt(1.0 - rho * rho)
    x = np.full(reps, float(x0))
    v = np.full(reps, float(sigma0_sq))
    x_obs = np.empty((reps, n_obs))
    v_obs = np.empty((reps, n_obs))
    clip_count = 0
    for i in range(n_obs):
        base = i * oversample
        for s in range(oversample):
            dw1 = z1[:, base + s] * sdt
            dw2 = (rho * z1[:, base + s] + rho_c * z2[:, base + s]) * sdt
            vp = np.maximum(v, 0.0)
            clip_count += int(np.count_nonzero(v < 0.0))
            sv = np.sqrt(vp)
            x = x + (-0.5 * vp) * dt + sv * dw1
            v = v + kappa * (theta - vp) * dt + eps * sv * dw2
        x_obs[:, i] = x
        v_obs[:, i] = np.maximum(v, 0.0)
    return x_obs, v_obs, clip_count

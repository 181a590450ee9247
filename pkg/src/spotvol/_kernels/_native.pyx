# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the reference kernels.

Arithmetic is written in the same evaluation order as the numpy reference
so that, fed identical inputs, both produce matching results (bitwise for
the Euler scheme, to rounding of the summation order for the windowed
products).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def preaverage_core(y, block_len, m, w, wsq):
    """See the reference implementation for the contract."""
    cdef Py_ssize_t ell = int(block_len)
    cdef Py_ssize_t mm = int(m)
    cdef Py_ssize_t n_r = mm * ell
    cdef cnp.float64_t[::1] yv = np.ascontiguousarray(y[:n_r], dtype=np.float64)
    cdef cnp.float64_t[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef cnp.float64_t[::1] wsqv = np.ascontiguousarray(wsq, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ybar = np.empty(mm - 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bias = np.empty(mm - 1)
    cdef cnp.float64_t[::1] d = np.empty(n_r)
    cdef Py_ssize_t i, k, start
    cdef double acc, accb, scale, scale_b, inc

    d[0] = 0.0
    for i in range(1, n_r):
        inc = yv[i] - yv[i - 1]
        d[i] = inc * inc
    scale = (<double> mm) / (<double> n_r)
    scale_b = scale * scale / 2.0
    for i in range(mm - 1):
        start = i * ell
        acc = 0.0
        accb = 0.0
        for k in range(2 * ell):
            acc += wv[k] * yv[start + k]
            accb += wsqv[k] * d[start + k]
        ybar[i] = acc * scale
        bias[i] = accb * scale_b
    return ybar, bias


def heston_euler(z1, z2, rho, kappa, theta, eps, sigma0_sq, x0, dt, oversample):
    """See the reference implementation for the contract."""
    cdef cnp.float64_t[:, ::1] z1v = np.ascontiguousarray(
        np.atleast_2d(z1), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] z2v = np.ascontiguousarray(
        np.atleast_2d(z2), dtype=np.float64)
    cdef Py_ssize_t reps = z1v.shape[0]
    cdef Py_ssize_t total = z1v.shape[1]
    cdef Py_ssize_t osf = int(oversample)
    cdef Py_ssize_t n_obs = total // osf
    cdef double rho_ = rho, kappa_ = kappa, theta_ = theta, eps_ = eps
    cdef double dt_ = dt, v0 = sigma0_sq, x00 = x0
    cdef double sdt = sqrt(dt_)
    cdef double rho_c = sqrt(1.0 - rho_ * rho_)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] x_obs = np.empty((reps, n_obs))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v_obs = np.empty((reps, n_obs))
    cdef Py_ssize_t r, i, s, base
    cdef double x, v, vp, sv, dw1, dw2
    cdef long clip_count = 0

    for r in range(reps):
        x = x00
        v = v0
        for i in range(n_obs):
            base = i * osf
            for s in range(osf):
                dw1 = z1v[r, base + s] * sdt
                dw2 = (rho_ * z1v[r, base + s] + rho_c * z2v[r, base + s]) * sdt
                if v < 0.0:
                    vp = 0.0
                    clip_count += 1
                else:
                    vp = v
                sv = sqrt(vp)
                x = x + (-0.5 * vp) * dt_ + sv * dw1
                v = v + kappa_ * (theta_ - vp) * dt_ + eps_ * sv * dw2
            x_obs[r, i] = x
            v_obs[r, i] = v if v > 0.0 else 0.0
    return x_obs, v_obs, clip_count

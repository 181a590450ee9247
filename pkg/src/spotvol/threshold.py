"""Heteroscedastic blockwise shrinkage of wavelet coefficients.

Pipeline: pre-averaged values are transformed with the orthonormal Haar
pyramid; each detail coefficient is standardized by an empirical local
standard deviation of the underlying values; a global rescale makes
the standardized coefficients unit variance at the finest level; every level is
then shrunk either by a universal soft rule (sparse levels) or by blockwise
James-Stein shrinkage with block length and threshold chosen to minimize an
unbiased risk estimate; finally the standardization is inverted and the
curve reconstructed.  Scaling coefficients pass through untouched.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import jumps as jumps_mod
from . import tuning
from .preaverage import TickSeries, block_geometry, catalog, pre_average
from .wavelet import VolatilityCurve, dwt, idwt

__all__ = [
    "SureSelection",
    "LocalStd",
    "sure_risk",
    "select_sure",
    "shrink_level",
    "local_std",
    "denoise_series",
    "asve",
    "sparsity_gamma",
]

S_FLOOR_FRACTION = 1e-3


def sparsity_gamma(u):
    """Sparsity threshold u^(-1/2) * log2(u)^(3/2)."""
    if u < 1:
        raise ValueError("need u >= 1")
    return u ** -0.5 * math.log2(u) ** 1.5 if u > 1 else 0.0


def sure_risk(v, lam, L):
    """Unbiased risk estimate for one block at threshold lam.

    L + (lam^2 - 2*lam*(L-2))/|v|^2 when |v|^2 > lam, else |v|^2 - L.
    """
    v = np.asarray(v, dtype=np.float64)
    s = float(np.dot(v, v))
    if s > lam:
        return L + (lam * lam - 2.0 * lam * (L - 2)) / s
    return L + (s - 2.0 * L)


@dataclass
class SureSelection:
    """Per-level shrinkage choice."""
    level: int
    mode: str  # "sparse-universal" or "block-james-stein"
    lambda_star: float
    L_star: int
    t_stat: float
    d: int
    risk: float = math.nan

    def to_dict(self):
        return {"level": self.level, "mode": self.mode,
                "lambda_star": self.lambda_star, "L_star": self.L_star,
                "t_stat": self.t_stat, "d": self.d, "risk": self.risk}


def select_sure(d_tilde, level=0):
    """Choose shrinkage mode and parameters for one level.

    ``d_tilde`` are the level's standardized coefficients with padding
    artifacts already excluded.  The sparsity statistic T = mean(d~^2) - 1
    routes to the universal rule when small; otherwise block length L and
    threshold lam minimize the summed risk estimate over full blocks, with
    lam searched over the closed-form candidate set (interval endpoints
    plus block energies, which are exactly the risk's breakpoints).  Ties
    go to smaller L, then smaller lam.
    """
    v = np.asarray(d_tilde, dtype=np.float64)
    d = len(v)
    if d == 0:
        raise ValueError("empty level")
    t_stat = float(np.mean(v * v) - 1.0)
    logd = math.log(d)
    if t_stat <= sparsity_gamma(d):
        return SureSelection(level, "sparse-universal", 2.0 * logd, 1,
                             t_stat, d)
    best_risk = math.inf
    best = (0.0, 1)
    for L in range(1, int(math.isqrt(d)) + 1):
        q = d // L
        blocks = v[:q * L].reshape(q, L)
        s2 = np.einsum("ij,ij->i", blocks, blocks)
        lo = float(max(L - 2, 0))
        hi = 2.0 * L * logd
        cands = np.unique(np.concatenate(([lo, hi], np.clip(s2, lo, hi))))
        # risk(lam) = sum over blocks of the per-block estimate; with the
        # block energies sorted, each candidate needs only the count k of
        # energies <= lam, their sum, and the reciprocal sum of the rest
        s_sorted = np.sort(s2)
        prefix = np.concatenate(([0.0], np.cumsum(s_sorted)))
        recip = np.divide(1.0, s_sorted, out=np.zeros_like(s_sorted),
                          where=s_sorted > 0)
        suffix_recip = np.concatenate((np.cumsum(recip[::-1])[::-1], [0.0]))
        k = np.searchsorted(s_sorted, cands, side="right")
        risks = (q * L
                 + (cands * cands - 2.0 * cands * (L - 2)) * suffix_recip[k]
                 + (prefix[k] - 2.0 * L * k))
        i = int(np.argmin(risks))
        if risks[i] < best_risk:
            best_risk = float(risks[i])
            best = (float(cands[i]), L)
    return SureSelection(level, "block-james-stein", best[0], best[1],
                         t_stat, d, best_risk)


def shrink_level(values, sel):
    """Apply the selected rule to a full level vector (padding included)."""
    x = np.asarray(values, dtype=np.float64)
    if sel.mode == "sparse-universal":
        thr = 2.0 * math.log(sel.d)
        xsq = x * x
        factor = np.where(xsq > thr, 1.0 - thr / np.where(xsq > thr, xsq, 1.0),
                          0.0)
        return factor * x
    L = sel.L_star
    block_of = np.arange(len(x)) // L
    s2 = np.bincount(block_of, weights=x * x)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(s2 > sel.lambda_star, 1.0 - sel.lambda_star /
                     np.where(s2 > 0, s2, 1.0), 0.0)
    return x * f[block_of]


@dataclass
class LocalStd:
    """Standardization window for one detail coefficient."""
    level: int
    k: int
    lo: int  # first value index in the window
    hi: int  # one past the last
    interval: tuple  # window in padded-span units, subset of [0, 1]
    s_hat: float


def _window(level, k, big_j, floor_cells, n_values):
    """Value-index window [lo, hi) for coefficient (level, k).

    The window is the coefficient's support, enlarged so its length never
    falls below ``floor_cells``, and shifted (not clipped) to stay inside
    the observed values so the length is preserved whenever possible; at
    least 2 points always.
    """
    support = 2 ** (big_j - level)
    target = max(support, floor_cells, 2)
    target = min(target, n_values)
    lo = k * support + (support - target) // 2
    if lo < 0:
        lo = 0
    if lo + target > n_values:
        lo = n_values - target
    return lo, lo + target


def local_std(zs, j, k, j_I):
    """Empirical std of the pre-averaged values around coefficient (j, k)."""
    z = zs.z
    n_values = len(z)
    big_j = max(int(math.ceil(math.log2(n_values))), 1)
    lo, hi = _window(j, k, big_j, 2 ** (big_j - int(j_I)), n_values)
    s = float(np.std(z[lo:hi], ddof=1))
    scale = 2.0 ** big_j
    return LocalStd(j, k, lo, hi, (lo / scale, hi / scale), s)


def _default_floor(n_values):
    """Default std window floor: 3/32 of the observed span, at least 16.

    Narrower windows track changing variance better, but a lone spike
    then dominates its own window's std and gets shrunk almost entirely
    away, silently hiding outliers the caller never asked to remove.
    This fraction keeps spikes visible while costing little on clean
    data; pass j_I explicitly to trade the two off differently.
    """
    return max(16, round(3 * n_values / 32))


def _level_stds(z, coeffs, floor_cells):
    """Per-level arrays of raw window stds, floored in a second pass."""
    n_values = len(z)
    raw = {}
    for j, detail, _pad in coeffs.levels():
        n_k = len(detail)
        lohi = np.array([_window(j, k, coeffs.big_j, floor_cells, n_values)
                         for k in range(n_k)])
        width = lohi[0, 1] - lohi[0, 0]
        if np.all(lohi[:, 1] - lohi[:, 0] == width):
            windows = z[lohi[:, 0, None] + np.arange(width)[None, :]]
            raw[j] = np.std(windows, axis=1, ddof=1)
        else:
            raw[j] = np.array([np.std(z[lo:hi], ddof=1) for lo, hi in lohi])
    all_s = (np.concatenate(list(raw.values()))
             if raw else np.empty(0))
    med = float(np.median(all_s)) if len(all_s) else 0.0
    floor = S_FLOOR_FRACTION * med if med > 0 else 1.0
    return {j: np.maximum(s, floor) for j, s in raw.items()}, floor


def denoise_series(zs, j0=2, j_I=None):
    """Shrink a pre-averaged series into a volatility curve.

    Returns (curve, info); info records levels, the global rescale, and the
    per-level selections.
    """
    z = zs.z
    coeffs = dwt(z, j0)
    j1 = coeffs.big_j - 1
    if j_I is None:
        floor_cells = _default_floor(len(z))
    else:
        floor_cells = 2 ** (coeffs.big_j - int(j_I))
    floor_cells = max(2, min(floor_cells, len(z)))
    # coarsest level whose own support already reaches the floor
    j_I = min(max(coeffs.big_j - max(1, math.ceil(math.log2(floor_cells))),
                  coeffs.j0), j1)
    info = {"j0": coeffs.j0, "j1": j1, "j_I": j_I,
            "std_floor_cells": floor_cells, "n_values": len(z),
            "selections": []}
    if not coeffs.details:
        curve = VolatilityCurve(idwt(coeffs)[:coeffs.n])
        info["s_glob"] = 1.0
        return curve, info

    stds, floor = _level_stds(z, coeffs, floor_cells)
    info["s_floor"] = floor
    standardized = {j: detail / stds[j] for j, detail, _ in coeffs.levels()}

    finest = j1
    fine_pad = coeffs.pad[-1]
    fine = standardized[finest][~fine_pad]
    s_glob = float(np.std(fine, ddof=1)) if len(fine) >= 2 else 1.0
    if not math.isfinite(s_glob) or s_glob <= 0.0:
        s_glob = 1.0
    info["s_glob"] = s_glob

    out = coeffs.copy()
    for i, (j, _detail, pad) in enumerate(coeffs.levels()):
        d_tilde = standardized[j] / s_glob
        visible = d_tilde[~pad]
        if len(visible) == 0:
            continue
        sel = select_sure(visible, level=j)
        info["selections"].append(sel)
        shrunk = shrink_level(d_tilde, sel)
        out.details[i] = stds[j] * s_glob * shrunk
    curve = VolatilityCurve(idwt(out)[:coeffs.n])
    info["scaling_energy"] = float(np.dot(out.approx, out.approx))
    info["detail_energy"] = sum(float(np.dot(d, d)) for d in out.details)
    return curve, info


def asve(ticks, lam=None, c=None, j0=2, j_I=None, jump_filter=True,
         jump_t=jumps_mod.DEFAULT_THRESHOLD_T, two_sided_jumps=True,
         scan_lam=None, bias_correction=True,
         c_over_snr=tuning.C_OVER_SNR_DEFAULT):
    """Full adaptive spot-volatility pipeline on a tick series.

    With c unset, the tuning constant is c_over_snr times the estimated
    signal-to-noise ratio.  The jump filter (on by default) rejects and
    repairs pre-averaged values around detected price jumps before
    shrinkage.  The returned curve lives on the block grid; its ``meta``
    carries the configuration and diagnostics of the run.
    """
    if not isinstance(ticks, TickSeries):
        ticks = TickSeries(ticks)
    if lam is None:
        lam = catalog(4)
    snr = None
    if c is None:
        snr = tuning.estimate_snr(ticks, lam)
        c = c_over_snr * snr
    geom = block_geometry(len(ticks), c)
    zs = pre_average(ticks, lam, geom, bias_correction=bias_correction)
    report = None
    if jump_filter:
        report = jumps_mod.detect(ticks, scan_lam, jump_t, two_sided_jumps)
        zs = jumps_mod.repair(zs, report)
    curve, info = denoise_series(zs, j0=j0, j_I=j_I)
    curve.meta.update({
        "n": geom.n, "m": geom.m, "block_len": geom.block_len, "c": geom.c,
        "snr": snr, "lambda": lam.name, "jump_filter": bool(jump_filter),
        "pipeline": info,
        "jump_report": None if report is None else report.to_dict(),
    })
    return curve

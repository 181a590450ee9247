"""Two-stage jump detection and repair of pre-averaged values.

Stage one slides an antisymmetric window over the ticks (window half-width
n/m1 with m1 = floor(n^(3/4))), producing statistics Q_r that respond to
level shifts but not to smooth drift or constant offsets.  The Q's are
screened by a local t-test in consecutive blocks of ceil(sqrt(n)).  Stage
two flags single-tick increments exceeding the extreme-value bound
4*tau^2*log(n) for the estimated noise level.  Flagged tick spans reject
the pre-averaged values whose windows touch them; rejected values are
replaced by nearest-neighbor averages.
"""

import math

import numpy as np

from .preaverage import PreAveragedSeries, catalog, noise_level, TickSeries

__all__ = [
    "ScanStatistic",
    "JumpReport",
    "scan_statistic",
    "scan_test",
    "increment_test",
    "detect",
    "repair",
    "DEFAULT_THRESHOLD_T",
]

DEFAULT_THRESHOLD_T = 2.81


def _values(ticks):
    return ticks.values if isinstance(ticks, TickSeries) else np.asarray(ticks)


class ScanStatistic:
    """Q values with their center tick indices (1-based) and window size."""

    def __init__(self, q, r, halfwidth, m1, n):
        self.q = np.asarray(q, dtype=np.float64)
        self.r = np.asarray(r, dtype=np.int64)
        self.halfwidth = int(halfwidth)
        self.m1 = int(m1)
        self.n = int(n)

    def __len__(self):
        return len(self.q)


class JumpReport:
    """Detection output consumed by ``repair`` and the CLI metadata."""

    def __init__(self, scan_flags, increment_flags, threshold_t, m1,
                 tau_sq_hat, halfwidth, n, two_sided, events):
        self.scan_flags = np.asarray(scan_flags, dtype=np.int64)
        self.increment_flags = np.asarray(increment_flags, dtype=np.int64)
        self.threshold_t = float(threshold_t)
        self.m1 = int(m1)
        self.tau_sq_hat = float(tau_sq_hat)
        self.halfwidth = int(halfwidth)
        self.n = int(n)
        self.two_sided = bool(two_sided)
        self.events = list(events)

    @property
    def n_flagged(self):
        return len(self.scan_flags) + len(self.increment_flags)

    def to_dict(self):
        return {
            "threshold_t": self.threshold_t,
            "two_sided": self.two_sided,
            "m1": self.m1,
            "window_halfwidth": self.halfwidth,
            "tau_sq_hat": self.tau_sq_hat,
            "n_scan_flags": int(len(self.scan_flags)),
            "n_increment_flags": int(len(self.increment_flags)),
            "increment_flags": [int(i) for i in self.increment_flags],
            "events": [
                {"tick_lo": int(a), "tick_hi": int(b),
                 "time_lo": a / self.n, "time_hi": b / self.n}
                for a, b in self.events
            ],
        }


def scan_statistic(ticks, lam=None):
    """Windowed level-shift statistics Q_r over the interior ticks.

    Q_r = (m1/n) * sum_j lam(1 + (j-r)*m1/n) * Y_j with lam vanishing
    outside [0,2], so the window spans |j-r| <= n/m1 ticks.  Full-support
    centers are r = halfwidth+1 .. n-halfwidth (1-based).
    """
    y = _values(ticks)
    n = len(y)
    if n < 256:
        raise ValueError("need at least 256 observations for the jump scan")
    if lam is None:
        lam = catalog(3)
    m1 = int(n ** 0.75)
    hw = -(-n // m1)  # ceil(n / m1)
    k = np.arange(2 * hw + 1)
    w = lam(1.0 + (k - hw) * (m1 / n))
    q = np.correlate(y, w, mode="valid") * (m1 / n)
    r = np.arange(hw + 1, n - hw + 1)
    if len(r) != len(q):
        raise AssertionError("scan alignment error")
    return ScanStatistic(q, r, hw, m1, n)


def scan_test(scan, threshold_t=DEFAULT_THRESHOLD_T, two_sided=True):
    """Local t-screen: block the Q's in runs of ceil(sqrt(n)), studentize
    within each block, flag exceedances.  Returns flagged center ticks."""
    q = scan.q
    block = int(math.ceil(math.sqrt(scan.n)))
    if len(q) < 2 * block:
        raise ValueError("too few scan values for the block t-test")
    flagged = []
    for start in range(0, len(q), block):
        seg = q[start:start + block]
        if len(seg) < 2:
            continue
        sd = seg.std(ddof=1)
        if sd == 0.0:
            continue
        stat = (seg - seg.mean()) / sd
        if two_sided:
            hit = np.abs(stat) > threshold_t
        else:
            hit = stat > threshold_t
        flagged.append(scan.r[start:start + block][hit])
    if flagged:
        return np.concatenate(flagged)
    return np.empty(0, dtype=np.int64)


def increment_test(ticks, tau_sq_hat):
    """Flag ticks i (1-based, i >= 2) whose squared increment
    (Y_i - Y_{i-1})^2 exceeds 4*tau_sq_hat*log(n)."""
    y = _values(ticks)
    n = len(y)
    if n < 2:
        raise ValueError("need at least 2 observations")
    d = np.diff(y)
    thr = 4.0 * tau_sq_hat * math.log(n)
    return np.flatnonzero(d * d > thr) + 2


def _merge_runs(sorted_ids):
    """Group consecutive integers into inclusive (lo, hi) runs."""
    runs = []
    for v in sorted_ids:
        if runs and v == runs[-1][1] + 1:
            runs[-1][1] = v
        else:
            runs.append([v, v])
    return runs


def detect(ticks, lam=None, threshold_t=DEFAULT_THRESHOLD_T, two_sided=True):
    """Run both tests and merge flagged scan runs into tick-span events."""
    y = _values(ticks)
    n = len(y)
    tau_sq = noise_level(y)
    scan = scan_statistic(y, lam)
    scan_flags = np.sort(scan_test(scan, threshold_t, two_sided))
    incr_flags = increment_test(y, tau_sq)
    events = []
    for lo, hi in _merge_runs(scan_flags):
        events.append((max(lo - scan.halfwidth, 1),
                       min(hi + scan.halfwidth, n)))
    return JumpReport(scan_flags, incr_flags, threshold_t, scan.m1, tau_sq,
                      scan.halfwidth, n, two_sided, events)


def repair(zs, report):
    """Reject and patch pre-averaged values touched by flagged ticks.

    Z_i is rejected when its tick window ((i-2)*block_len, i*block_len]
    intersects a flagged event span or contains a flagged increment.
    Rejected values are replaced by the mean of the nearest non-rejected
    neighbors on each side (one-sided at the boundaries).
    """
    geom = zs.geometry
    ell = geom.block_len
    m = geom.m
    rejected = zs.rejected.copy()

    def reject_span(a, b):
        # Z_i window is ticks (i-2)*ell+1 .. i*ell; intersection condition
        # (i-2)*ell+1 <= b and i*ell >= a
        lo = max(2, -(-a // ell))
        hi = min(m, (b - 1) // ell + 2)
        if lo <= hi:
            rejected[lo - 2:hi - 1] = True

    for a, b in report.events:
        reject_span(a, b)
    for i0 in report.increment_flags:
        reject_span(max(int(i0) - 1, 1), min(int(i0), geom.n))

    if rejected.all():
        raise ValueError("all pre-averaged values rejected; cannot estimate")
    z = zs.z.copy()
    good = np.flatnonzero(~rejected)
    bad = np.flatnonzero(rejected)
    if len(bad):
        pos = np.searchsorted(good, bad)
        for p, where in zip(bad, pos):
            left = zs.z[good[where - 1]] if where > 0 else None
            right = zs.z[good[where]] if where < len(good) else None
            if left is None:
                z[p] = right
            elif right is None:
                z[p] = left
            else:
                z[p] = 0.5 * (left + right)
    return PreAveragedSeries(z, geom, rejected)

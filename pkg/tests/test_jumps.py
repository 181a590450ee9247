"""Scan and increment jump tests, event merging, and value repair."""

import math

import numpy as np
import pytest

from spotvol import sim, threshold
from spotvol.jumps import (DEFAULT_THRESHOLD_T, JumpReport, ScanStatistic,
                           detect, increment_test, repair, scan_statistic,
                           scan_test)
from spotvol.preaverage import (BlockGeometry, PreAveragedSeries, TickSeries,
                                catalog, noise_level)


def direct_scan(y, lam, r):
    """Plain-loop evaluation of the windowed statistic at center tick r."""
    n = len(y)
    m1 = int(n ** 0.75)
    hw = -(-n // m1)
    total = 0.0
    for j in range(max(r - hw, 1), min(r + hw, n) + 1):
        total += lam(1.0 + (j - r) * (m1 / n)) * y[j - 1]
    return total * (m1 / n)


def heston_with_noise(n, master, rep=0):
    params = sim.HestonParams()
    x, v, _ = next(sim.heston_paths(params, n, 1, [master, 0, rep]))
    spec = sim.NoiseSpec(kind="gaussian", std=2e-4)
    y = sim.add_noise(TickSeries(x[0]), spec, [master, 1, rep])
    return y.values.copy(), v[0]


def empty_report(n=120, block_len=10):
    hw = 10
    return JumpReport([], [], DEFAULT_THRESHOLD_T, 38, 1e-8, hw, n, True, [])


# ---------------------------------------------------------------------------
# scan statistic


def test_scan_geometry_fields():
    n = 2048
    scan = scan_statistic(np.zeros(n))
    assert scan.m1 == int(n ** 0.75)
    assert scan.halfwidth == -(-n // scan.m1)
    assert scan.r[0] == scan.halfwidth + 1
    assert scan.r[-1] == n - scan.halfwidth
    assert len(scan.q) == len(scan.r) == n - 2 * scan.halfwidth


def test_scan_constant_series_is_zero():
    scan = scan_statistic(np.full(2048, 100.0))
    assert np.max(np.abs(scan.q)) < 1e-10


def test_scan_matches_direct_summation():
    rng = np.random.default_rng(17)
    y = rng.standard_normal(2048)
    for lam in (catalog(3), catalog(4)):
        scan = scan_statistic(y, lam)
        for idx in (0, 100, 777, len(scan.q) - 1):
            want = direct_scan(y, lam, int(scan.r[idx]))
            assert scan.q[idx] == pytest.approx(want, rel=1e-12, abs=1e-15)


def test_scan_single_jump_peak():
    n = 2048
    jump_tick = 1024  # first tick (1-based) at the shifted level
    delta = 1e-3
    y = np.zeros(n)
    y[jump_tick - 1:] = delta
    scan = scan_statistic(y)
    lam = catalog(3)
    direct_max = max(abs(direct_scan(y, lam, r))
                     for r in range(jump_tick - 2 * scan.halfwidth,
                                    jump_tick + 2 * scan.halfwidth + 1))
    peak_idx = int(np.argmax(np.abs(scan.q)))
    assert abs(int(scan.r[peak_idx]) - jump_tick) <= scan.halfwidth
    assert abs(scan.q[peak_idx]) >= 0.9 * direct_max
    assert abs(scan.q[peak_idx]) == pytest.approx(
        abs(direct_scan(y, lam, int(scan.r[peak_idx]))), rel=1e-10)


def test_scan_pure_noise_std():
    # With the step window the squared weight integrates to 3 over its
    # support, so Var(Q) ~ 3 * tau^2 * m1 / n.
    n = 15000
    tau = 2e-4
    rng = np.random.default_rng(5)
    ssq = s1 = 0.0
    cnt = 0
    for _ in range(1000):
        scan = scan_statistic(tau * rng.standard_normal(n))
        ssq += float(np.dot(scan.q, scan.q))
        s1 += float(scan.q.sum())
        cnt += len(scan.q)
    std = math.sqrt(ssq / cnt - (s1 / cnt) ** 2)
    oracle = tau * math.sqrt(3.0 * scan.m1 / n)
    assert std == pytest.approx(oracle, rel=0.10)


def test_scan_needs_256_ticks():
    with pytest.raises(ValueError):
        scan_statistic(np.zeros(255))


# ---------------------------------------------------------------------------
# scan t-test


def _iid_scan(n_draws, seed=7):
    rng = np.random.default_rng(seed)
    q = rng.standard_normal(n_draws)
    return ScanStatistic(q, np.arange(1, n_draws + 1), 0, 1, n_draws)


def test_scan_test_gaussian_false_alarm_rate():
    scan = _iid_scan(100000)
    tail = 0.5 * math.erfc(DEFAULT_THRESHOLD_T / math.sqrt(2.0))
    one = scan_test(scan, two_sided=False)
    two = scan_test(scan, two_sided=True)
    assert 0.5 * tail < len(one) / len(scan) < 2.0 * tail
    assert 0.5 * 2 * tail < len(two) / len(scan) < 2.0 * 2 * tail
    assert set(one.tolist()) <= set(two.tolist())


def test_scan_test_constant_blocks_skipped():
    scan = ScanStatistic(np.full(4096, 3.25), np.arange(1, 4097), 0, 1, 4096)
    assert len(scan_test(scan)) == 0


def test_scan_test_needs_two_blocks():
    scan = ScanStatistic(np.zeros(100), np.arange(1, 101), 0, 1, 65536)
    with pytest.raises(ValueError):
        scan_test(scan)


def test_scan_test_jump_power():
    # Heston day with one added jump at t = 0.4, size N(0, 1e-6).  Any jump
    # at least one size-std tall is flagged essentially always; smaller
    # draws fall under the detection floor set by the Q background, so the
    # unconditional rate settles near 0.7.
    params = sim.HestonParams()
    n = 15000
    spec = sim.NoiseSpec(kind="gaussian", std=2e-4)
    reps = 200
    hits = big_hits = big_tot = 0
    rep = 0
    for x, _v, _ in sim.heston_paths(params, n, reps, [21, 0]):
        for r in range(x.shape[0]):
            y = sim.add_noise(TickSeries(x[r]), spec, [21, 1, rep])
            size = np.random.default_rng([21, 2, rep]).normal(0.0, 1e-3)
            vals = y.values.copy()
            vals[6000:] += size
            scan = scan_statistic(vals)
            flags = scan_test(scan)
            hit = bool(len(flags)
                       and np.min(np.abs(flags - 6000)) <= scan.halfwidth)
            hits += hit
            if abs(size) >= 1e-3:
                big_tot += 1
                big_hits += hit
            rep += 1
    assert hits / reps >= 0.60
    assert big_tot > 50
    assert big_hits / big_tot >= 0.95


# ---------------------------------------------------------------------------
# increment test


def test_increment_threshold_arithmetic():
    n = 15000
    tau_sq = 1e-8
    y = np.zeros(n)
    y[7000:] += 10.0 * math.sqrt(tau_sq)  # 100 tau^2 > 4 tau^2 log n ~ 38.5
    np.testing.assert_array_equal(increment_test(y, tau_sq), [7001])
    y2 = np.zeros(n)
    y2[7000:] += 6.0 * math.sqrt(tau_sq)  # 36 tau^2 stays under the bound
    assert len(increment_test(y2, tau_sq)) == 0


def test_increment_constant_series():
    assert len(increment_test(np.full(500, 7.0), 1e-8)) == 0
    assert len(increment_test(np.full(500, 7.0), 0.0)) == 0


def test_increment_false_flags_rare():
    n = 15000
    rng = np.random.default_rng(11)
    total = 0
    for _ in range(500):
        y = 2e-4 * rng.standard_normal(n)
        total += len(increment_test(y, noise_level(y)))
    assert total / 500 < 1.0


def test_increment_needs_two_ticks():
    with pytest.raises(ValueError):
        increment_test(np.zeros(1), 1e-8)


# ---------------------------------------------------------------------------
# combined detection


def test_detect_events_cover_injected_jump():
    vals, _ = heston_with_noise(15000, 33)
    vals[6750:] += 2e-3
    report = detect(vals)
    assert report.tau_sq_hat == noise_level(vals)
    assert any(a <= 6750 <= b for a, b in report.events)
    assert 6751 in report.increment_flags
    assert all(1 <= a <= b <= 15000 for a, b in report.events)
    d = report.to_dict()
    assert d["n_scan_flags"] == len(report.scan_flags)
    assert d["events"][0]["time_lo"] == report.events[0][0] / 15000


def test_detect_translation_invariant():
    vals, _ = heston_with_noise(15000, 33)
    vals[6750:] += 2e-3
    base = detect(vals)
    for shift in (3.7, -110.0, 1e4):
        moved = detect(vals + shift)
        np.testing.assert_array_equal(base.scan_flags, moved.scan_flags)
        np.testing.assert_array_equal(base.increment_flags,
                                      moved.increment_flags)
        assert base.events == moved.events


# ---------------------------------------------------------------------------
# repair


def _series(rejected_idx=()):
    geom = BlockGeometry.from_block_count(120, 12)
    z = np.arange(11, dtype=np.float64)
    mask = np.zeros(11, dtype=bool)
    mask[list(rejected_idx)] = True
    return PreAveragedSeries(z, geom, mask)


def test_repair_no_flags_is_identity():
    zs = _series()
    out = repair(zs, empty_report())
    assert out is not zs
    np.testing.assert_array_equal(out.z, zs.z)
    assert not out.rejected.any()


def test_repair_interior_neighbor_mean():
    out = repair(_series([5]), empty_report())
    assert out.z[5] == 5.0  # neighbors 4.0 and 6.0
    np.testing.assert_array_equal(np.delete(out.z, 5),
                                  np.delete(np.arange(11.0), 5))


def test_repair_run_shares_outer_neighbors():
    out = repair(_series([3, 4, 5]), empty_report())
    np.testing.assert_array_equal(out.z[3:6], [4.0, 4.0, 4.0])


def test_repair_boundaries_one_sided():
    assert repair(_series([0]), empty_report()).z[0] == 1.0
    assert repair(_series([10]), empty_report()).z[10] == 9.0


def test_repair_increment_flag_rejects_covering_windows():
    # Tick 45 sits in the windows of Z_5 (ticks 31..50) and Z_6 (41..60).
    zs = _series()
    rep = JumpReport([], [45], DEFAULT_THRESHOLD_T, 38, 1e-8, 10, 120, True,
                     [])
    out = repair(zs, rep)
    np.testing.assert_array_equal(np.flatnonzero(out.rejected), [3, 4])
    assert out.z[3] == out.z[4] == 3.5  # neighbors 2.0 and 5.0
    np.testing.assert_array_equal(out.z[~out.rejected], zs.z[~out.rejected])


def test_repair_event_span_rejects_touched_windows():
    zs = _series()
    rep = JumpReport([40], [], DEFAULT_THRESHOLD_T, 38, 1e-8, 10, 120, True,
                     [(35, 42)])
    out = repair(zs, rep)
    # windows of Z_4 (21..40), Z_5 (31..50), Z_6 (41..60) touch [35, 42]
    np.testing.assert_array_equal(np.flatnonzero(out.rejected), [2, 3, 4])


def test_repair_all_rejected_error():
    rep = JumpReport([], [], DEFAULT_THRESHOLD_T, 38, 1e-8, 10, 120, True,
                     [(1, 120)])
    with pytest.raises(ValueError):
        repair(_series(), rep)


def test_repair_does_not_mutate_input():
    zs = _series([5])
    before = zs.z.copy()
    repair(zs, empty_report())
    np.testing.assert_array_equal(zs.z, before)


# ---------------------------------------------------------------------------
# pipeline-level behavior


def test_filter_cost_on_clean_data_small():
    params = sim.HestonParams()
    n = 15000
    spec = sim.NoiseSpec(kind="gaussian", std=2e-4)
    reps = 100
    ise = {False: 0.0, True: 0.0}
    rep = 0
    for x, v, _ in sim.heston_paths(params, n, reps, [41, 0]):
        for r in range(x.shape[0]):
            y = sim.add_noise(TickSeries(x[r]), spec, [41, 1, rep])
            for det in (False, True):
                curve = threshold.asve(y, jump_filter=det)
                m = curve.meta["m"]
                ell = curve.meta["block_len"]
                truth = v[r][np.arange(1, m) * ell - 1]
                diff = curve.values - truth
                ise[det] += float(np.mean(diff * diff))
            rep += 1
    assert abs(ise[True] / ise[False] - 1.0) < 0.25


def test_pipeline_removes_injected_jump():
    vals, truth = heston_with_noise(15000, 33)
    vals[6750:] += 2e-3
    filtered = threshold.asve(TickSeries(vals), jump_filter=True)
    raw = threshold.asve(TickSeries(vals), jump_filter=False)
    m = filtered.meta["m"]
    ell = filtered.meta["block_len"]
    ref = truth[np.arange(1, m) * ell - 1]
    ise_f = float(np.mean((filtered.values - ref) ** 2))
    ise_r = float(np.mean((raw.values - ref) ** 2))
    assert ise_f < ise_r / 3.0
    assert filtered.meta["jump_report"]["n_scan_flags"] > 0

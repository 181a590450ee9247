"""Command line interface: ingestion, configuration, orchestration, output.

Subcommands: estimate, simulate, covol, signature, calibrate-table, mc.
Tick files are CSV with header ``time,price``; curve files are CSV with
header ``t,sigma2``.  All runs are pure functions of (input bytes, config,
seed); ``meta.json`` records everything needed to reproduce a run.
"""

import csv
import io
import json
import math
import os
from dataclasses import dataclass, fields

import click
import numpy as np

from . import __version__
from . import covol as covol_mod
from . import sim, threshold, timescheme, tuning
from ._kernels import HAVE_NATIVE, preaverage_core
from .preaverage import TickSeries, block_geometry, catalog
from .timescheme import RawTickData

# reference values for the robustness and noise-level studies (MISE scale
# 1e-11; rMISE dimensionless)
TABLE2_REF = {
    ("gaussian", 1): (1.41e-11, 0.11),
    ("gaussian", 3): (2.39e-11, 0.19),
    ("gaussian", 10): (5.05e-11, 0.39),
    ("uniform", 1): (1.40e-11, 0.12),
    ("uniform", 3): (2.40e-11, 0.19),
    ("uniform", 10): (5.08e-11, 0.40),
}
TABLE3_REF = {
    ("pure", False): 1.41e-11,
    ("rounded", False): 1.41e-11,
    ("jumps", False): 12.64e-11,
    ("jumps-rounded", False): 12.86e-11,
    ("pure", True): 1.68e-11,
    ("rounded", True): 1.69e-11,
    ("jumps", True): 1.69e-11,
    ("jumps-rounded", True): 1.70e-11,
}


@dataclass
class Config:
    """Estimation configuration; defaults reproduce the shipped study
    setup (sine weight function, c = 0.3 * SNR, jump filter on)."""
    lambda_id: int = 4
    scan_lambda_id: int = 3
    c: float = None  # None selects the automatic rule
    c_over_snr: float = tuning.C_OVER_SNR_DEFAULT
    j0: int = 2
    j_I: int = None  # None selects the data-driven default
    jump_filter: bool = True
    jump_t: float = 2.81
    two_sided_jumps: bool = True
    time_scheme: str = "tick"
    seed: int = 0

    def merge(self, **overrides):
        for key, value in overrides.items():
            if value is not None:
                setattr(self, key, value)
        if self.time_scheme not in ("tick", "real"):
            raise ValueError(f"unknown time scheme {self.time_scheme!r}")
        return self


_CONFIG_PARSERS = {
    "lambda_id": int, "scan_lambda_id": int, "j0": int, "seed": int,
    "c_over_snr": float, "jump_t": float, "time_scheme": str,
}


def _parse_optional(cast):
    def parse(text):
        return None if text.lower() in ("auto", "none") else cast(text)
    return parse


def _parse_bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_CONFIG_PARSERS["c"] = _parse_optional(float)
_CONFIG_PARSERS["j_I"] = _parse_optional(int)
_CONFIG_PARSERS["jump_filter"] = _parse_bool
_CONFIG_PARSERS["two_sided_jumps"] = _parse_bool


def load_config(path):
    """Plain key=value file; '#' starts a comment; keys match Config."""
    cfg = Config()
    known = {f.name for f in fields(Config)}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw_line in enumerate(fh, start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "j_i":
                key = "j_I"
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                setattr(cfg, key, _CONFIG_PARSERS[key](value))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return cfg


def ingest(path, min_rows=100):
    """Read a tick CSV into RawTickData.

    Duplicate timestamps collapse to the last price; rows with NaN or
    non-positive prices are dropped and counted.  Returns (data, dropped).
    """
    times = []
    prices = []
    dropped = 0
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if [c.strip().lower() for c in header] != ["time", "price"]:
            raise ValueError(f"{path}: expected header 'time,price'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 2 fields")
            try:
                t = float(row[0])
                p = float(row[1])
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: unparsable row {row!r}") from None
            if not math.isfinite(t):
                raise ValueError(f"{path}: line {lineno}: bad timestamp")
            if math.isnan(p) or p <= 0:
                dropped += 1
                continue
            if times:
                if t == times[-1]:
                    prices[-1] = p
                    continue
                if t < times[-1]:
                    raise ValueError(
                        f"{path}: line {lineno}: timestamps not increasing")
            times.append(t)
            prices.append(p)
    if len(times) < min_rows:
        raise ValueError(
            f"{path}: too few observations ({len(times)} < {min_rows})")
    return RawTickData(np.array(times), np.array(prices)), dropped


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    return obj


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path_or_dash, header, rows):
    if path_or_dash == "-":
        out = click.get_text_stream("stdout")
        _dump_csv(out, header, rows)
    else:
        with open(path_or_dash, "w", encoding="utf-8", newline="") as fh:
            _dump_csv(fh, header, rows)


def _dump_csv(stream, header, rows):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(c) for c in row])


def _format_cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def run_estimate(cfg, input_path, outdir, min_rows=100, plot=False):
    """Full estimation pipeline; writes curve.csv / meta.json (+ plot.svg)."""
    raw, dropped = ingest(input_path, min_rows)
    log_ref = float(raw.prices[0])
    ticks = timescheme.to_tick_time(raw, log_ref)
    curve = threshold.asve(
        ticks, lam=catalog(cfg.lambda_id), c=cfg.c, j0=cfg.j0, j_I=cfg.j_I,
        jump_filter=cfg.jump_filter, jump_t=cfg.jump_t,
        two_sided_jumps=cfg.two_sided_jumps,
        scan_lam=catalog(cfg.scan_lambda_id), c_over_snr=cfg.c_over_snr)
    m = curve.meta["m"]
    grid = np.arange(1, m) / m
    out_curve = curve
    intensity = None
    if cfg.time_scheme == "real":
        intensity = timescheme.estimate_intensity(raw, grid=grid)
        out_curve = timescheme.tick_to_real(curve, intensity)

    os.makedirs(outdir, exist_ok=True)
    curve_path = os.path.join(outdir, "curve.csv")
    _write_csv(curve_path, ["t", "sigma2"],
               list(zip(grid.tolist(), out_curve.values.tolist())))
    meta = {
        "version": __version__,
        "input": os.path.basename(input_path),
        "dropped_rows": dropped,
        "log_ref": log_ref,
        "time_scheme": cfg.time_scheme,
        "seed": cfg.seed,
        "config": {
            "lambda_id": cfg.lambda_id, "scan_lambda_id": cfg.scan_lambda_id,
            "c": cfg.c, "c_over_snr": cfg.c_over_snr, "j0": cfg.j0,
            "j_I": cfg.j_I, "jump_filter": cfg.jump_filter,
            "jump_t": cfg.jump_t, "two_sided_jumps": cfg.two_sided_jumps,
        },
    }
    meta.update(curve.meta)
    if intensity is not None:
        meta["intensity"] = {"grid": intensity.grid, "nu": intensity.nu,
                             "bandwidth": intensity.bandwidth}
    meta_path = os.path.join(outdir, "meta.json")
    _write_json(meta_path, meta)
    outputs = {"curve": curve_path, "meta": meta_path}
    if plot:
        plot_path = os.path.join(outdir, "plot.svg")
        _write_plot(plot_path, raw, grid, out_curve.values)
        outputs["plot"] = plot_path
    return outputs


def _write_plot(path, raw, grid, values):
    try:
        import matplotlib
    except ImportError:
        raise ValueError(
            "plotting requires matplotlib (install the 'plot' extra)")
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    session = (raw.times - raw.times[0]) / max(raw.span, 1e-300)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.plot(session, raw.prices, lw=0.5, color="#1f3d7a")
    ax1.set_ylabel("price")
    ax2.step(grid, values, where="post", color="#a33")
    ax2.set_ylabel("spot variance")
    ax2.set_xlabel("session time")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def run_signature(values, steps):
    """Realized variance of every k-th observation, per subsample step."""
    y = np.asarray(values, dtype=np.float64)
    n = len(y)
    rows = []
    for k in steps:
        k = int(k)
        if k < 1:
            raise ValueError("subsample step must be >= 1")
        if k > n // 2:
            raise ValueError(f"subsample step {k} too large for {n} ticks")
        d = np.diff(y[::k])
        rows.append((k, float(np.dot(d, d))))
    return rows


# ---------------------------------------------------------------------------
# Monte Carlo studies


def study_table1(reps, seed, n=15000, indices=None):
    """Tuning constants per catalog row plus a constant-parameter MC check.

    The toy model is sigma = tau = 1: a Brownian path sampled at i/n plus
    standard normal noise.  The integrated-volatility estimate is compared
    with the closed-form limit of MSE*sqrt(n) at the optimal c.
    """
    if indices is None:
        indices = range(1, 8)
    rows = []
    for idx in indices:
        lam = catalog(idx)
        res = tuning.optimal_c(lam, 1.0)
        c = res.c_star
        geom = block_geometry(n, c)
        w = lam.weights(geom.block_len)
        wsq = w * w
        rng = np.random.default_rng([seed, idx])
        errs = np.empty(reps)
        done = 0
        chunk = max(1, min(reps, 64))
        while done < reps:
            rows_now = min(chunk, reps - done)
            z = rng.standard_normal((rows_now, n))
            x = np.cumsum(z, axis=1) / math.sqrt(n)
            noise = rng.standard_normal((rows_now, n))
            y = x + noise
            for r in range(rows_now):
                ybar, bias = preaverage_core(y[r], geom.block_len, geom.m,
                                             w, wsq)
                zvals = geom.m * (ybar * ybar - bias)
                errs[done + r] = float(np.sum(zvals)) / geom.m - 1.0
            done += rows_now
        sq = errs * errs
        mse_mc = float(np.mean(sq)) * math.sqrt(n)
        se = float(np.std(sq, ddof=1)) / math.sqrt(reps) * math.sqrt(n)
        ref_c, ref_mse = tuning.REFERENCE_TUNING[idx]
        rows.append({
            "index": idx, "name": lam.name,
            "c_star": res.c_star_over_snr, "mse_const": res.mse_const,
            "mse_mc": mse_mc, "mc_se": se,
            "ref_c": ref_c, "ref_mse": ref_mse,
        })
    return rows


def _truth_on_curve_grid(v_row, meta):
    m = meta["m"]
    ell = meta["block_len"]
    return v_row[np.arange(1, m) * ell - 1]


def study_table2(reps, seed, n=15000, kinds=("gaussian", "uniform"),
                 levels=(1, 3, 10)):
    """MISE/rMISE under two noise distributions and three noise levels.

    Latent paths are shared across settings, and the two noise kinds at a
    given level share their underlying uniform draws (common random
    numbers), so the gaussian-vs-uniform comparison is paired rep for rep.
    Noise seeds are derived per (replication, level) from the master seed.
    """
    params = sim.HestonParams()
    settings = [(kind, lvl) for kind in kinds for lvl in levels]
    acc = {s: {"ise": 0.0, "ise2": 0.0, "rise": 0.0, "rise2": 0.0}
           for s in settings}
    rep = 0
    for x, v, _clips in sim.heston_paths(params, n, reps, [seed, 0]):
        for r in range(x.shape[0]):
            latent = TickSeries(x[r])
            for kind, lvl in settings:
                li = levels.index(lvl)
                spec = sim.NoiseSpec(kind=kind, std=lvl / 5000.0)
                y = sim.add_noise(latent, spec, [seed, 1, rep, li])
                curve = threshold.asve(y, jump_filter=False)
                truth = _truth_on_curve_grid(v[r], curve.meta)
                diff = curve.values - truth
                ise = float(np.mean(diff * diff))
                rise = ise / float(np.mean(truth * truth))
                a = acc[(kind, lvl)]
                a["ise"] += ise
                a["ise2"] += ise * ise
                a["rise"] += rise
                a["rise2"] += rise * rise
            rep += 1
    rows = []
    for kind, lvl in settings:
        a = acc[(kind, lvl)]
        mean_ise = a["ise"] / reps
        var_ise = max(a["ise2"] / reps - mean_ise ** 2, 0.0)
        mean_rise = a["rise"] / reps
        ref_mise, ref_rmise = TABLE2_REF[(kind, lvl)]
        rows.append({
            "kind": kind, "noise_std": lvl / 5000.0,
            "mise": mean_ise, "se": math.sqrt(var_ise / reps),
            "rmise": mean_rise,
            "ref_mise": ref_mise, "ref_rmise": ref_rmise,
        })
    return rows


def study_table3(reps, seed, n=15000):
    """MISE under rounding and jumps, with and without the jump filter.

    All eight scenario/detection combinations share each replication's
    latent path, noise draw, and jump draw.
    """
    params = sim.HestonParams()
    noise = sim.NoiseSpec(kind="gaussian", std=1.0 / 5000.0)
    jump_spec = sim.JumpSpec(intensity=1.0 / 3.0, size_std=1e-3)
    combos = [(scn, det) for scn in ("pure", "rounded", "jumps",
                                     "jumps-rounded")
              for det in (False, True)]
    acc = {cb: {"ise": 0.0, "ise2": 0.0} for cb in combos}
    rep = 0
    for x, v, _clips in sim.heston_paths(params, n, reps, [seed, 0]):
        for r in range(x.shape[0]):
            latent = TickSeries(x[r])
            y_pure = sim.add_noise(latent, noise, [seed, 1, rep])
            y_jump, _jt = sim.add_jumps(y_pure, jump_spec, [seed, 2, rep])
            variants = {
                "pure": y_pure,
                "rounded": sim.round_prices(y_pure, 110.0, 0.01),
                "jumps": y_jump,
                "jumps-rounded": sim.round_prices(y_jump, 110.0, 0.01),
            }
            for scn, det in combos:
                curve = threshold.asve(variants[scn], jump_filter=det)
                truth = _truth_on_curve_grid(v[r], curve.meta)
                diff = curve.values - truth
                ise = float(np.mean(diff * diff))
                a = acc[(scn, det)]
                a["ise"] += ise
                a["ise2"] += ise * ise
            rep += 1
    rows = []
    for scn, det in combos:
        a = acc[(scn, det)]
        mean_ise = a["ise"] / reps
        var_ise = max(a["ise2"] / reps - mean_ise ** 2, 0.0)
        rows.append({
            "scenario": scn, "detection": det,
            "mise": mean_ise, "se": math.sqrt(var_ise / reps),
            "ref_mise": TABLE3_REF[(scn, det)],
        })
    return rows


# ---------------------------------------------------------------------------
# commands


@click.group()
@click.version_option(__version__)
def main():
    """Adaptive spot volatility estimation for noisy tick data."""


def _config_from(config_path, **overrides):
    cfg = load_config(config_path) if config_path else Config()
    return cfg.merge(**overrides)


@main.command()
@click.option("--input", "-i", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--outdir", "-o", default=".", type=click.Path(file_okay=False))
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--lambda-id", type=int, default=None)
@click.option("--c", type=float, default=None)
@click.option("--c-over-snr", type=float, default=None)
@click.option("--j0", type=int, default=None)
@click.option("--j-i", "j_I", type=int, default=None)
@click.option("--jump-filter/--no-jump-filter", "jump_filter", default=None)
@click.option("--jump-t", type=float, default=None)
@click.option("--two-sided-jumps/--one-sided-jumps", "two_sided_jumps",
              default=None)
@click.option("--time-scheme", type=click.Choice(["tick", "real"]),
              default=None)
@click.option("--seed", type=int, default=None)
@click.option("--min-rows", type=int, default=100)
@click.option("--plot", is_flag=True, default=False)
def estimate(input_path, outdir, config_path, min_rows, plot, **overrides):
    """Estimate a spot volatility curve from a tick CSV."""
    try:
        cfg = _config_from(config_path, **overrides)
        outputs = run_estimate(cfg, input_path, outdir, min_rows, plot)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    for name, path in outputs.items():
        click.echo(f"{name}: {path}")


@main.command()
@click.option("--n", type=int, default=15000)
@click.option("--seed", type=int, default=0)
@click.option("--noise-std", type=float, default=1.0 / 5000.0)
@click.option("--noise-kind", type=click.Choice(["gaussian", "uniform"]),
              default="gaussian")
@click.option("--jump-intensity", type=float, default=0.0)
@click.option("--jump-size-std", type=float, default=1e-3)
@click.option("--round-tick", type=float, default=0.0,
              help="price rounding grid; 0 disables")
@click.option("--base-price", type=float, default=110.0)
@click.option("--outdir", "-o", default=".", type=click.Path(file_okay=False))
def simulate(n, seed, noise_std, noise_kind, jump_intensity, jump_size_std,
             round_tick, base_price, outdir):
    """Simulate a synthetic trading day and write it as tick CSV."""
    try:
        params = sim.HestonParams()
        seeds = np.random.SeedSequence(seed).spawn(3)
        day = sim.simulate_heston(params, n, seeds[0])
        y = sim.add_noise(day.ticks, sim.NoiseSpec(noise_kind, noise_std),
                          seeds[1])
        jump_times = []
        if jump_intensity > 0:
            y, jump_times = sim.add_jumps(
                y, sim.JumpSpec(jump_intensity, jump_size_std), seeds[2])
        if round_tick > 0:
            y = sim.round_prices(y, base_price, round_tick)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    os.makedirs(outdir, exist_ok=True)
    ticks_path = os.path.join(outdir, "ticks.csv")
    prices = base_price * np.exp(y.values)
    _write_csv(ticks_path, ["time", "price"],
               list(zip(y.times.tolist(), prices.tolist())))
    truth_path = os.path.join(outdir, "truth.csv")
    _write_csv(truth_path, ["t", "sigma2"],
               list(zip(y.times.tolist(), day.true_sigma2.tolist())))
    manifest_path = os.path.join(outdir, "manifest.json")
    _write_json(manifest_path, {
        "version": __version__, "n": n, "seed": seed,
        "model": {"rho": params.rho, "theta": params.theta,
                  "kappa": params.kappa, "eps": params.eps,
                  "sigma0_sq": params.sigma0_sq, "x0": params.x0,
                  "feller_ratio": params.feller_ratio,
                  "oversample": sim.OVERSAMPLE},
        "noise": {"kind": noise_kind, "std": noise_std},
        "jumps": {"intensity": jump_intensity, "size_std": jump_size_std,
                  "times": jump_times},
        "rounding": {"tick": round_tick, "base_price": base_price},
        "clip_fraction": day.clip_fraction,
    })
    for path in (ticks_path, truth_path, manifest_path):
        click.echo(path)


@main.command("covol")
@click.option("--input1", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--input2", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--outdir", "-o", default=".", type=click.Path(file_okay=False))
@click.option("--lambda-id", type=int, default=4)
@click.option("--c", type=float, default=None)
@click.option("--j0", type=int, default=2)
@click.option("--j-i", "j_I", type=int, default=None)
@click.option("--min-rows", type=int, default=100)
def covol_cmd(input1, input2, outdir, lambda_id, c, j0, j_I, min_rows):
    """Estimate a spot covolatility curve from two synchronous tick CSVs."""
    try:
        raw1, dropped1 = ingest(input1, min_rows)
        raw2, dropped2 = ingest(input2, min_rows)
        if not np.array_equal(raw1.times, raw2.times):
            raise ValueError("the two inputs must share identical timestamps")
        pair = covol_mod.PairedTicks(
            timescheme.to_tick_time(raw1, float(raw1.prices[0])),
            timescheme.to_tick_time(raw2, float(raw2.prices[0])))
        curve = covol_mod.covol_estimate(pair, lam=catalog(lambda_id), c=c,
                                         j0=j0, j_I=j_I)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    os.makedirs(outdir, exist_ok=True)
    m = curve.meta["m"]
    grid = np.arange(1, m) / m
    curve_path = os.path.join(outdir, "curve.csv")
    _write_csv(curve_path, ["t", "sigma2"],
               list(zip(grid.tolist(), curve.values.tolist())))
    meta_path = os.path.join(outdir, "meta.json")
    payload = {"version": __version__,
               "inputs": [os.path.basename(input1),
                          os.path.basename(input2)],
               "dropped_rows": [dropped1, dropped2]}
    payload.update(curve.meta)
    _write_json(meta_path, payload)
    click.echo(curve_path)
    click.echo(meta_path)


@main.command()
@click.option("--input", "-i", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--steps", default="1,2,3,4,5,6,8,10,13,16,20,26,32,40,50,64")
@click.option("--output", default="signature.csv")
@click.option("--min-rows", type=int, default=100)
def signature(input_path, steps, output, min_rows):
    """Realized variance against subsampling step (noise diagnostic)."""
    try:
        raw, _dropped = ingest(input_path, min_rows)
        ticks = timescheme.to_tick_time(raw, float(raw.prices[0]))
        parsed = [int(s) for s in steps.split(",") if s.strip()]
        rows = run_signature(ticks.values, parsed)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    _write_csv(output, ["step", "realized_variance"], rows)
    if output != "-":
        click.echo(output)


@main.command("calibrate-table")
@click.option("--output", default="-")
def calibrate_table(output):
    """Optimal tuning constants for the shipped weight functions."""
    rows = tuning.calibration_table()
    _write_csv(output, ["index", "name", "c_star", "mse_const", "ref_c",
                        "ref_mse"],
               [(r["index"], r["name"], r["c_star_over_snr"], r["mse_const"],
                 r["ref_c"], r["ref_mse"]) for r in rows])
    if output != "-":
        click.echo(output)


_STUDY_COLUMNS = {
    "table1": ["index", "name", "c_star", "mse_const", "mse_mc", "mc_se",
               "ref_c", "ref_mse"],
    "table2": ["kind", "noise_std", "mise", "se", "rmise", "ref_mise",
               "ref_rmise"],
    "table3": ["scenario", "detection", "mise", "se", "ref_mise"],
}


def run_mc(study, reps, seed):
    if reps < 100:
        raise ValueError("need at least 100 replications")
    if study == "table1":
        return study_table1(reps, seed)
    if study == "table2":
        return study_table2(reps, seed)
    if study == "table3":
        return study_table3(reps, seed)
    raise ValueError(f"unknown study {study!r}")


@main.command()
@click.option("--study", type=click.Choice(["table1", "table2", "table3"]),
              required=True)
@click.option("--reps", type=int, default=1000)
@click.option("--seed", type=int, default=0)
@click.option("--output", default=None)
def mc(study, reps, seed, output):
    """Monte Carlo reproduction studies with reference values attached."""
    try:
        rows = run_mc(study, reps, seed)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    columns = _STUDY_COLUMNS[study]
    if output is None:
        output = f"{study}.csv"
    _write_csv(output, columns,
               [[row[c] for c in columns] for row in rows])
    if output != "-":
        click.echo(output)


if __name__ == "__main__":
    main()

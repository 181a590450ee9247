"""Adaptive spot volatility estimation from noisy high-frequency prices.

The pipeline: overlapping pre-averaging of log prices into locally
unbiased variance proxies, an orthonormal Haar transform, blockwise
risk-minimizing shrinkage with local studentization, and inversion back
to a piecewise-constant spot variance curve.  Companion tools cover
bias-free tuning of the averaging bandwidth, jump detection and repair,
conversion between tick time and calendar time, covolatility for
synchronous pairs, and a simulation harness with reference tables.
"""

__version__ = "0.1.0"

from ._kernels import HAVE_NATIVE
from .preaverage import (
    BlockGeometry,
    PreAverageFunction,
    PreAveragedSeries,
    TickSeries,
    block_geometry,
    catalog,
    catalog_size,
    noise_level,
    normalize,
    pre_average,
    scalar_product,
)
from .wavelet import VolatilityCurve, WaveletCoefficients, dwt, idwt, reconstruct
from .threshold import (
    SureSelection,
    asve,
    denoise_series,
    local_std,
    select_sure,
    shrink_level,
    sure_risk,
)
from .jumps import JumpReport, detect, increment_test, repair, scan_statistic, scan_test
from .tuning import (
    MseBreakdown,
    TuningResult,
    asymptotic_mse,
    calibration_table,
    estimate_snr,
    optimal_c,
    preav_covariance,
)
from .sim import (
    HestonParams,
    JumpSpec,
    NoiseSpec,
    SimulatedDay,
    add_jumps,
    add_noise,
    heston_paths,
    mise,
    rmise,
    round_prices,
    simulate_heston,
)
from .timescheme import (
    IntensityCurve,
    RawTickData,
    estimate_intensity,
    tick_to_real,
    to_tick_time,
    total_variation,
)
from .covol import PairedTicks, covol_estimate, covol_values

__all__ = [
    "__version__",
    "HAVE_NATIVE",
    "BlockGeometry",
    "PreAverageFunction",
    "PreAveragedSeries",
    "TickSeries",
    "block_geometry",
    "catalog",
    "catalog_size",
    "noise_level",
    "normalize",
    "pre_average",
    "scalar_product",
    "VolatilityCurve",
    "WaveletCoefficients",
    "dwt",
    "idwt",
    "reconstruct",
    "SureSelection",
    "asve",
    "denoise_series",
    "local_std",
    "select_sure",
    "shrink_level",
    "sure_risk",
    "JumpReport",
    "detect",
    "increment_test",
    "repair",
    "scan_statistic",
    "scan_test",
    "MseBreakdown",
    "TuningResult",
    "asymptotic_mse",
    "calibration_table",
    "estimate_snr",
    "optimal_c",
    "preav_covariance",
    "HestonParams",
    "JumpSpec",
    "NoiseSpec",
    "SimulatedDay",
    "add_jumps",
    "add_noise",
    "heston_paths",
    "mise",
    "rmise",
    "round_prices",
    "simulate_heston",
    "IntensityCurve",
    "RawTickData",
    "estimate_intensity",
    "tick_to_real",
    "to_tick_time",
    "total_variation",
    "PairedTicks",
    "covol_estimate",
    "covol_values",
]

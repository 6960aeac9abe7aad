"""Search experiments: time series, peak detection and scaling fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeConfig
from .spectral import SpectralSummary, predict
from .walk import (
    SearchTarget,
    WalkState,
    default_delta,
    oracle_array,
    tulsi_array,
    tulsi_initial_state,
    uniform_state,
    walk_array,
)

__all__ = [
    "MODES",
    "ConfigurationError",
    "SearchRun",
    "ScalingFit",
    "PredictionReport",
    "evolve",
    "run_search",
    "fit_scaling",
    "verify_prediction",
]

MODES = ("akr", "tulsi")
WINDOW_FACTOR = 3
MIN_WINDOW_FACTOR = 2


class ConfigurationError(ValueError):
    """An experiment was requested with inconsistent or unusable settings."""


@dataclass
class SearchRun:
    cfg: LatticeConfig
    target: SearchTarget
    mode: str
    t: np.ndarray
    p_support: np.ndarray
    overlap_sq: np.ndarray
    t_star: int
    p_star: float
    predicted_steps: int
    delta: float | None = None

    @property
    def series(self) -> list[tuple[int, float, float]]:
        return list(zip(self.t.tolist(), self.p_support.tolist(), self.overlap_sq.tolist()))

    @property
    def expected_cost(self) -> float:
        """Steps needed on average with classical repetition, ``t* / p*``."""
        return self.t_star / self.p_star


@dataclass
class ScalingFit:
    mode: str
    sizes: list[int]
    Ns: list[int]
    times: list[int]
    peaks: list[float]
    exponent: float
    intercept: float
    r_squared: float
    sqrt_nlogn_coef: float
    sqrt_nlogn_residual: float
    peak_log_products: list[float] = field(default_factory=list)


@dataclass
class PredictionReport:
    m: int
    t_ratio: float
    p_times_B: float
    t_ratio_band: tuple[float, float]
    pB_band: tuple[float, float]

    @property
    def t_ratio_ok(self) -> bool:
        lo, hi = self.t_ratio_band
        return lo <= self.t_ratio <= hi

    @property
    def pB_ok(self) -> bool:
        lo, hi = self.pB_band
        return lo <= self.p_times_B <= hi

    @property
    def passed(self) -> bool:
        return self.t_ratio_ok and self.pB_ok


def _stepper(cfg, target, mode, delta, log_base, oracle_control):
    n1, n2 = target.n1, target.n2
    if mode == "akr":
        x = uniform_state(cfg).tensor.copy()
        return x, (lambda y: walk_array(oracle_array(y, n1, n2))), None
    if delta is None:
        delta = default_delta(cfg.N, log_base)
    x = tulsi_initial_state(cfg).tensor.copy()
    return x, (lambda y: tulsi_array(y, n1, n2, delta, oracle_control)), delta


def evolve(
    cfg: LatticeConfig,
    target: SearchTarget,
    steps: int,
    mode: str = "akr",
    delta: float | None = None,
    log_base: str = "natural",
    oracle_control: int = 0,
) -> WalkState:
    """State after ``steps`` search iterations from the uniform start."""
    if mode not in MODES:
        raise ConfigurationError(f"mode must be one of {MODES}, got {mode!r}")
    x, step, _ = _stepper(cfg, target, mode, delta, log_base, oracle_control)
    for _ in range(steps):
        x = step(x)
    return WalkState(x.reshape(-1), cfg, tulsi_mode=(mode == "tulsi"))


def run_search(
    cfg: LatticeConfig,
    target: SearchTarget | None = None,
    mode: str = "akr",
    max_steps: int | None = None,
    delta: float | None = None,
    log_base: str = "natural",
    oracle_control: int = 0,
    summary: SpectralSummary | None = None,
) -> SearchRun:
    """Evolve the uniform state and record the marked-cell probability.

    The window defaults to three times the spectral step prediction ``T``
    and must be at least ``2T``.  ``t_star`` is the first global argmax of
    the support probability over ``t = 0..max_steps``.
    """
    if mode not in MODES:
        raise ConfigurationError(f"mode must be one of {MODES}, got {mode!r}")
    if target is None:
        target = SearchTarget(0, 0, cfg)
    elif target.cfg != cfg:
        raise ConfigurationError("target belongs to a different lattice")
    if summary is None:
        summary = predict(cfg)
    T = summary.predicted_steps
    if max_steps is None:
        max_steps = WINDOW_FACTOR * T
    if max_steps < MIN_WINDOW_FACTOR * T:
        raise ConfigurationError(
            f"max_steps={max_steps} is below the minimum window {MIN_WINDOW_FACTOR}*T = {MIN_WINDOW_FACTOR * T}"
        )

    n1, n2 = target.n1, target.n2
    x, step, delta = _stepper(cfg, target, mode, delta, log_base, oracle_control)

    p = np.empty(max_steps + 1)
    ov = np.empty(max_steps + 1)
    for t in range(max_steps + 1):
        cell = x[..., n1, n2]
        p[t] = np.sum(cell.real**2 + cell.imag**2)
        amp = cell.sum(axis=(-2, -1)) / math.sqrt(6.0)
        ov[t] = np.sum(amp.real**2 + amp.imag**2)
        if t < max_steps:
            x = step(x)

    t_star = int(np.argmax(p))
    return SearchRun(
        cfg=cfg,
        target=target,
        mode=mode,
        t=np.arange(max_steps + 1),
        p_support=p,
        overlap_sq=ov,
        t_star=t_star,
        p_star=float(p[t_star]),
        predicted_steps=T,
        delta=delta,
    )


def loglog_fit(x, y) -> tuple[float, float, float]:
    """Least-squares line through ``(ln x, ln y)``: slope, intercept, R^2."""
    lx = np.log(np.asarray(x, float))
    ly = np.log(np.asarray(y, float))
    design = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def sqrt_nlogn_fit(Ns, times) -> tuple[float, float]:
    """Fit ``t = c sqrt(N ln N)``; returns ``c`` and the RMS relative residual."""
    Ns = np.asarray(Ns, float)
    t = np.asarray(times, float)
    x = np.sqrt(Ns * np.log(Ns))
    c = float(np.dot(x, t) / np.dot(x, x))
    rel = (t - c * x) / t
    return c, float(np.sqrt(np.mean(rel**2)))


def fit_scaling(runs: list[SearchRun]) -> ScalingFit:
    """Fit ``ln t_star`` against ``ln N`` across lattice sizes.

    Repeated sizes are allowed and simply weight the fit; duplicating the
    whole list leaves the result unchanged.
    """
    if len({r.cfg.m for r in runs}) < 4 or len(runs) < 4:
        raise ConfigurationError("a scaling fit needs at least 4 distinct lattice sizes")
    modes = {r.mode for r in runs}
    if len(modes) != 1:
        raise ConfigurationError(f"runs mix modes {sorted(modes)}")
    runs = sorted(runs, key=lambda r: r.cfg.m)
    Ns = [r.cfg.N for r in runs]
    times = [r.t_star for r in runs]
    if min(times) < 1:
        raise ConfigurationError("a run peaked at t = 0; its window shows no amplification")
    slope, intercept, r2 = loglog_fit(Ns, times)
    c, resid = sqrt_nlogn_fit(Ns, times)
    return ScalingFit(
        mode=modes.pop(),
        sizes=[r.cfg.m for r in runs],
        Ns=Ns,
        times=times,
        peaks=[r.p_star for r in runs],
        exponent=slope,
        intercept=intercept,
        r_squared=r2,
        sqrt_nlogn_coef=c,
        sqrt_nlogn_residual=resid,
        peak_log_products=[r.p_star * math.log(r.cfg.N) for r in runs],
    )


def verify_prediction(
    run: SearchRun,
    summary: SpectralSummary,
    t_ratio_band: tuple[float, float] = (0.2, 5.0),
    pB_band: tuple[float, float] = (0.1, 10.0),
) -> PredictionReport:
    """Compare a simulated peak with the spectral estimates."""
    if run.cfg != summary.cfg:
        raise ConfigurationError(
            f"run (m={run.cfg.m}) and summary (m={summary.cfg.m}) describe different lattices"
        )
    return PredictionReport(
        m=run.cfg.m,
        t_ratio=run.t_star / summary.predicted_steps,
        p_times_B=run.p_star * summary.B,
        t_ratio_band=t_ratio_band,
        pB_band=pB_band,
    )

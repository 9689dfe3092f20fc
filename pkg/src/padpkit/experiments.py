"""Seeded Monte Carlo studies: RMSEE sweeps and offset-error statistics.

Every trial derives its generator from (base seed, sweep index, trial
index) through a SeedSequence, so runs are bit-reproducible and trials
may execute in any order.  Set PADPKIT_THREADS to run trials of a sweep
point on a thread pool; reduction collects per-trial records in trial
order, so the output is identical to the serial run.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .angles import circular_delta
from .antenna import PatternKind
from .crlb import crlb_from_fim, crlb_single_alpha, crlb_single_phi, fim
from .estimation import (
    Method,
    PeakConfig,
    estimate_haed,
    estimate_o1,
    estimate_o2,
    haed_plus_refine,
    o2_deembed_constant,
)
from .synthesis import MpcTruth, simulate_padp

SWEEP_VARIABLES = ("output_snr_db", "angular_separation_deg", "true_angle_deg")


@dataclass(frozen=True)
class MonteCarloConfig:
    """Sweep specification for ``run_sweep``.

    ``mpcs`` is the base scenario; with ``randomize_angle`` (single-arrival
    studies) each trial redraws the azimuth uniformly on [0, 2*pi).
    ``off_grid_delay`` adds a uniform within-bin offset to every delay per
    trial.  The sweep variable overrides, per point: the noise height (from
    the output SNR of the first arrival), the second arrival's angle, or
    the first arrival's angle.
    """

    trials: int = 1000
    sweep_variable: str = "output_snr_db"
    sweep_values: tuple = ()
    mpcs: tuple = ()
    randomize_angle: bool = False
    off_grid_delay: bool = False
    methods: tuple = (Method.O1, Method.O2, Method.HAED)
    base_seed: int = 0
    upsample: int = 16
    peak: PeakConfig = field(default_factory=PeakConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.sweep_values:
            raise ValueError("sweep_values must be non-empty")
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise ValueError(f"unknown sweep variable {self.sweep_variable!r}")
        if not self.mpcs:
            raise ValueError("base scenario must contain at least one arrival")
        if self.sweep_variable == "angular_separation_deg" and len(self.mpcs) != 2:
            raise ValueError("separation sweeps need exactly two arrivals")


@dataclass(frozen=True)
class ErrorStats:
    """Summary of one error-sample population."""

    rmsee: float
    mean_err: float
    mean_abs_err: float
    mc_stderr: float
    cdf: np.ndarray
    n: int
    misses: int = 0
    false_alarms: int = 0

    @classmethod
    def from_samples(cls, samples, misses=0, false_alarms=0):
        s = np.asarray(samples, dtype=np.float64)
        if s.size == 0:
            return cls(np.nan, np.nan, np.nan, np.nan, s, 0, misses, false_alarms)
        return cls(
            rmsee=rmsee(s),
            mean_err=float(np.mean(s)),
            mean_abs_err=float(np.mean(np.abs(s))),
            mc_stderr=float(np.std(s) / np.sqrt(s.size)),
            cdf=np.sort(s),
            n=int(s.size),
            misses=misses,
            false_alarms=false_alarms,
        )


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    method: Method
    param: str
    truth_index: int
    stats: ErrorStats
    sqrt_crlb: float


def rmsee(errors):
    """Root mean square of an error sample (circular wrap applied upstream)."""
    e = np.asarray(errors, dtype=np.float64)
    if e.size == 0:
        raise ValueError("rmsee of an empty sample")
    return float(np.sqrt(np.mean(e**2)))


def associate(estimates, truths, delay_gate, angle_gate):
    """Greedy nearest-neighbour matching of estimates to ground truth.

    Candidates must fall within both gates (absolute delay difference and
    circular angle difference); the normalized Euclidean distance over the
    two axes ranks them.  Returns {truth_index: estimate} plus the count
    of unmatched estimates (false alarms).
    """
    pairs = []
    for ei, est in enumerate(estimates):
        for ti, tr in enumerate(truths):
            d_tau = abs(est.tau - tr.tau)
            d_phi = abs(float(circular_delta(est.phi, tr.phi)))
            if d_tau <= delay_gate and d_phi <= angle_gate:
                score = (d_tau / delay_gate) ** 2 + (d_phi / angle_gate) ** 2
                pairs.append((score, ei, ti))
    pairs.sort()
    matched = {}
    used = set()
    for _, ei, ti in pairs:
        if ei in used or ti in matched:
            continue
        matched[ti] = estimates[ei]
        used.add(ei)
    return matched, len(estimates) - len(used)


def _run_methods(padp, pat, methods, pk, c_o2, upsample):
    out = {}
    for method in methods:
        if method is Method.O1:
            out[method] = estimate_o1(padp, pat, pk)
        elif method is Method.O2:
            out[method] = estimate_o2(padp, pat, pk, deembed=c_o2)
        elif method is Method.HAED:
            out[method] = estimate_haed(padp, pat, pk)
        elif method is Method.HAED_PLUS:
            out[method] = haed_plus_refine(padp, estimate_haed(padp, pat, pk), upsample)
        else:
            raise ValueError(f"unknown method {method!r}")
    return out


def _trial_mpcs(mc, cfg, sweep_value, rng):
    mpcs = list(mc.mpcs)
    if mc.sweep_variable == "angular_separation_deg":
        mpcs[1] = replace(mpcs[1], phi=mpcs[0].phi + np.radians(sweep_value))
    elif mc.sweep_variable == "true_angle_deg":
        mpcs[0] = replace(mpcs[0], phi=np.radians(sweep_value))
    if mc.randomize_angle:
        mpcs = [replace(m, phi=rng.uniform(0.0, 2.0 * np.pi)) for m in mpcs]
    if mc.off_grid_delay:
        mpcs = [replace(m, tau=m.tau + rng.uniform(0.0, 1.0) * cfg.delta_tau) for m in mpcs]
    return mpcs


def _sigma2_for_point(mc, cfg, pat, sweep_value):
    if mc.sweep_variable != "output_snr_db":
        return cfg.sigma2
    gamma_o = 10.0 ** (sweep_value / 10.0)
    gamma_i = gamma_o / pat.g_max
    return mc.mpcs[0].alpha ** 2 * cfg.pu / gamma_i


def _amp_error(power, truth, cfg):
    ref = cfg.k * cfg.pu * cfg.g_tx**2 * truth.alpha**2
    return float(np.sqrt(max(power, 0.0) / ref)) - 1.0


def run_sweep(mc, cfg, arr, pat, progress=None):
    """Monte Carlo RMSEE sweep with lower-bound overlays.

    Returns a list of ``SweepRow``; angle errors are in degrees
    (circularly wrapped), amplitude errors are normalized (alpha ratio
    minus one), delays in nanoseconds.
    """
    threads = int(os.environ.get("PADPKIT_THREADS", "1") or 1)
    c_o2 = o2_deembed_constant(pat, arr.m)
    rows = []
    for si, sweep_value in enumerate(mc.sweep_values):
        sigma2 = _sigma2_for_point(mc, cfg, pat, sweep_value)
        cfg_pt = replace(cfg, sigma2=sigma2)

        def one_trial(ti, _si=si, _val=sweep_value, _cfg=cfg_pt):
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=mc.base_seed, spawn_key=(_si, ti))
            )
            mpcs = _trial_mpcs(mc, _cfg, _val, rng)
            padp = simulate_padp(mpcs, arr, pat, _cfg, seed=rng)
            record = {}
            for method in mc.methods:
                try:
                    ests = _run_methods(padp, pat, [method], mc.peak, c_o2, mc.upsample)[method]
                    matched, extra = associate(ests, mpcs, _cfg.delta_tau, pat.hpbw)
                except Exception:
                    matched, extra = {}, 0
                errs = {}
                for ti_truth, est in matched.items():
                    truth = mpcs[ti_truth]
                    errs[ti_truth] = (
                        float(np.degrees(circular_delta(est.phi, truth.phi))),
                        _amp_error(est.power, truth, _cfg),
                        (est.tau - truth.tau) * 1e9,
                    )
                record[method] = (errs, extra)
            return record

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                records = list(pool.map(one_trial, range(mc.trials)))
        else:
            records = [one_trial(ti) for ti in range(mc.trials)]

        n_truth = len(mc.mpcs)
        for method in mc.methods:
            samples = {ti: ([], [], []) for ti in range(n_truth)}
            misses = {ti: 0 for ti in range(n_truth)}
            false_alarms = 0
            for record in records:
                errs, extra = record[method]
                false_alarms += extra
                for ti in range(n_truth):
                    if ti in errs:
                        for axis in range(3):
                            samples[ti][axis].append(errs[ti][axis])
                    else:
                        misses[ti] += 1
            crlbs = _crlb_overlay(mc, cfg_pt, arr, pat, sweep_value, n_truth)
            for ti in range(n_truth):
                for axis, param in enumerate(("phi_deg", "amp_norm", "tau_ns")):
                    stats = ErrorStats.from_samples(
                        samples[ti][axis], misses=misses[ti], false_alarms=false_alarms
                    )
                    rows.append(
                        SweepRow(
                            sweep_value=float(sweep_value),
                            method=method,
                            param=param if n_truth == 1 else f"{param}:{ti}",
                            truth_index=ti,
                            stats=stats,
                            sqrt_crlb=crlbs[ti][axis],
                        )
                    )
        if progress is not None:
            progress(si + 1, len(mc.sweep_values))
    return rows


def _crlb_overlay(mc, cfg_pt, arr, pat, sweep_value, n_truth):
    """sqrt(CRLB) per (truth, axis): angle deg, normalized amplitude, delay ns."""
    if cfg_pt.sigma2 == 0.0:
        # noise-free runs: the bound degenerates to zero (closed forms) and
        # the Fisher matrix is not defined, so skip the overlay
        return {ti: (0.0, 0.0, np.nan) for ti in range(n_truth)}
    gamma_i = mc.mpcs[0].alpha ** 2 * cfg_pt.pu / cfg_pt.sigma2
    if n_truth == 1 and pat.kind is PatternKind.GAUSSIAN_BEAM:
        if mc.randomize_angle:
            grid = np.linspace(0.0, arr.asi, 181)
            sphi = np.mean(
                [np.sqrt(crlb_single_phi(gamma_i, cfg_pt, arr, pat, a)) for a in grid]
            )
            salpha = np.mean(
                [np.sqrt(crlb_single_alpha(gamma_i, cfg_pt, arr, pat, a)) for a in grid]
            )
        else:
            phi = (
                np.radians(sweep_value)
                if mc.sweep_variable == "true_angle_deg"
                else mc.mpcs[0].phi
            )
            sphi = np.sqrt(crlb_single_phi(gamma_i, cfg_pt, arr, pat, phi))
            salpha = np.sqrt(crlb_single_alpha(gamma_i, cfg_pt, arr, pat, phi))
        return {0: (float(np.degrees(sphi)), float(salpha), np.nan)}
    mpcs = list(mc.mpcs)
    if mc.sweep_variable == "angular_separation_deg":
        mpcs[1] = replace(mpcs[1], phi=mpcs[0].phi + np.radians(sweep_value))
    report = crlb_from_fim(fim(mpcs, arr, pat, cfg_pt))
    out = {}
    for ti in range(n_truth):
        out[ti] = (
            float(np.degrees(np.sqrt(report.value("phi", ti)))),
            float(np.sqrt(report.value("amp_norm", ti))),
            float(np.sqrt(report.value("tau", ti)) * 1e9),
        )
    return out


def uniform_offset_study(n_mpcs, seed, cfg, arr, pat, methods=(Method.O1, Method.O2, Method.HAED)):
    """Noise-free error statistics over arrivals uniform in angle.

    Each draw places a single unit arrival at a uniform azimuth and a
    random on-grid delay, runs the requested estimators, and collects the
    angle error (degrees) and the de-embedded power error (dB).  Returns
    {method: {param: ErrorStats}} for params 'phi_deg' and 'power_db'.
    """
    if n_mpcs < 1:
        raise ValueError("n_mpcs must be >= 1")
    cfg0 = replace(cfg, sigma2=0.0)
    c_o2 = o2_deembed_constant(pat, arr.m)
    p_ref = cfg0.k * cfg0.pu * cfg0.g_tx**2
    samples = {m: {"phi_deg": [], "power_db": []} for m in methods}
    misses = {m: 0 for m in methods}
    lo, hi = cfg0.k // 4, 3 * cfg0.k // 4
    for i in range(n_mpcs):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i,)))
        truth = MpcTruth(
            alpha=1.0,
            phase=rng.uniform(0.0, 2.0 * np.pi),
            tau=int(rng.integers(lo, hi)) * cfg0.delta_tau,
            phi=rng.uniform(0.0, 2.0 * np.pi),
        )
        padp = simulate_padp([truth], arr, pat, cfg0, seed=rng)
        ests = _run_methods(padp, pat, methods, PeakConfig(), c_o2, 16)
        for method in methods:
            matched, _ = associate(ests[method], [truth], cfg0.delta_tau, pat.hpbw)
            if 0 not in matched:
                misses[method] += 1
                continue
            est = matched[0]
            samples[method]["phi_deg"].append(
                float(np.degrees(circular_delta(est.phi, truth.phi)))
            )
            samples[method]["power_db"].append(10.0 * np.log10(est.power / p_ref))
    return {
        m: {
            p: ErrorStats.from_samples(samples[m][p], misses=misses[m])
            for p in ("phi_deg", "power_db")
        }
        for m in methods
    }

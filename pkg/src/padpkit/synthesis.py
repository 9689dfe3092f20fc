"""Wideband directional-scan observation synthesis.

Per scan direction m the noise-free received spectrum is

    S_m(f_k) = sqrt(Pu) * g_tx * sum_l alpha_l e^{j phase_l}
               * g_rx(steer_m - phi_l) * exp(-j 2 pi f_k tau_l),

complex white Gaussian noise of spectral height sigma2 is added per sample,
and the delay-domain response is h_m(tau_j) = K^{-1/2} * sum_k Y_m(f_k)
exp(+j 2 pi f_k tau_j) on the delay grid tau_j = j / bw.

Grid convention: the K frequency points are laid out with step bw / K
starting at fc - bw/2 (half-open band).  That step makes the delay bins
1/bw exactly orthogonal, so the transform is unitary (Parseval to machine
precision) and an on-grid arrival occupies a single delay bin with zero
leakage.  The transform is evaluated with an FFT plus the absolute
frequency phase ramp, identical to the direct sum.
"""

from dataclasses import dataclass, field

import numpy as np

from .angles import wrap_pm_pi, wrap_two_pi
from .antenna import gain


@dataclass(frozen=True)
class SoundingConfig:
    """Sounder setup: band, grid size, transmit power and noise height.

    fc/bw in Hz, k frequency points, pu linear transmit power (the source
    spectrum is flat at sqrt(pu)), sigma2 linear noise spectral height,
    g_tx linear amplitude gain of the transmit antenna.
    """

    fc: float
    bw: float
    k: int
    pu: float = 1.0
    sigma2: float = 0.0
    g_tx: float = 1.0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.bw <= 0:
            raise ValueError("bw must be positive")
        if self.pu <= 0:
            raise ValueError("pu must be positive")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be non-negative")

    @property
    def delta_f(self):
        return self.bw / self.k

    @property
    def delta_tau(self):
        return 1.0 / self.bw

    @property
    def freqs(self):
        return self.fc - 0.5 * self.bw + np.arange(self.k) * self.delta_f

    @property
    def delays(self):
        return np.arange(self.k) * self.delta_tau


@dataclass(frozen=True)
class ArrayConfig:
    """Scan geometry: m steering angles uniform on [0, 2*pi)."""

    m: int

    def __post_init__(self):
        if self.m < 3:
            raise ValueError("m must be >= 3")

    @property
    def steering_angles(self):
        return 2.0 * np.pi * np.arange(self.m) / self.m

    @property
    def asi(self):
        """Angular sampling interval 2*pi/m."""
        return 2.0 * np.pi / self.m


@dataclass(frozen=True)
class MpcTruth:
    """Ground-truth multipath component.

    alpha: linear amplitude (> 0); phase: radians; tau: delay in seconds;
    phi: azimuth angle of arrival, stored wrapped to [0, 2*pi).
    """

    alpha: float
    phase: float
    tau: float
    phi: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        object.__setattr__(self, "phi", float(wrap_two_pi(self.phi)))


@dataclass(frozen=True)
class Padp:
    """Power-angle-delay profile: an (m, k) non-negative power map plus grids.

    ``cfr`` optionally retains the complex received spectra the map was
    computed from; band-limited delay interpolation needs it (power samples
    alone undersample the squared response), so estimators that refine the
    delay axis require a Padp carrying it.
    """

    values: np.ndarray
    angles: np.ndarray
    delays: np.ndarray
    cfr: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("values must be 2-D (scan x delay)")
        if v.shape != (len(self.angles), len(self.delays)):
            raise ValueError("grid lengths must match the value matrix")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("values must be finite and non-negative")
        if self.cfr is not None and self.cfr.shape != v.shape:
            raise ValueError("cfr must match the value matrix shape")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "angles", np.asarray(self.angles, dtype=np.float64))
        object.__setattr__(self, "delays", np.asarray(self.delays, dtype=np.float64))

    @property
    def asi(self):
        return 2.0 * np.pi / len(self.angles)

    @property
    def delta_tau(self):
        return float(self.delays[1] - self.delays[0])


def synth_cfr(mpcs, arr, pat, cfg):
    """Noise-free received spectra for all scan directions, (m, k) complex."""
    if not mpcs:
        raise ValueError("at least one multipath component required")
    freqs = cfg.freqs
    steer = arr.steering_angles
    coeff = np.array([m.alpha * np.exp(1j * m.phase) for m in mpcs])
    gains = np.stack([gain(pat, wrap_pm_pi(steer - m.phi)) for m in mpcs], axis=1)
    ramps = np.exp(-2j * np.pi * np.outer([m.tau for m in mpcs], freqs))
    return np.sqrt(cfg.pu) * cfg.g_tx * ((gains * coeff) @ ramps)


def add_noise(s, sigma2, seed):
    """Add circularly symmetric white Gaussian noise of spectral height sigma2.

    Real and imaginary parts each carry variance sigma2/2.  Deterministic
    for a given seed (int, SeedSequence or Generator).
    """
    if sigma2 < 0:
        raise ValueError("sigma2 must be non-negative")
    if sigma2 == 0:
        return np.array(s, copy=True)
    rng = np.random.default_rng(seed)
    scale = np.sqrt(sigma2 / 2.0)
    w = rng.standard_normal(s.shape) + 1j * rng.standard_normal(s.shape)
    return s + scale * w


def cfr_to_cir(y, cfg, method="fft"):
    """Delay-domain responses h_m(tau_j) from received spectra.

    method='fft' evaluates the sum as sqrt(K) * ifft plus the phase ramp of
    the band start frequency; method='direct' forms the full exponential sum
    (reference path used by the tests).
    """
    y = np.asarray(y)
    k = cfg.k
    if y.shape[-1] != k:
        raise ValueError("spectrum length must equal cfg.k")
    if method == "direct":
        kernel = np.exp(2j * np.pi * np.outer(cfg.freqs, cfg.delays))
        return (y @ kernel) / np.sqrt(k)
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    ramp = np.exp(2j * np.pi * (cfg.fc - 0.5 * cfg.bw) * cfg.delays)
    return np.sqrt(k) * np.fft.ifft(y, axis=-1) * ramp


def pdp(h):
    """Power delay profile(s): squared magnitude of delay-domain responses."""
    return np.abs(h) ** 2


def assemble_padp(pdps, arr, cfg, cfr=None):
    """Stack per-direction PDPs into a Padp in steering-angle order."""
    v = np.asarray(pdps, dtype=np.float64)
    if v.ndim != 2 or v.shape[0] != arr.m:
        raise ValueError(f"expected {arr.m} rows of equal length, got shape {v.shape}")
    if v.shape[1] != cfg.k:
        raise ValueError("row length must equal cfg.k")
    return Padp(values=v, angles=arr.steering_angles, delays=cfg.delays, cfr=cfr)


def simulate_padp(mpcs, arr, pat, cfg, seed=0, keep_cfr=True):
    """Full synthesis pipeline: spectra -> noise -> delay domain -> Padp."""
    s = synth_cfr(mpcs, arr, pat, cfg)
    y = add_noise(s, cfg.sigma2, seed)
    h = cfr_to_cir(y, cfg)
    return assemble_padp(pdp(h), arr, cfg, cfr=y if keep_cfr else None)

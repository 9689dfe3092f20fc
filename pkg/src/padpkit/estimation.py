"""Multipath extraction from power-angle-delay profiles.

Three estimators share the PADP input:

* o-1: per delay bin keep the strongest scan direction, find 1-D delay
  peaks, de-embed power by the boresight power gain.  Angle is quantized
  to the scan grid.
* o-2: per delay bin sum all scan directions, find 1-D delay peaks,
  de-embed by a ring constant (see ``o2_deembed_constant``).  Angle is
  quantized exactly as in o-1.
* haed: find 2-D local maxima over (scan direction, delay), then refine
  each angle inside the beam from the power contrast against the stronger
  adjacent direction.  The refinement inverts the contrast either in
  closed form (Gaussian beam) or by grid search on the tabulated pattern,
  and corrects the power by the pattern roll-off at the refined offset.
  ``haed_plus_refine`` additionally re-reads delay and power on a
  band-limited interpolation of the aligned row (needs the complex
  spectra, which power-only PADPs cannot supply).

Powers are reported de-embedded (boresight gain removed) so the three
methods share units; for a unit-amplitude arrival the de-embedded peak is
K * pu * g_tx**2.
"""

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .angles import wrap_two_pi
from .antenna import (
    ChiSaturationError,
    PatternKind,
    Side,
    chi,
    clamp_chi,
    invert_chi_closed,
    invert_chi_tabulated,
    power_gain,
)

RELATIVE_FLOOR = 1e-12


class Method(enum.Enum):
    O1 = "o1"
    O2 = "o2"
    HAED = "haed"
    HAED_PLUS = "haed+"


@dataclass(frozen=True)
class PeakConfig:
    """Peak detection knobs.

    ``noise_floor_db_offset`` is the margin above the estimated noise
    floor a peak must clear; ``max_peaks`` caps the number of returned
    peaks (strongest kept).
    """

    noise_floor_db_offset: float = 6.0
    max_peaks: int | None = None

    def __post_init__(self):
        if self.noise_floor_db_offset <= 0:
            raise ValueError("noise_floor_db_offset must be positive")
        if self.max_peaks is not None and self.max_peaks < 1:
            raise ValueError("max_peaks must be >= 1 when set")


@dataclass(frozen=True)
class MpcEstimate:
    """One extracted multipath component.

    tau in seconds, phi wrapped to [0, 2*pi), power linear and
    antenna-de-embedded.  The contrast fields (chi_hat, eps, side,
    raw_power) are populated by the in-beam refinement only.
    """

    tau: float
    phi: float
    power: float
    method: Method
    chi_hat: float | None = None
    eps: float | None = None
    side: Side | None = None
    clamped: bool = False
    raw_power: float | None = None
    scan_index: int | None = field(default=None, repr=False)
    delay_index: int | None = field(default=None, repr=False)


def noise_threshold(values, pk):
    """Detection threshold from a robust noise-floor estimate.

    The median of the map estimates the noise power scale (median of an
    exponential is sigma2 * ln 2); scaling by ln(n_bins) accounts for the
    expected extreme of that many noise bins, and the configured dB offset
    sits on top.  A relative floor of 1e-12 of the map maximum keeps the
    threshold meaningful on noise-free synthetic maps.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        return 0.0
    vmax = float(np.max(v))
    if vmax <= 0.0:
        return 0.0
    sigma2_hat = float(np.median(v)) / np.log(2.0)
    floor = sigma2_hat * np.log(max(v.size, 2))
    thr = floor * 10.0 ** (pk.noise_floor_db_offset / 10.0)
    return max(thr, vmax * RELATIVE_FLOOR)


def synth_omni_max(padp):
    """Omnidirectional PDP by keeping the strongest direction per delay bin."""
    return np.max(padp.values, axis=0)


def synth_omni_sum(padp):
    """Omnidirectional PDP by summing all directions per delay bin."""
    return np.sum(padp.values, axis=0)


def o2_deembed_constant(pat, m, convention="ring_mean"):
    """De-embedding constant for the summed-PDP estimator.

    The summed profile carries the ring sum of the pattern power over the
    scan grid, which ripples with the arrival offset.  Conventions:

    * ``ring_mean``: angular average of the ring sum, m/(2*pi) times the
      pattern power integral.  Unbiased on average over offsets (default).
    * ``ring_min``: minimum of the ring sum over offsets.  Guarantees the
      o-2 power never undershoots the true one, which keeps the refined
      estimate sandwiched between o-1 and o-2 when the scan step is finer
      than the beamwidth.
    * ``ring_zero``: ring sum evaluated with an on-grid arrival.  This is
      the ring maximum, so o-2 then never overshoots.
    """
    steer = 2.0 * np.pi * np.arange(m) / m
    if convention == "ring_zero":
        return float(np.sum(power_gain(pat, steer)))
    if convention == "ring_mean":
        x = np.linspace(-np.pi, np.pi, 36001)
        return m / (2.0 * np.pi) * float(np.trapezoid(power_gain(pat, x), x))
    if convention == "ring_min":
        asi = 2.0 * np.pi / m
        deltas = np.linspace(0.0, asi, 2001)
        rings = power_gain(pat, deltas[:, None] - steer[None, :]).sum(axis=1)
        return float(np.min(rings))
    raise ValueError(f"unknown de-embedding convention {convention!r}")


def _column_angle(padp, j):
    """Steering angle of the strongest direction in delay column j (ties: lowest row)."""
    m_star = int(np.argmax(padp.values[:, j]))
    return float(padp.angles[m_star]), m_star


def _delay_peaks(profile, pk):
    idx = kernels.local_maxima_1d(profile, noise_threshold(profile, pk))
    if pk.max_peaks is not None and idx.size > pk.max_peaks:
        order = np.argsort(profile[idx])[::-1][: pk.max_peaks]
        idx = np.sort(idx[order])
    return idx


def estimate_o1(padp, pat, pk=PeakConfig()):
    """Strongest-direction synthesis estimator."""
    profile = synth_omni_max(padp)
    g0_sq = power_gain(pat, 0.0)
    out = []
    for j in _delay_peaks(profile, pk):
        angle, m_star = _column_angle(padp, j)
        out.append(
            MpcEstimate(
                tau=float(padp.delays[j]),
                phi=angle,
                power=float(profile[j] / g0_sq),
                method=Method.O1,
                scan_index=m_star,
                delay_index=int(j),
            )
        )
    return sorted(out, key=lambda e: (e.tau, e.phi))


def estimate_o2(padp, pat, pk=PeakConfig(), deembed="ring_mean"):
    """Summed-direction synthesis estimator.

    ``deembed`` is a convention name for ``o2_deembed_constant`` or a
    precomputed constant (callers running many profiles should precompute).
    """
    profile = synth_omni_sum(padp)
    if isinstance(deembed, str):
        c_o2 = o2_deembed_constant(pat, len(padp.angles), deembed)
    else:
        c_o2 = float(deembed)
    out = []
    for j in _delay_peaks(profile, pk):
        angle, m_star = _column_angle(padp, j)
        out.append(
            MpcEstimate(
                tau=float(padp.delays[j]),
                phi=angle,
                power=float(profile[j] / c_o2),
                method=Method.O2,
                scan_index=m_star,
                delay_index=int(j),
            )
        )
    return sorted(out, key=lambda e: (e.tau, e.phi))


def coarse_peaks_2d(padp, pk=PeakConfig()):
    """2-D local maxima of the PADP above the noise threshold.

    The neighbourhood is the 4-connected cross with circular scan axis and
    clipped delay axis.  Exact plateau ties keep the lexicographically
    smallest (scan, delay) cell.  Returns a list of (scan index, delay
    index, value) triples.
    """
    thr = noise_threshold(padp.values, pk)
    rows, cols = kernels.local_maxima_2d(padp.values, thr)
    peaks = [(int(i), int(j), float(padp.values[i, j])) for i, j in zip(rows, cols)]
    if pk.max_peaks is not None and len(peaks) > pk.max_peaks:
        peaks = sorted(peaks, key=lambda p: -p[2])[: pk.max_peaks]
        peaks = sorted(peaks, key=lambda p: (p[0], p[1]))
    return peaks


def haed_refine(padp, coarse, pat, use_closed_form=True, grid_step=None):
    """Refine coarse 2-D peaks into angle/power estimates inside the beam.

    For each coarse peak the contrast chi = (P - P_adj) / (P + P_adj) is
    taken against the stronger adjacent scan direction (ties pick the
    lower one) and inverted to the offset angle; the neighbour shift in
    the inversion is the actual angular sampling interval of the scan.
    The reported power is the peak corrected by the pattern roll-off at
    the refined offset and de-embedded by the boresight gain, i.e.
    P / g**2(eps).  Contrasts at +-1 (an adjacent power underflowing to
    zero) are clamped and flagged, and a flagged offset is clipped into
    [-hpbw/2, hpbw/2].
    """
    m_total = len(padp.angles)
    spacing = padp.asi
    closed = use_closed_form and pat.kind is PatternKind.GAUSSIAN_BEAM
    tiny = np.finfo(np.float64).tiny
    half = 0.5 * pat.hpbw
    out = []
    for m, j, val in coarse:
        p_minus = padp.values[(m - 1) % m_total, j]
        p_plus = padp.values[(m + 1) % m_total, j]
        side = Side.MINUS if p_minus >= p_plus else Side.PLUS
        p_adj = max(p_minus if side is Side.MINUS else p_plus, tiny)
        chi_meas = (val - p_adj) / (val + p_adj)
        chi_used, clamped = clamp_chi(chi_meas)
        if closed:
            try:
                eps = invert_chi_closed(chi_used, side, pat.hpbw, pat.kappa, spacing=spacing)
            except ChiSaturationError:
                eps = half if side is Side.MINUS else -half
                clamped = True
        else:
            eps = invert_chi_tabulated(chi_used, side, pat, grid_step=grid_step, spacing=spacing)
        if clamped:
            eps = float(np.clip(eps, -half, half))
        roll_off = power_gain(pat, eps)
        out.append(
            MpcEstimate(
                tau=float(padp.delays[j]),
                phi=float(wrap_two_pi(padp.angles[m] + eps)),
                power=float(val / roll_off),
                method=Method.HAED,
                chi_hat=float(chi_meas),
                eps=float(eps),
                side=side,
                clamped=clamped,
                raw_power=float(val * power_gain(pat, 0.0) / roll_off),
                scan_index=int(m),
                delay_index=int(j),
            )
        )
    return sorted(out, key=lambda e: (e.tau, e.phi))


def estimate_haed(padp, pat, pk=PeakConfig(), use_closed_form=True, grid_step=None):
    """Coarse 2-D peak search followed by in-beam refinement."""
    return haed_refine(padp, coarse_peaks_2d(padp, pk), pat, use_closed_form, grid_step)


def _row_power(cfr_row, delta_f, taus):
    """|h(tau)|**2 of one row's band-limited delay response at arbitrary taus.

    The absolute band position only contributes a unimodular factor, so
    baseband frequency indices suffice for magnitudes.
    """
    k = cfr_row.shape[0]
    phases = np.exp(2j * np.pi * np.outer(taus, np.arange(k) * delta_f))
    h = phases @ cfr_row / np.sqrt(k)
    return np.abs(h) ** 2


def haed_plus_refine(padp, estimates, upsample=16):
    """Re-read delay and power on an upsampled band-limited interpolation.

    Scans ``upsample`` times finer than the delay grid across the peak's
    +-1 bin window, then sharpens the maximum with a parabolic vertex
    step.  Angles are kept from the input estimates; powers are rescaled
    by the interpolated/on-grid peak ratio, preserving the de-embedding.
    Requires a Padp carrying the complex spectra (``cfr``).
    """
    if upsample < 2:
        raise ValueError("upsample must be >= 2")
    if padp.cfr is None:
        raise ValueError("haed_plus_refine needs a Padp with complex spectra (cfr)")
    delta_tau = padp.delta_tau
    delta_f = 1.0 / (padp.values.shape[1] * delta_tau)
    out = []
    for est in estimates:
        if est.scan_index is None or est.delay_index is None:
            raise ValueError("estimates must carry scan/delay indices (haed output)")
        row = padp.cfr[est.scan_index]
        on_grid = padp.values[est.scan_index, est.delay_index]
        taus = est.tau + np.arange(-upsample, upsample + 1) * (delta_tau / upsample)
        powers = _row_power(row, delta_f, taus)
        best = int(np.argmax(powers))
        tau_hat, p_hat = float(taus[best]), float(powers[best])
        if 0 < best < len(taus) - 1:
            pl, p0, pr = powers[best - 1], powers[best], powers[best + 1]
            denom = pl - 2.0 * p0 + pr
            if denom < 0:
                vertex = taus[best] + 0.5 * (pl - pr) / denom * (delta_tau / upsample)
                p_vertex = float(_row_power(row, delta_f, np.array([vertex]))[0])
                if p_vertex > p_hat:
                    tau_hat, p_hat = float(vertex), p_vertex
        out.append(
            replace(
                est,
                tau=tau_hat,
                power=est.power * (p_hat / on_grid),
                raw_power=(est.raw_power * (p_hat / on_grid) if est.raw_power else None),
                method=Method.HAED_PLUS,
            )
        )
    return sorted(out, key=lambda e: (e.tau, e.phi))

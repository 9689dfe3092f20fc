"""Directional antenna patterns and the adjacent-direction power contrast.

The main-lobe model is a Gaussian beam in amplitude gain,

    g(phi) = sqrt(g_max) * exp(kappa * (cos(phi) - 1)),

whose concentration ``kappa`` is fixed by the half-power beamwidth so that
``g(+-hpbw/2)**2 == g(0)**2 / 2`` exactly.  Calibrated antennas are handled
as tabulated (offset, amplitude gain) pairs with linear interpolation.

``chi`` is the normalized power difference between the boresight pattern
and one of its two neighbours on the scan grid; for the Gaussian beam it
inverts in closed form to the offset angle of the arrival inside the beam.
All angles are radians; external interfaces convert to degrees elsewhere.
"""

import csv
import enum
from dataclasses import dataclass, field

import numpy as np

from .angles import wrap_pm_pi

CHI_CLAMP = 1.0 - 1e-12
DEFAULT_INVERSION_GRID_STEP = np.radians(0.01)


class Side(enum.Enum):
    """Which adjacent scan direction the power contrast is taken against.

    MINUS compares against the neighbour at a lower steering angle,
    PLUS against the neighbour at a higher steering angle.
    """

    MINUS = "minus"
    PLUS = "plus"


class PatternKind(enum.Enum):
    GAUSSIAN_BEAM = "gaussian"
    TABULATED = "tabulated"


class ChiSaturationError(ValueError):
    """Raised when a power contrast is too corrupted to invert (arcsin out of range)."""


def kappa_from_hpbw(hpbw):
    """Concentration parameter of the Gaussian beam for a given HPBW (radians).

    Returns ln(sqrt(2)) / (1 - cos(hpbw / 2)).  Valid for 0 < hpbw <= pi.
    """
    hpbw = float(hpbw)
    if not 0.0 < hpbw <= np.pi:
        raise ValueError(f"hpbw must be in (0, pi], got {hpbw!r}")
    return np.log(np.sqrt(2.0)) / (1.0 - np.cos(0.5 * hpbw))


@dataclass(frozen=True)
class AntennaPattern:
    """Azimuth radiation pattern, either closed-form Gaussian beam or tabulated.

    Fields
    ------
    kind : PatternKind
    g_max : maximum power gain, linear (20 dB <-> 100.0)
    hpbw : half-power beamwidth, radians
    kappa : Gaussian concentration (None for tabulated patterns)
    table : (angles, gains) arrays for tabulated patterns, angles strictly
        increasing and covering at least [-pi, pi); gains are amplitude gains
    """

    kind: PatternKind
    g_max: float
    hpbw: float
    kappa: float | None = None
    table: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.g_max <= 0:
            raise ValueError("g_max must be positive")
        if not 0.0 < self.hpbw <= np.pi:
            raise ValueError("hpbw must be in (0, pi]")
        if self.kind is PatternKind.GAUSSIAN_BEAM:
            expected = kappa_from_hpbw(self.hpbw)
            if self.kappa is None or not np.isclose(self.kappa, expected, rtol=1e-9):
                raise ValueError("kappa inconsistent with hpbw; use AntennaPattern.gaussian")
        else:
            if self.table is None:
                raise ValueError("tabulated pattern requires a table")
            angles, gains = self.table
            if np.any(np.diff(angles) <= 0):
                raise ValueError("table angles must be strictly increasing")
            if np.any(gains < 0):
                raise ValueError("table gains must be non-negative")
            if angles[0] > -np.pi or angles[-1] < np.pi - (angles[1] - angles[0]):
                raise ValueError("table must cover at least [-pi, pi)")

    @classmethod
    def gaussian(cls, g_max, hpbw):
        """Gaussian-beam pattern from max power gain (linear) and HPBW (radians)."""
        return cls(
            kind=PatternKind.GAUSSIAN_BEAM,
            g_max=float(g_max),
            hpbw=float(hpbw),
            kappa=kappa_from_hpbw(hpbw),
        )

    @classmethod
    def from_table(cls, angles, gains, hpbw=None):
        """Tabulated pattern from (offset angle, amplitude gain) samples.

        ``hpbw`` is measured from the interpolated half-power crossings when
        not given explicitly.
        """
        angles = np.asarray(angles, dtype=np.float64)
        gains = np.asarray(gains, dtype=np.float64)
        if angles.ndim != 1 or angles.shape != gains.shape or angles.size < 4:
            raise ValueError("table needs matching 1-D angle/gain arrays (>= 4 points)")
        g_max = float(np.max(gains) ** 2)
        if hpbw is None:
            hpbw = _tabulated_hpbw(angles, gains)
        return cls(
            kind=PatternKind.TABULATED,
            g_max=g_max,
            hpbw=float(hpbw),
            table=(angles.copy(), gains.copy()),
        )


def _tabulated_hpbw(angles, gains):
    """Half-power beamwidth from linear interpolation of the power crossings."""
    power = gains**2
    half = np.max(power) / 2.0
    peak = int(np.argmax(power))

    def cross(idx_range):
        for i in idx_range:
            lo, hi = sorted((power[i], power[i + 1]))
            if lo <= half <= hi and power[i] != power[i + 1]:
                frac = (half - power[i]) / (power[i + 1] - power[i])
                return angles[i] + frac * (angles[i + 1] - angles[i])
        raise ValueError("no half-power crossing found in table")

    left = cross(range(peak - 1, -1, -1))
    right = cross(range(peak, len(angles) - 1))
    return right - left


def gain(pattern, offset):
    """Amplitude gain at an offset from boresight (offset wrapped to [-pi, pi))."""
    offset = wrap_pm_pi(offset)
    if pattern.kind is PatternKind.GAUSSIAN_BEAM:
        out = np.sqrt(pattern.g_max) * np.exp(pattern.kappa * (np.cos(offset) - 1.0))
    else:
        angles, gains = pattern.table
        # extend one period upward so wrapped offsets near +pi interpolate
        ext_a = np.concatenate([angles, angles[:1] + 2.0 * np.pi])
        ext_g = np.concatenate([gains, gains[:1]])
        out = np.interp(offset, ext_a, ext_g)
    if np.ndim(offset) == 0:
        return float(out)
    return out


def power_gain(pattern, offset):
    """Power gain g(offset)**2."""
    g = gain(pattern, offset)
    return g * g


def chi(pattern, eps, side, spacing=None):
    """Normalized power difference against one adjacent scan direction.

    chi = (g2(eps) - g2(eps -+ spacing)) / (g2(eps) + g2(eps -+ spacing)),
    where Side.MINUS compares against the lower neighbour (shift +spacing in
    the pattern argument) and Side.PLUS against the upper one (-spacing).
    ``spacing`` defaults to the pattern HPBW, matching a scan grid whose
    step equals the beamwidth; pass the actual angular sampling interval
    when the two differ.
    """
    if spacing is None:
        spacing = pattern.hpbw
    shift = spacing if side is Side.MINUS else -spacing
    p0 = power_gain(pattern, eps)
    p1 = power_gain(pattern, np.asarray(eps, dtype=np.float64) + shift)
    out = (p0 - p1) / (p0 + p1)
    if np.ndim(eps) == 0:
        return float(out)
    return out


def invert_chi_closed(chi_val, side, hpbw, kappa, spacing=None):
    """Offset angle from a power contrast, exact for the Gaussian beam.

    Inverts ``chi`` via the product-to-sum identity underlying the Gaussian
    beam: ln((1+chi)/(1-chi)) = 4*kappa*sin(spacing/2)*sin(eps +- spacing/2).
    ``hpbw`` only names the beam; the neighbour shift is ``spacing``
    (defaulting to hpbw).

    Raises ChiSaturationError when the arcsin argument falls outside
    [-1, 1] (numerically corrupted chi); callers may clamp chi first.
    """
    if spacing is None:
        spacing = hpbw
    chi_arr = np.asarray(chi_val, dtype=np.float64)
    if np.any(np.abs(chi_arr) >= 1.0):
        raise ValueError("chi must lie strictly inside (-1, 1); clamp before inverting")
    log_ratio = np.log((chi_arr + 1.0) / (1.0 - chi_arr))
    sign = 1.0 if side is Side.MINUS else -1.0
    arg = sign * log_ratio / (4.0 * kappa * np.sin(0.5 * spacing))
    if np.any(np.abs(arg) > 1.0):
        raise ChiSaturationError(
            f"arcsin argument out of range (max |arg| = {np.max(np.abs(arg)):.6g})"
        )
    eps = np.arcsin(arg) - sign * 0.5 * spacing
    if np.ndim(chi_val) == 0:
        return float(eps)
    return eps


def invert_chi_tabulated(chi_hat, side, pattern, grid_step=None, spacing=None):
    """Offset angle minimizing |chi_hat - chi(eps)| on a discretized grid.

    Works for any pattern kind; the search covers [-hpbw/2, hpbw/2] at
    ``grid_step`` resolution (default 0.01 deg) and breaks exact ties
    toward the smaller |eps|.
    """
    if grid_step is None:
        grid_step = DEFAULT_INVERSION_GRID_STEP
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    half = 0.5 * pattern.hpbw
    n = max(int(round(half / grid_step)), 1)
    eps_grid = np.linspace(-half, half, 2 * n + 1)
    errs = np.abs(chi_hat - chi(pattern, eps_grid, side, spacing=spacing))
    best = errs == errs.min()
    candidates = eps_grid[best]
    return float(candidates[np.argmin(np.abs(candidates))])


def clamp_chi(chi_hat):
    """Clamp a measured contrast into the invertible open interval (-1, 1).

    Returns (clamped value, True if clamping occurred).  Contrasts at or
    beyond +-1 arise when an adjacent-direction power underflows to ~0.
    """
    if abs(chi_hat) >= CHI_CLAMP:
        return float(np.sign(chi_hat) * CHI_CLAMP), True
    return float(chi_hat), False


def load_pattern_csv(path, hpbw=None):
    """Load a tabulated pattern from a two-column CSV (offset_deg, gain).

    The header line must be ``offset_deg,gain``; gains are linear amplitude.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:2]] != ["offset_deg", "gain"]:
            raise ValueError(f"{path}: expected header 'offset_deg,gain', got {header!r}")
        rows = [(float(r[0]), float(r[1])) for r in reader if r]
    if not rows:
        raise ValueError(f"{path}: empty pattern table")
    deg, g = zip(*rows)
    return AntennaPattern.from_table(np.radians(deg), np.asarray(g), hpbw=hpbw)

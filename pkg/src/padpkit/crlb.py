"""Fisher information and estimation-error lower bounds for the scan model.

Parameters per arrival, in order: normalized amplitude (alpha_hat/alpha),
phase, azimuth angle, delay.  The information matrix for complex white
noise of spectral height sigma2 is

    F_ij = (2 / sigma2) * Re sum_{m,k} conj(dS/dtheta_i) * dS/dtheta_j,

with analytic derivatives of the noise-free signal.  Two conventions keep
the single-arrival matrix interpretable:

* the delay derivative is referenced to the mean grid frequency (phase is
  the value at band centre), which decouples phase from delay exactly;
* amplitude rows are scaled by alpha so the bound is on alpha_hat/alpha.

For a single arrival the amplitude/phase/delay rows decouple from each
other; amplitude and angle still couple whenever the arrival sits
asymmetrically between scan directions, so the closed forms below bound
the reciprocal diagonal information (each parameter with the others
known), not the joint inverse.  Both views are exposed: ``crlb_from_fim``
inverts the full matrix, the ``crlb_single_*`` closed forms evaluate the
decoupled expressions

    var(phi_hat)        >= 1 / (2 gamma_I K kappa^2 sum_m sin^2(d_m) g^2(d_m))
    var(alpha_hat/alpha) >= 1 / (2 gamma_I K sum_m g^2(d_m)) = var(phase_hat)

with d_m the offsets of the scan directions from the arrival.
"""

from dataclasses import dataclass

import numpy as np

from .angles import wrap_pm_pi
from .antenna import PatternKind, gain

CONDITION_LIMIT = 1e12
PARAM_NAMES = ("amp_norm", "phase", "phi", "tau")
_TAB_DLOG_STEP = np.radians(0.05)


class SingularFimError(ValueError):
    """Raised when a Fisher matrix cannot be inverted meaningfully."""


@dataclass(frozen=True)
class CrlbReport:
    """Per-parameter variance bounds from a Fisher matrix.

    ``values`` is an (L, 4) array ordered (amp_norm, phase, phi, tau) per
    arrival; entries are NaN when ``flagged`` (condition number beyond
    1e12 or non-positive spectrum).  ``singular_subspace`` names the
    parameters dominating the weakest information direction.
    """

    values: np.ndarray
    cond: float
    flagged: bool
    labels: tuple
    singular_subspace: tuple = ()

    def value(self, param, mpc=0):
        return float(self.values[mpc, PARAM_NAMES.index(param)])


def _dlog_gain(pat, offsets):
    """d/dx ln g(x) at the given offsets."""
    if pat.kind is PatternKind.GAUSSIAN_BEAM:
        return -pat.kappa * np.sin(offsets)
    h = _TAB_DLOG_STEP
    up = np.log(np.maximum(gain(pat, offsets + h), np.finfo(float).tiny))
    dn = np.log(np.maximum(gain(pat, offsets - h), np.finfo(float).tiny))
    return (up - dn) / (2.0 * h)


def signal_model(theta, arr, pat, cfg):
    """Noise-free signal for a flat parameter vector (4L values).

    Layout per arrival: (alpha, phase_at_band_centre, phi, tau).  Returns
    the (m, k) complex matrix.  This is the function the Fisher matrix
    differentiates; the test suite checks the analytic derivatives against
    finite differences of it.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.size % 4:
        raise ValueError("theta length must be a multiple of 4")
    freqs = cfg.freqs
    base = freqs - freqs.mean()
    steer = arr.steering_angles
    out = np.zeros((arr.m, cfg.k), dtype=np.complex128)
    for l in range(theta.size // 4):
        alpha, phase, phi, tau = theta[4 * l : 4 * l + 4]
        g = gain(pat, wrap_pm_pi(steer - phi))
        out += alpha * np.exp(1j * phase) * np.outer(g, np.exp(-2j * np.pi * base * tau))
    return np.sqrt(cfg.pu) * cfg.g_tx * out


def _theta_from_mpcs(mpcs, cfg):
    fbar = float(np.mean(cfg.freqs))
    theta = []
    for m in mpcs:
        theta.extend([m.alpha, m.phase - 2.0 * np.pi * fbar * m.tau, m.phi, m.tau])
    return np.asarray(theta)


def jacobian(mpcs, arr, pat, cfg):
    """Analytic derivatives dS/dtheta, shape (m*k, 4L) complex.

    Amplitude columns are pre-scaled by alpha (normalized-amplitude
    parameterization).
    """
    freqs = cfg.freqs
    base = 2.0 * np.pi * (freqs - freqs.mean())
    steer = arr.steering_angles
    cols = []
    for mpc in mpcs:
        offsets = wrap_pm_pi(steer - mpc.phi)
        g = gain(pat, offsets)
        ramp = np.exp(-2j * np.pi * (freqs - freqs.mean()) * mpc.tau)
        s = (
            np.sqrt(cfg.pu)
            * cfg.g_tx
            * mpc.alpha
            * np.exp(1j * (mpc.phase - float(np.mean(freqs)) * 2.0 * np.pi * mpc.tau))
            * np.outer(g, ramp)
        )
        d_amp = s  # d/d(alpha) * alpha
        d_phase = 1j * s
        d_phi = (-_dlog_gain(pat, offsets))[:, None] * s
        d_tau = (-1j * base)[None, :] * s
        cols.extend([d_amp.ravel(), d_phase.ravel(), d_phi.ravel(), d_tau.ravel()])
    return np.stack(cols, axis=1)


def fim(mpcs, arr, pat, cfg):
    """Fisher information matrix, real symmetric (4L, 4L)."""
    if not mpcs:
        raise ValueError("at least one arrival required")
    if cfg.sigma2 <= 0:
        raise ValueError("sigma2 must be positive for a finite Fisher matrix")
    d = jacobian(mpcs, arr, pat, cfg)
    f = (2.0 / cfg.sigma2) * np.real(d.conj().T @ d)
    return 0.5 * (f + f.T)


def crlb_from_fim(f):
    """Invert a Fisher matrix into per-parameter bounds with condition checks.

    The condition test runs on the diagonally normalized matrix (unit
    diagonal), so it measures genuine parameter coupling rather than the
    parameter units; seconds-scale delay rows would otherwise dominate the
    raw spectrum.  Near-singular matrices (normalized condition number
    above 1e12, or a non-positive eigenvalue) are flagged and reported
    with NaN values instead of being inverted blindly.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 2 or f.shape[0] != f.shape[1] or f.shape[0] % 4:
        raise SingularFimError("FIM must be square with 4 rows per arrival")
    if not np.allclose(f, f.T, rtol=1e-8, atol=0.0):
        raise SingularFimError("FIM must be symmetric")
    n_mpcs = f.shape[0] // 4
    labels = tuple(f"{p}:{l}" for l in range(n_mpcs) for p in PARAM_NAMES)
    d = np.diag(f).copy()
    if np.any(d <= 0) or not np.all(np.isfinite(d)):
        bad = tuple(labels[i] for i in np.nonzero(~(d > 0))[0])
        return CrlbReport(np.full((n_mpcs, 4), np.nan), np.inf, True, labels, bad)
    scale = 1.0 / np.sqrt(d)
    fn = f * np.outer(scale, scale)
    w, v = np.linalg.eigh(fn)
    wmin, wmax = float(np.min(w)), float(np.max(w))
    cond = np.inf if wmin <= 0 else wmax / wmin
    if cond > CONDITION_LIMIT:
        weak = np.abs(v[:, int(np.argmin(w))])
        subspace = tuple(labels[i] for i in np.nonzero(weak > 0.3 * weak.max())[0])
        return CrlbReport(np.full((n_mpcs, 4), np.nan), float(cond), True, labels, subspace)
    diag_inv = np.einsum("ij,j,ij->i", v, 1.0 / w, v) * scale**2
    return CrlbReport(diag_inv.reshape(n_mpcs, 4), float(cond), False, labels)


def _ring_sums(pat, arr, phi_l):
    offsets = wrap_pm_pi(arr.steering_angles - phi_l)
    g_sq = gain(pat, offsets) ** 2
    return float(np.sum(g_sq)), float(np.sum(np.sin(offsets) ** 2 * g_sq))


def crlb_single_phi(gamma_i, cfg, arr, pat, phi_l):
    """Closed-form angle bound for one arrival (Gaussian beam), rad**2."""
    if pat.kind is not PatternKind.GAUSSIAN_BEAM:
        raise ValueError("closed form requires a Gaussian-beam pattern")
    _, r2 = _ring_sums(pat, arr, phi_l)
    return 1.0 / (2.0 * gamma_i * cfg.k * cfg.g_tx**2 * pat.kappa**2 * r2)


def crlb_single_alpha(gamma_i, cfg, arr, pat, phi_l):
    """Closed-form normalized-amplitude bound for one arrival (dimensionless).

    The phase bound is numerically identical under the band-centre phase
    convention; ``crlb_single_phase`` aliases this function.
    """
    if pat.kind is not PatternKind.GAUSSIAN_BEAM:
        raise ValueError("closed form requires a Gaussian-beam pattern")
    r0, _ = _ring_sums(pat, arr, phi_l)
    return 1.0 / (2.0 * gamma_i * cfg.k * cfg.g_tx**2 * r0)


crlb_single_phase = crlb_single_alpha

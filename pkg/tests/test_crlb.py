import numpy as np
import pytest

from padpkit import AntennaPattern, ArrayConfig, MpcTruth, SoundingConfig
from padpkit.antenna import gain
from padpkit.crlb import (
    SingularFimError,
    _theta_from_mpcs,
    crlb_from_fim,
    crlb_single_alpha,
    crlb_single_phase,
    crlb_single_phi,
    fim,
    jacobian,
    signal_model,
)
from padpkit.synthesis import synth_cfr

CFG = SoundingConfig(fc=37.5e9, bw=2e9, k=257, pu=1.0, sigma2=1.0)
ARR = ArrayConfig(m=36)


def _one(phi_deg, alpha=1.0, tau=25e-9, phase=0.3):
    return MpcTruth(alpha=alpha, phase=phase, tau=tau, phi=np.radians(phi_deg))


def test_signal_model_matches_synthesis(pat10):
    mpcs = [_one(13.0, alpha=1.3), _one(200.0, alpha=0.8, tau=30e-9, phase=1.9)]
    s1 = signal_model(_theta_from_mpcs(mpcs, CFG), ARR, pat10, CFG)
    s2 = synth_cfr(mpcs, ARR, pat10, CFG)
    assert np.max(np.abs(s1 - s2)) / np.max(np.abs(s2)) < 1e-9


def test_jacobian_matches_finite_differences(pat10):
    mpcs = [_one(13.0, alpha=1.3), _one(200.0, alpha=0.8, tau=30e-9, phase=1.9)]
    theta = _theta_from_mpcs(mpcs, CFG)
    jac = jacobian(mpcs, ARR, pat10, CFG)
    scales = []
    for m in mpcs:
        scales += [m.alpha, 1.0, 1.0, m.tau]
    for i in range(theta.size):
        h = 1e-6 * scales[i]
        tp, tm = theta.copy(), theta.copy()
        tp[i] += h
        tm[i] -= h
        fd = (signal_model(tp, ARR, pat10, CFG) - signal_model(tm, ARR, pat10, CFG)).ravel()
        fd /= 2.0 * h
        ana = jac[:, i]
        if i % 4 == 0:
            ana = ana / mpcs[i // 4].alpha  # amp column is alpha-scaled
        assert np.max(np.abs(fd - ana)) / np.max(np.abs(ana)) < 1e-5


def test_fim_sigma2_scaling(pat10):
    mpcs = [_one(13.0)]
    f1 = fim(mpcs, ARR, pat10, CFG)
    cfg2 = SoundingConfig(fc=CFG.fc, bw=CFG.bw, k=CFG.k, sigma2=2.0)
    f2 = fim(mpcs, ARR, pat10, cfg2)
    np.testing.assert_allclose(f2, f1 / 2.0, rtol=1e-12)


@pytest.mark.parametrize("phi_deg", [0.0, 5.0, 20.0, 185.0])
def test_single_mpc_decoupling_at_symmetric_angles(pat10, phi_deg):
    f = fim([_one(phi_deg)], ARR, pat10, CFG)
    scale = np.sqrt(np.outer(np.diag(f), np.diag(f)))
    off = np.abs(f / scale - np.eye(4))
    assert np.max(off) < 1e-9


def test_single_mpc_universal_zero_blocks(pat10):
    # amp-phase, amp-tau, phase-phi, phi-tau and (band-centre) phase-tau
    # vanish at any angle; amp-phi does not in general
    f = fim([_one(13.0)], ARR, pat10, CFG)
    scale = np.sqrt(np.outer(np.diag(f), np.diag(f)))
    fn = f / scale
    for i, j in ((0, 1), (0, 3), (1, 2), (2, 3), (1, 3)):
        assert abs(fn[i, j]) < 1e-9
    assert abs(fn[0, 2]) > 1e-4


def test_closed_forms_match_reciprocal_diagonal(pat10):
    rng = np.random.default_rng(42)
    for _ in range(100):
        phi = rng.uniform(0, 2 * np.pi)
        gamma_i = 10.0 ** rng.uniform(-2, 2)
        cfg = SoundingConfig(fc=CFG.fc, bw=CFG.bw, k=CFG.k, sigma2=1.0 / gamma_i)
        f = fim([MpcTruth(alpha=1.0, phase=0.0, tau=25e-9, phi=phi)], ARR, pat10, cfg)
        np.testing.assert_allclose(
            crlb_single_phi(gamma_i, cfg, ARR, pat10, phi), 1.0 / f[2, 2], rtol=1e-9
        )
        np.testing.assert_allclose(
            crlb_single_alpha(gamma_i, cfg, ARR, pat10, phi), 1.0 / f[0, 0], rtol=1e-9
        )
        np.testing.assert_allclose(1.0 / f[1, 1], 1.0 / f[0, 0], rtol=1e-9)


def test_closed_forms_match_full_inversion_at_symmetric_angles(pat10):
    for phi_deg in (0.0, 5.0, 30.0, 175.0):
        rep = crlb_from_fim(fim([_one(phi_deg)], ARR, pat10, CFG))
        np.testing.assert_allclose(
            rep.value("phi"), crlb_single_phi(1.0, CFG, ARR, pat10, np.radians(phi_deg)),
            rtol=1e-9,
        )
        np.testing.assert_allclose(
            rep.value("amp_norm"), crlb_single_alpha(1.0, CFG, ARR, pat10, np.radians(phi_deg)),
            rtol=1e-9,
        )


def test_amp_angle_coupling_inflates_joint_bound(pat10):
    # asymmetric arrival: the joint bound exceeds the decoupled closed form
    # by the amplitude-angle coupling factor (about 2% at a 3 deg offset)
    rep = crlb_from_fim(fim([_one(3.0)], ARR, pat10, CFG))
    ratio = rep.value("phi") / crlb_single_phi(1.0, CFG, ARR, pat10, np.radians(3.0))
    assert 1.001 < ratio < 1.05


def test_closed_form_against_inline_ring_sum(pat10):
    # literal evaluation of the decoupled angle bound at gamma_i = 0.1,
    # 5 deg arrival, full-scale grid
    cfg = SoundingConfig(fc=37.5e9, bw=2e9, k=1001, sigma2=10.0)
    offs = 2.0 * np.pi * np.arange(36) / 36 - np.radians(5.0)
    offs = np.angle(np.exp(1j * offs))
    g_sq = pat10.g_max * np.exp(2.0 * pat10.kappa * (np.cos(offs) - 1.0))
    ring = float(np.sum(np.sin(offs) ** 2 * g_sq))
    expected = 1.0 / (2.0 * 0.1 * 1001 * pat10.kappa**2 * ring)
    got = crlb_single_phi(0.1, cfg, ARR, pat10, np.radians(5.0))
    assert got == pytest.approx(expected, rel=1e-12)


def test_crlb_scaling_in_snr(pat10):
    v1 = crlb_single_phi(0.1, CFG, ARR, pat10, 0.2)
    v2 = crlb_single_phi(1.0, CFG, ARR, pat10, 0.2)
    assert v1 / v2 == pytest.approx(10.0, rel=1e-12)


def test_crlb_angle_envelope(pat10):
    # worst accuracy on-steering, best mid-between
    offs = np.radians(np.linspace(0.0, 5.0, 11))
    vals = [crlb_single_phi(1.0, CFG, ARR, pat10, o) for o in offs]
    assert np.argmax(vals) == 0 and np.argmin(vals) == len(offs) - 1
    amps = [crlb_single_alpha(1.0, CFG, ARR, pat10, o) for o in offs]
    assert np.argmin(amps) == 0 and np.argmax(amps) == len(amps) - 1


def test_crlb_single_phase_alias(pat10):
    assert crlb_single_phase is crlb_single_alpha


def test_ring_rotation_invariance(pat10):
    base = crlb_single_phi(1.0, CFG, ARR, pat10, np.radians(3.0))
    for k in (1, 7, 19):
        rot = crlb_single_phi(1.0, CFG, ARR, pat10, np.radians(3.0 + 10.0 * k))
        assert rot == pytest.approx(base, rel=1e-9)


def test_crlb_from_fim_diagonal():
    d = np.diag([4.0, 2.0, 8.0, 16.0])
    rep = crlb_from_fim(d)
    np.testing.assert_allclose(rep.values[0], [0.25, 0.5, 0.125, 0.0625], rtol=1e-12)
    assert not rep.flagged
    assert np.all(rep.values > 0)


def test_crlb_from_fim_rejects_asymmetric():
    with pytest.raises(SingularFimError):
        crlb_from_fim(np.arange(16.0).reshape(4, 4))
    with pytest.raises(SingularFimError):
        crlb_from_fim(np.eye(3))


def test_coincident_mpcs_flagged(pat10):
    mpcs = [_one(3.0, phase=0.1), _one(3.0, phase=0.8)]
    rep = crlb_from_fim(fim(mpcs, ARR, pat10, CFG))
    assert rep.flagged
    assert np.all(np.isnan(rep.values))
    assert len(rep.singular_subspace) > 0


def test_two_mpc_decoupling_beyond_3_hpbw(pat10):
    mpcs = [_one(3.0, phase=np.pi / 3), _one(3.0 + 35.0, phase=np.pi / 5, tau=25e-9)]
    rep2 = crlb_from_fim(fim(mpcs, ARR, pat10, CFG))
    assert not rep2.flagged
    for l, mpc in enumerate(mpcs):
        rep1 = crlb_from_fim(fim([mpc], ARR, pat10, CFG))
        for param in ("amp_norm", "phase", "phi", "tau"):
            assert rep2.value(param, l) == pytest.approx(rep1.value(param), rel=0.01)


def test_fim_positive_semidefinite(pat10):
    mpcs = [_one(3.0), _one(40.0, tau=30e-9)]
    f = fim(mpcs, ARR, pat10, CFG)
    w = np.linalg.eigvalsh(f)
    assert np.all(w >= -1e-9 * np.trace(f))


def test_fim_validation(pat10):
    with pytest.raises(ValueError):
        fim([], ARR, pat10, CFG)
    cfg0 = SoundingConfig(fc=CFG.fc, bw=CFG.bw, k=CFG.k, sigma2=0.0)
    with pytest.raises(ValueError):
        fim([_one(3.0)], ARR, pat10, cfg0)


def test_tabulated_pattern_fim_close_to_gaussian(pat10):
    ang = np.radians(np.arange(-180.0, 180.0, 0.02))
    tab = AntennaPattern.from_table(ang, gain(pat10, ang))
    f_g = fim([_one(13.0)], ARR, pat10, CFG)
    f_t = fim([_one(13.0)], ARR, tab, CFG)
    np.testing.assert_allclose(np.diag(f_t), np.diag(f_g), rtol=2e-2)


def test_closed_forms_require_gaussian(pat10):
    ang = np.radians(np.arange(-180.0, 180.0, 0.5))
    tab = AntennaPattern.from_table(ang, gain(pat10, ang))
    with pytest.raises(ValueError):
        crlb_single_phi(1.0, CFG, ARR, tab, 0.0)

import math

import numpy as np
import pytest

from mpbs.core import DimensionlessCoupling, ParameterError, build_transfer_matrix
from mpbs.interferometer import (ModeAmplitudes, ProtocolConfig,
                                 default_protocol, fringe_scan, interfere,
                                 match_probe_amplitude, prepare_magnon,
                                 readout_magnon, run_protocol,
                                 sample_phase_diagram)


def balanced_resonant():
    return build_transfer_matrix(DimensionlessCoupling(
        zeta=math.log(2.0), eta=math.log(2.0), delta_ratio=0.0))


def test_mode_amplitudes_intensities():
    m = ModeAmplitudes(s=3.0 + 4.0j, a=-2.0)
    assert m.n_s == pytest.approx(25.0)
    assert m.n_a == pytest.approx(4.0)


def test_prepare_magnon_stores_reflection():
    m = build_transfer_matrix(
        DimensionlessCoupling(zeta=1.0, eta=1.0, delta_ratio=2.0))
    cfg = ProtocolConfig(write_matrix=m, bs_matrix=m, read_matrix=m,
                         probe_amplitude=1.0)
    prepared = prepare_magnon(cfg)
    assert prepared.s == pytest.approx(
        -0.24589903874926333 + 0.3188287726607408j, rel=0, abs=1e-15)
    assert prepared.s == m.r
    assert prepared.a == m.t_prime  # transmitted leakage


def test_interfere_dark_and_bright_ports():
    bs = balanced_resonant()
    # theta = pi makes the input (1, -1): the exact dark state,
    # so both intensities pass through unchanged.
    n_s, n_a = interfere(bs, 1.0, 1.0, math.pi)
    assert n_s == pytest.approx(1.0, abs=1e-15)
    assert n_a == pytest.approx(1.0, abs=1e-15)
    # theta = 0 on the balanced splitter cancels both outputs.
    n_s, n_a = interfere(bs, 1.0, 1.0, 0.0)
    assert n_s == pytest.approx(0.0, abs=1e-15)
    assert n_a == pytest.approx(0.0, abs=1e-15)


def test_balanced_resonant_fringe_closed_form():
    bs = balanced_resonant()
    thetas = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    fr = fringe_scan(bs, 1.0, 1.0, thetas)
    expected = 0.5 * (1.0 - np.cos(thetas))
    assert np.max(np.abs(fr.n_s - expected)) < 1e-14
    assert np.max(np.abs(fr.n_a - expected)) < 1e-14
    assert fr.visibility_s == pytest.approx(1.0)
    assert fr.visibility_a == pytest.approx(1.0)


def test_fringe_scan_matches_pointwise_interfere():
    bs = build_transfer_matrix(
        DimensionlessCoupling(zeta=2.0, eta=1.2, delta_ratio=3.0))
    thetas = np.linspace(0.0, 2.0 * math.pi, 17, endpoint=False)
    s_in = 0.4 -  0.2j
    probe = 0.9 + 0.1j
    fr = fringe_scan(bs, s_in, probe, thetas)
    for k, th in enumerate(thetas):
        n_s, n_a = interfere(bs, s_in, probe, float(th))
        assert fr.n_s[k] == pytest.approx(n_s, rel=0, abs=1e-15)
        assert fr.n_a[k] == pytest.approx(n_a, rel=0, abs=1e-15)


def test_fringe_scan_rejects_empty_grid():
    bs = balanced_resonant()
    with pytest.raises(ParameterError, match="non-empty"):
        fringe_scan(bs, 1.0, 1.0, np.array([]))


def test_match_probe_amplitude_balances_magnon_port():
    bs = build_transfer_matrix(
        DimensionlessCoupling(zeta=2.5, eta=1.0, delta_ratio=1.5))
    s_in = 0.3 + 0.7j
    probe = 0.2 * np.exp(0.4j)
    matched = match_probe_amplitude(bs, s_in, probe)
    assert abs(bs.r * matched) == pytest.approx(abs(bs.t * s_in), abs=1e-15)
    # phase preserved
    assert np.angle(matched) == pytest.approx(np.angle(probe))
    with pytest.raises(ParameterError):
        match_probe_amplitude(bs, s_in, 0.0)
    identity = build_transfer_matrix(
        DimensionlessCoupling(zeta=0.0, eta=0.0, delta_ratio=0.0))
    with pytest.raises(ParameterError):
        match_probe_amplitude(identity, s_in, probe)


def test_balance_mode_yields_full_visibility():
    from mpbs.analysis import fit_sinusoid
    c = DimensionlessCoupling(zeta=1.5, eta=0.8, delta_ratio=2.0)
    thetas = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    plain = run_protocol(default_protocol(c), thetas)
    balanced = run_protocol(default_protocol(c, balance_mode=True), thetas)
    # the discrete grid straddles the true extremes, so check full
    # modulation on the fitted sinusoid: amplitude equals offset
    fit = fit_sinusoid(balanced.fringes.thetas, balanced.fringes.n_s)
    assert fit.amplitude == pytest.approx(fit.offset, abs=1e-12)
    assert balanced.fringes.visibility_s > 0.999
    assert balanced.fringes.visibility_s >= plain.fringes.visibility_s


def test_sample_phase_diagram_determinism_and_shape():
    bs = build_transfer_matrix(
        DimensionlessCoupling(zeta=2.0, eta=1.0, delta_ratio=2.0))
    a = sample_phase_diagram(bs, 0.5, 1.0, 100, seed=9)
    b = sample_phase_diagram(bs, 0.5, 1.0, 100, seed=9)
    c = sample_phase_diagram(bs, 0.5, 1.0, 100, seed=10)
    assert a.shape == (100, 2)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all(a >= 0.0)


def test_sample_phase_diagram_points_lie_on_fringe():
    bs = build_transfer_matrix(
        DimensionlessCoupling(zeta=1.2, eta=0.9, delta_ratio=4.0))
    s_in = 0.4 + 0.1j
    pts = sample_phase_diagram(bs, s_in, 1.0, 50, seed=3)
    # noiseless samples must satisfy the same bounds as the fringe scan
    thetas = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
    fr = fringe_scan(bs, s_in, 1.0, thetas)
    pad = 1e-6
    assert np.all(pts[:, 0] >= np.min(fr.n_s) - pad)
    assert np.all(pts[:, 0] <= np.max(fr.n_s) + pad)
    assert np.all(pts[:, 1] >= np.min(fr.n_a) - pad)
    assert np.all(pts[:, 1] <= np.max(fr.n_a) + pad)


def test_sample_phase_diagram_noise_and_validation():
    bs = balanced_resonant()
    noisy = sample_phase_diagram(bs, 1.0, 1.0, 500, seed=1, noise_sigma=0.5)
    clean = sample_phase_diagram(bs, 1.0, 1.0, 500, seed=1)
    assert np.all(noisy >= 0.0)  # clamped
    assert not np.array_equal(noisy, clean)
    with pytest.raises(ParameterError, match="count"):
        sample_phase_diagram(bs, 1.0, 1.0, 0, seed=1)
    with pytest.raises(ParameterError, match="noise_sigma"):
        sample_phase_diagram(bs, 1.0, 1.0, 10, seed=1, noise_sigma=-0.1)


def test_readout_efficiency_of_default_read_stage():
    c = DimensionlessCoupling(zeta=1.0, eta=1.0, delta_ratio=0.0)
    proto = default_protocol(c)
    eff = abs(proto.read_matrix.r_prime) ** 2
    assert eff == pytest.approx(0.9865695059315915, rel=0, abs=1e-15)
    assert eff == pytest.approx((1.0 - math.exp(-5.0)) ** 2)
    assert eff > 0.98
    assert readout_magnon(proto.read_matrix, 1.0) == pytest.approx(eff)


def test_run_protocol_bookkeeping():
    c = DimensionlessCoupling(zeta=1.5, eta=1.0, delta_ratio=1.0)
    thetas = np.linspace(0.0, 2.0 * math.pi, 32, endpoint=False)
    res = run_protocol(default_protocol(c, probe_amplitude=0.7), thetas)
    w = build_transfer_matrix(c)
    assert res.prepared.s == pytest.approx(w.r * 0.7)
    assert res.probe_used == 0.7
    assert res.retrieved_intensity == pytest.approx(
        res.readout_efficiency * res.prepared.n_s)
    assert res.fringes.thetas.shape == (32,)

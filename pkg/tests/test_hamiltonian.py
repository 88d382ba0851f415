import math
import warnings

import numpy as np
import pytest

from mpbs.core import DimensionlessCoupling, MpbsParams, ParameterError
from mpbs.hamiltonian import (EffectiveHamiltonian, NormGrowthWarning,
                              ValidityWarning, build_heff, evolve,
                              propagator, swap_basis)
from mpbs.interferometer import ModeAmplitudes, fringe_scan
from mpbs.core import build_transfer_matrix

TWO_PI = 2.0 * math.pi


def expm_taylor(a: np.ndarray) -> np.ndarray:
    """Independent oracle: scaling and squaring with a long Taylor series."""
    a = np.asarray(a, dtype=complex)
    n = int(np.ceil(np.log2(max(1.0, np.linalg.norm(a, np.inf))))) + 6
    b = a / (2.0 ** n)
    out = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for k in range(1, 24):
        term = term @ b / k
        out = out + term
    for _ in range(n):
        out = out @ out
    return out


def far_detuned_params(**overrides):
    base = dict(delta=TWO_PI * 60e6, kappa13=TWO_PI * 3e6,
                rabi_c=TWO_PI * 4.37e6, g_root_n=TWO_PI * 4.37e6,
                tau_p=5e-8, od=40.0, eta_per_od=0.05)
    base.update(overrides)
    return MpbsParams(**base)


def test_build_heff_entries():
    p = far_detuned_params()
    h = build_heff(p).h
    denom = p.delta - 1j * p.kappa13
    g, om = p.g_root_n, p.rabi_c
    assert h[0, 0] == pytest.approx(g * g / denom)
    assert h[0, 1] == pytest.approx(-g * om / denom)
    assert h[1, 0] == pytest.approx(g * om / denom)
    assert h[1, 1] == pytest.approx(om * om / denom)
    # off-diagonal antisymmetry is exact
    assert h[0, 1] == -h[1, 0]


def test_validity_warning_when_drive_is_too_strong():
    with pytest.warns(ValidityWarning):
        build_heff(far_detuned_params(delta=TWO_PI * 1e6,
                                      kappa13=TWO_PI * 1e6))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_heff(far_detuned_params())


def test_effective_hamiltonian_shape_guard():
    with pytest.raises(ParameterError, match="2x2"):
        EffectiveHamiltonian(h=np.eye(3, dtype=complex))
    held = EffectiveHamiltonian(h=np.eye(2, dtype=complex))
    with pytest.raises(ValueError):
        held.h[0, 0] = 5.0  # read-only view


def test_propagator_rejects_negative_tau():
    with pytest.raises(ParameterError, match="tau"):
        propagator(np.eye(2, dtype=complex), -1.0)


def test_propagator_matches_taylor_oracle():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(60):
        h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        tau = rng.uniform(0.0, 3.0)
        u = propagator(h, tau)
        ref = expm_taylor(-1j * tau * h)
        # relative: exp of a random matrix can be large, and the oracle's
        # repeated squarings amplify its own rounding with it
        rel = np.max(np.abs(u - ref)) / max(1.0, np.max(np.abs(ref)))
        worst = max(worst, rel)
    assert worst < 1e-10


def test_propagator_defective_generator():
    # G = (sqrt(2)+1) * Omega makes mu^2 = det: a non-diagonalizable
    # generator, where naive eigendecomposition breaks down.
    om = 1.0
    g = (math.sqrt(2.0) + 1.0) * om
    h = np.array([[g * g, -g * om], [g * om, om * om]], dtype=complex)
    mu = (h[0, 0] + h[1, 1]) / 2.0
    det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
    assert abs(mu * mu - det) < 1e-12 * abs(mu * mu)
    for tau in (0.0, 0.3, 1.7):
        u = propagator(h, tau)
        ref = expm_taylor(-1j * tau * h)
        assert np.max(np.abs(u - ref)) < 1e-10


def test_propagator_semigroup():
    p = far_detuned_params()
    h = build_heff(p)
    u1 = propagator(h, 20e-9)
    u2 = propagator(h, 30e-9)
    u12 = propagator(h, 50e-9)
    assert np.max(np.abs(u2 @ u1 - u12)) < 1e-10 * np.max(np.abs(u12))


def test_propagator_unitary_for_hermitian_generator():
    rng = np.random.default_rng(23)
    for _ in range(50):
        raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        herm = (raw + raw.conj().T) / 2.0
        u = propagator(herm, rng.uniform(0.0, 5.0))
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12


def test_evolve_basis_order_and_identity_at_tau_zero():
    state = ModeAmplitudes(s=0.3 + 0.1j, a=-0.7j)
    out = evolve(np.zeros((2, 2), dtype=complex), state, 0.0)
    assert out.s == state.s and out.a == state.a
    # a pure photon-number generator phases only the photon slot
    h = np.diag([2.0, 0.0]).astype(complex)
    out2 = evolve(h, ModeAmplitudes(s=1.0, a=1.0), math.pi / 2.0)
    assert out2.s == pytest.approx(1.0)
    assert out2.a == pytest.approx(np.exp(-1j * math.pi), abs=1e-12)


def test_evolve_reports_norm_growth_for_lossy_denominator():
    # With h built from Delta - i*kappa13 and U = exp(-i h tau), kappa13 > 0
    # produces growth, not decay; the package reports it loudly.
    p = far_detuned_params()
    with pytest.warns(NormGrowthWarning):
        evolve(build_heff(p), ModeAmplitudes(s=0.0, a=1.0), p.tau_p)


def test_evolve_no_growth_warning_for_hermitian_generator():
    herm = np.array([[1.0, 0.5], [0.5, -2.0]], dtype=complex)
    with warnings.catch_warnings():
        warnings.simplefilter("error", NormGrowthWarning)
        evolve(herm, ModeAmplitudes(s=1.0, a=2.0), 1.3)


def test_swap_basis_involution_and_layout():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    sw = swap_basis(m)
    assert np.array_equal(sw, np.array([[4.0, 3.0], [2.0, 1.0]]))
    assert np.array_equal(swap_basis(sw), m)
    with pytest.raises(ParameterError, match="2x2"):
        swap_basis(np.eye(3))


def test_norm_deficit_scales_linearly_in_kappa():
    # |spectral_norm(U) - 1| ~ kappa for small kappa at fixed Omega, Delta,
    # zeta (tau rescaled as zeta*kappa/Omega^2).
    om = TWO_PI * 4.37e6
    de = TWO_PI * 30e6
    zeta = 2.0
    ratios = [1e-4, 1e-3, 1e-2]
    deficits = []
    for ratio in ratios:
        kap = ratio * de
        tau = zeta * kap / om ** 2
        p = MpbsParams(delta=de, kappa13=kap, rabi_c=om, g_root_n=om,
                       tau_p=tau, od=40.0, eta_per_od=0.05)
        u = propagator(build_heff(p), tau)
        deficits.append(abs(np.linalg.norm(u, 2) - 1.0))
    slopes = np.diff(np.log(deficits)) / np.diff(np.log(ratios))
    assert np.all(slopes > 0.9) and np.all(slopes < 1.1)


def test_far_detuned_magnitudes_match_transfer_matrix():
    # The two models share element magnitudes to well under 5% when the
    # detuning dominates, but the off-diagonal sign conventions differ:
    # the Hamiltonian route gives correlated fringes where the transfer
    # matrix gives anti-correlated ones.  Both facts are pinned here.
    p = far_detuned_params()
    c = DimensionlessCoupling(
        zeta=p.rabi_c ** 2 * p.tau_p / p.kappa13,
        eta=p.g_root_n ** 2 * p.tau_p / p.kappa13,
        delta_ratio=p.delta / p.kappa13)
    t_matrix = build_transfer_matrix(c).as_array()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        u = swap_basis(propagator(build_heff(p), p.tau_p))  # to (S, a) order
    rel = np.max(np.abs(np.abs(u) - np.abs(t_matrix)) / np.abs(t_matrix))
    # the residual is the opposite dissipation sign: a factor
    # exp(2*zeta/(1+dr^2)), about 1% at this operating point
    assert rel < 0.05

    thetas = np.linspace(0.0, TWO_PI, 64, endpoint=False)
    s_in = 0.3 + 0.2j

    def pearson(fr):
        return float(np.corrcoef(fr.n_s, fr.n_a)[0, 1])

    from mpbs.core import TransferMatrix
    u_as_tm = TransferMatrix(t=complex(u[0, 0]), r=complex(u[0, 1]),
                             r_prime=complex(u[1, 0]),
                             t_prime=complex(u[1, 1]))
    t_as_tm = build_transfer_matrix(c)
    corr_u = pearson(fringe_scan(u_as_tm, s_in, 1.0, thetas))
    corr_t = pearson(fringe_scan(t_as_tm, s_in, 1.0, thetas))
    assert corr_t < -0.99
    assert corr_u > 0.99

"""Two-mode effective Hamiltonian and its exact propagator.

An independent dynamical model to compare against the closed-form transfer
matrix: after adiabatic elimination the photon mode a and magnon mode S
evolve under the 2x2 generator (basis order (a, S))

    h = [[ g^2 N,          -g sqrt(N) Omega_c ],
         [ g sqrt(N) Omega_c,  Omega_c^2      ]] / (Delta - i kappa13)

with the antisymmetric coupling sign fixed by the underlying
(a S^dag - a^dag S) interaction term.  Two consequences of taking this
form literally, both verified by tests rather than assumed:

* the coupling block is antisymmetric and real-coefficient, so h is NOT
  Hermitian at kappa13 = 0 unless one of the drives vanishes; the
  Hermitian-limit guarantees of the propagator therefore apply to
  Hermitian generators, not to every kappa13 = 0 matrix;
* with U = exp(-i h tau) the kappa13 > 0 diagonal acts as gain, not loss
  (the denominator convention and the evolution sign convention disagree
  for this pairing), so evolve() checks the output norm and reports growth
  through NormGrowthWarning instead of silently accepting it.

The closed-form matrix of mpbs_core uses the opposite dissipation sign and
a symmetric off-diagonal product; element magnitudes of the two models
agree to a fraction of a percent in the far-detuned regime, while the
relative sign of the off-diagonal scattering phases differs.  The
quantitative mapping between the two forms is outside this package's
scope; tests compare magnitudes only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import MpbsParams, ParameterError
from .interferometer import ModeAmplitudes


class ValidityWarning(UserWarning):
    """Drive strength violates the adiabatic-elimination condition."""


class NormGrowthWarning(UserWarning):
    """The propagator increased the state norm (active evolution)."""


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    """2x2 complex generator in the (a, S) basis, entries in rad/s."""

    h: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.h, dtype=complex)
        if arr.shape != (2, 2):
            raise ParameterError(f"h must be 2x2, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "h", arr)


def build_heff(params: MpbsParams) -> EffectiveHamiltonian:
    """Assemble the effective Hamiltonian from physical parameters.

    Emits ValidityWarning when max(g_root_n, rabi_c)^2 exceeds
    0.1 * (delta^2 + kappa13^2), outside the adiabatic regime.
    """
    g = params.g_root_n
    om = params.rabi_c
    denom = params.delta - 1j * params.kappa13
    if max(g, om) ** 2 > 0.1 * (params.delta ** 2 + params.kappa13 ** 2):
        warnings.warn(
            "drive strength violates |Delta|^2 + kappa13^2 >> g, Omega_c; "
            "the two-mode reduction is unreliable here",
            ValidityWarning, stacklevel=2)
    h = np.array([[g * g, -g * om],
                  [g * om, om * om]], dtype=complex) / denom
    return EffectiveHamiltonian(h=h)


def _as_matrix(h: EffectiveHamiltonian | np.ndarray) -> np.ndarray:
    if isinstance(h, EffectiveHamiltonian):
        return h.h
    arr = np.asarray(h, dtype=complex)
    if arr.shape != (2, 2):
        raise ParameterError(f"generator must be 2x2, got shape {arr.shape}")
    return arr


def propagator(h: EffectiveHamiltonian | np.ndarray,
               tau: float) -> np.ndarray:
    """Exact 2x2 matrix exponential U = exp(-i h tau).

    Uses the closed form exp(A) = e^mu (cosh(s) I + sinh(s)/s (A - mu I))
    with mu = tr(A)/2 and s^2 = mu^2 - det(A).  Near s = 0 (including the
    defective, non-diagonalizable case) sinh(s)/s and cosh(s) are replaced
    by their series in s^2, which is exact at s = 0 where
    exp(A) = e^mu (I + (A - mu I)).
    """
    if tau < 0:
        raise ParameterError(f"tau must be >= 0, got {tau}")
    a = -1j * tau * _as_matrix(h)
    mu = (a[0, 0] + a[1, 1]) / 2.0
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    s2 = mu * mu - det
    s = np.sqrt(complex(s2))
    if abs(s) < 1e-6 * max(1.0, abs(mu)):
        # Series in s^2; truncation error ~ |s|^8 / 9! is far below 1 ulp.
        f = 1.0 + s2 / 6.0 + s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0
        g = 1.0 + s2 / 2.0 + s2 * s2 / 24.0 + s2 * s2 * s2 / 720.0
    else:
        f = np.sinh(s) / s
        g = np.cosh(s)
    return np.exp(mu) * (g * np.eye(2, dtype=complex) + f * (a - mu * np.eye(2)))


def evolve(h: EffectiveHamiltonian | np.ndarray, state: ModeAmplitudes,
           tau: float) -> ModeAmplitudes:
    """Propagate a state for time tau; report norm growth when it occurs.

    The generator basis is (a, S).  Norm non-increase is checked, not
    assumed: with the literal sign conventions above the kappa13 > 0
    evolution is active, and the check makes that visible.
    """
    u = propagator(h, tau)
    vec = np.array([state.a, state.s], dtype=complex)
    out = u @ vec
    norm_in = float(np.linalg.norm(vec))
    norm_out = float(np.linalg.norm(out))
    if norm_in > 0.0 and norm_out > norm_in * (1.0 + 1e-9):
        warnings.warn(
            f"state norm grew from {norm_in:.6g} to {norm_out:.6g}; the "
            "generator is not dissipative for these parameters",
            NormGrowthWarning, stacklevel=2)
    return ModeAmplitudes(s=complex(out[1]), a=complex(out[0]))


_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def swap_basis(m: np.ndarray) -> np.ndarray:
    """Conjugate a 2x2 matrix by the port swap, (a, S) <-> (S, a).

    Involution: applying it twice returns the original matrix.
    """
    arr = np.asarray(m)
    if arr.shape != (2, 2):
        raise ParameterError(f"expected a 2x2 matrix, got shape {arr.shape}")
    return _SWAP @ arr @ _SWAP

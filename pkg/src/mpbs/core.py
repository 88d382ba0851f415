"""Closed-form transfer matrix of the magnon-photon beam splitter.

A weak probe pulse and the collective ground-state spin excitation (the
magnon) of a driven three-level ensemble mix like the two ports of a beam
splitter.  Adiabatic elimination of the excited state leaves a 2x2 complex
transfer matrix acting on the amplitude pair (S, a), where S is the magnon
and a the probe photon::

    (S_out, a_out) = [[t, r], [r', t']] . (S_in, a_in)

with t = exp(-zeta / (i*Delta/kappa13 + 1)) and the remaining elements tied
to t by exact algebraic identities.  The matrix is generically non-unitary:
the shared decay channel converts between the ports incoherently, which is
the effect this package quantifies.

Conventions used package-wide:

* frequencies (delta, kappa13, rabi_c, g_root_n) are angular, in rad/s;
* phases are reported wrapped to (-pi, pi]; the folded variant in [0, pi]
  is written two_phi where it appears in outputs;
* comparisons of phases near the +/-pi boundary must use circular distance
  (``fold_angle(x - pi)``), since the wrap convention makes the literal
  difference jump by 2*pi there.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


class ParameterError(ValueError):
    """A physical or dimensionless parameter violates its domain."""


class GainRegimeWarning(UserWarning):
    """eta exceeds zeta, which can push the spectral norm above 1."""


def wrap_angle(phi: float) -> float:
    """Wrap an angle to the half-open interval (-pi, pi]."""
    return -((-phi + math.pi) % TWO_PI - math.pi)


def fold_angle(phi: float) -> float:
    """Fold an angle to [0, pi]; the sign of a fringe phase difference is
    unobservable from unordered scatter data, so folded values are what the
    phase-diagram observables report."""
    return abs(wrap_angle(phi))


def circular_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    return fold_angle(a - b)


@dataclass(frozen=True)
class MpbsParams:
    """Physical knobs of one beam-splitter stage.

    delta: single-photon detuning (rad/s), any sign.
    kappa13: dephasing rate of the probe transition (rad/s), > 0.
    rabi_c: control-field Rabi frequency (rad/s), >= 0.
    g_root_n: collective atom-photon coupling g*sqrt(N) (rad/s), >= 0.
    tau_p: probe pulse duration (s), > 0.
    od: optical depth, >= 0.
    eta_per_od: calibration constant beta in eta = beta * od, > 0.
    """

    delta: float
    kappa13: float
    rabi_c: float
    g_root_n: float
    tau_p: float
    od: float
    eta_per_od: float

    def __post_init__(self) -> None:
        if not self.kappa13 > 0:
            raise ParameterError(f"kappa13 must be > 0, got {self.kappa13}")
        if not self.tau_p > 0:
            raise ParameterError(f"tau_p must be > 0, got {self.tau_p}")
        if self.od < 0:
            raise ParameterError(f"od must be >= 0, got {self.od}")
        if not self.eta_per_od > 0:
            raise ParameterError(
                f"eta_per_od must be > 0, got {self.eta_per_od}")
        if self.rabi_c < 0:
            raise ParameterError(f"rabi_c must be >= 0, got {self.rabi_c}")
        if self.g_root_n < 0:
            raise ParameterError(
                f"g_root_n must be >= 0, got {self.g_root_n}")


@dataclass(frozen=True)
class DimensionlessCoupling:
    """The three numbers that fully determine the transfer matrix."""

    zeta: float
    eta: float
    delta_ratio: float

    def __post_init__(self) -> None:
        if self.zeta < 0:
            raise ParameterError(f"zeta must be >= 0, got {self.zeta}")
        if self.eta < 0:
            raise ParameterError(f"eta must be >= 0, got {self.eta}")


def derive_dimensionless(params: MpbsParams) -> DimensionlessCoupling:
    """Reduce physical parameters to (zeta, eta, delta_ratio).

    zeta = rabi_c^2 * tau_p / kappa13 is the beam-splitter interaction
    strength; eta = eta_per_od * od carries the ensemble absorption.
    """
    return DimensionlessCoupling(
        zeta=params.rabi_c ** 2 * params.tau_p / params.kappa13,
        eta=params.eta_per_od * params.od,
        delta_ratio=params.delta / params.kappa13,
    )


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 complex beam-splitter matrix in the (S, a) basis.

    Satisfies r = t - 1, r' = (eta/zeta)*r, t' = 1 - (eta/zeta)*(1 - t)
    exactly, which forces T.(1, -1) = (1, -1): the antisymmetric
    photon-magnon superposition is a dark state of the splitter.
    """

    t: complex
    r: complex
    r_prime: complex
    t_prime: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.t, self.r],
                         [self.r_prime, self.t_prime]], dtype=complex)


def build_transfer_matrix(c: DimensionlessCoupling) -> TransferMatrix:
    """Evaluate the closed-form transfer matrix.

    zeta = 0 with eta = 0 is the identity (no control field, no mixing);
    zeta = 0 with eta > 0 leaves the eta/zeta ratio undefined and is
    rejected.
    """
    if c.zeta == 0.0:
        if c.eta > 0.0:
            raise ParameterError(
                "eta > 0 requires zeta > 0 (the eta/zeta ratio is undefined)")
        return TransferMatrix(1.0 + 0j, 0j, 0j, 1.0 + 0j)
    if c.eta > c.zeta:
        warnings.warn(
            f"eta = {c.eta:g} exceeds zeta = {c.zeta:g}; the transfer matrix "
            "can have spectral norm above 1 (weak gain)",
            GainRegimeWarning, stacklevel=2)
    t = cmath.exp(-c.zeta / (1j * c.delta_ratio + 1.0))
    r = t - 1.0
    ratio = c.eta / c.zeta
    return TransferMatrix(
        t=t,
        r=r,
        r_prime=ratio * r,
        t_prime=1.0 - ratio * (1.0 - t),
    )


def asymptotic_transfer_matrix(c: DimensionlessCoupling) -> TransferMatrix:
    """First-order matrix for |delta_ratio| >> 1, used in limit tests.

    Element-wise it differs from the exact matrix by O(delta_ratio^-2).
    """
    if c.delta_ratio == 0.0:
        raise ParameterError(
            "asymptotic form is undefined at delta_ratio = 0")
    if c.zeta == 0.0 and c.eta > 0.0:
        raise ParameterError(
            "eta > 0 requires zeta > 0 (the eta/zeta ratio is undefined)")
    jdr = 1j / c.delta_ratio
    return TransferMatrix(
        t=1.0 + c.zeta * jdr,
        r=c.zeta * jdr,
        r_prime=c.eta * jdr,
        t_prime=1.0 + c.eta * jdr,
    )


def matrix_phase_difference(m: TransferMatrix) -> float:
    """Fringe phase difference Delta-psi encoded in the matrix arguments.

    Equals (arg r - arg t) - (arg t' - arg r') wrapped to (-pi, pi].  This
    is exactly the phase by which the magnon-port fringe leads the
    photon-port fringe in the two-pulse interference protocol; common
    input phases cancel.  Undefined when r = 0 (no mixing).
    """
    if m.r == 0:
        raise ParameterError(
            "phase difference is undefined for a degenerate matrix (r = 0)")
    return wrap_angle(
        (cmath.phase(m.r) - cmath.phase(m.t))
        - (cmath.phase(m.t_prime) - cmath.phase(m.r_prime)))


@dataclass(frozen=True)
class MatrixDiagnostics:
    """Derived observables of one transfer matrix.

    fringe_phase_difference is 0.0 with degenerate=True when r = 0; the
    value is then a convention, not a measurement.  gain flags a spectral
    norm above 1 + 1e-9 (the matrix amplifies some input).
    """

    unitarity_deviation: float
    spectral_norm: float
    eigenvalues: tuple[complex, complex]
    eigenvectors: tuple[tuple[complex, complex], tuple[complex, complex]]
    fringe_phase_difference: float
    reflection_phase: float
    degenerate: bool
    gain: bool


def _eigenvector(arr: np.ndarray, lam: complex) -> tuple[complex, complex]:
    # Rows of (T - lam*I) are proportional; take the better-conditioned
    # null-vector candidate, then normalize with a deterministic phase.
    cand1 = np.array([arr[0, 1], lam - arr[0, 0]])
    cand2 = np.array([lam - arr[1, 1], arr[1, 0]])
    v = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
    n = np.linalg.norm(v)
    if n == 0.0:
        # Diagonal matrix: basis vector of the matching diagonal entry.
        v = np.array([1.0, 0.0]) if abs(arr[0, 0] - lam) <= abs(
            arr[1, 1] - lam) else np.array([0.0, 1.0])
        n = 1.0
    v = v / n
    pivot = v[0] if abs(v[0]) >= abs(v[1]) else v[1]
    v = v * (abs(pivot) / pivot)
    return (complex(v[0]), complex(v[1]))


def diagnostics(m: TransferMatrix) -> MatrixDiagnostics:
    """Compute unitarity deviation, spectrum, and phase observables."""
    arr = m.as_array()
    gram = arr.conj().T @ arr
    deviation = float(np.linalg.norm(gram - np.eye(2)))
    spectral = float(np.linalg.norm(arr, 2))

    # Closed-form eigenpairs of the 2x2 matrix.
    mu = (m.t + m.t_prime) / 2.0
    det = m.t * m.t_prime - m.r * m.r_prime
    s = cmath.sqrt(mu * mu - det)
    lam1, lam2 = mu + s, mu - s
    vecs = (_eigenvector(arr, lam1), _eigenvector(arr, lam2))

    degenerate = m.r == 0
    if degenerate:
        phase_diff = 0.0
        refl_phase = 0.0
    else:
        phase_diff = matrix_phase_difference(m)
        refl_phase = cmath.phase(m.r)

    return MatrixDiagnostics(
        unitarity_deviation=deviation,
        spectral_norm=spectral,
        eigenvalues=(lam1, lam2),
        eigenvectors=vecs,
        fringe_phase_difference=phase_diff,
        reflection_phase=refl_phase,
        degenerate=degenerate,
        gain=spectral > 1.0 + 1e-9,
    )

"""Cascaded-slice model of a thick ensemble.

A splitter with large optical depth is modeled as M spatially cascaded
single-magnon-mode stages: the probe photon threads through all slices in
order, while each slice owns a distinct magnon mode.  Slice i carries the
equal partition (zeta/M, eta/M) of the totals at the common detuning, so
the model is a refinement family: M = 1 is exactly the single-mode matrix
and the fringe phase difference converges as M grows.

This is a stand-in for the full spatially resolved coupling model, not a
replacement; its deviation from the single-mode phase is reported as a
diagnostic, without a pass/fail threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import analysis
from .core import (DimensionlessCoupling, MpbsParams, ParameterError,
                   build_transfer_matrix, derive_dimensionless, fold_angle)
from .interferometer import FringeSeries, _visibility


@dataclass(frozen=True, eq=False)
class CascadeModel:
    """M cascaded slices plus the assembled (M+1) x (M+1) total matrix.

    The state vector ordering is (S_1, ..., S_M, a): slice magnons first,
    the threaded photon last.
    """

    slices: int
    per_slice: DimensionlessCoupling
    total: np.ndarray


def build_cascade(c: DimensionlessCoupling, slices: int) -> CascadeModel:
    """Assemble the ordered product of M embedded slice matrices.

    Each embedded matrix couples the photon (last index) to one slice
    magnon and acts as the identity elsewhere; slice 1 is applied first.
    """
    m = int(slices)
    if m < 1:
        raise ParameterError(f"slices must be >= 1, got {slices}")
    per = DimensionlessCoupling(zeta=c.zeta / m, eta=c.eta / m,
                                delta_ratio=c.delta_ratio)
    single = build_transfer_matrix(per)
    total = np.eye(m + 1, dtype=complex)
    for i in range(m):
        embedded = np.eye(m + 1, dtype=complex)
        embedded[i, i] = single.t
        embedded[i, m] = single.r
        embedded[m, i] = single.r_prime
        embedded[m, m] = single.t_prime
        total = embedded @ total
    total.setflags(write=False)
    return CascadeModel(slices=m, per_slice=per, total=total)


def prepare_magnon_profile(model: CascadeModel,
                           probe: complex) -> tuple[np.ndarray, complex]:
    """Write stage: run a probe pulse through the cascade.

    Returns the stored magnon amplitudes per slice and the transmitted
    leakage photon amplitude.
    """
    vec = np.zeros(model.slices + 1, dtype=complex)
    vec[model.slices] = probe
    out = model.total @ vec
    return out[:model.slices].copy(), complex(out[model.slices])


def cascade_interfere(model: CascadeModel, magnon_state: np.ndarray,
                      probe: complex, theta: float) -> tuple[float, float]:
    """Mix a stored magnon profile with a phase-shifted probe pulse.

    Returns (n_s_total, n_a) where n_s_total sums the slice magnon
    intensities: the readout retrieves the total excitation, and the
    slice populations add incoherently in that measurement.
    """
    state = np.asarray(magnon_state, dtype=complex)
    if state.shape != (model.slices,):
        raise ParameterError(
            f"magnon_state must have length {model.slices}, "
            f"got shape {state.shape}")
    vec = np.concatenate([state, [probe * np.exp(1j * theta)]])
    out = model.total @ vec
    n_s_total = float(np.sum(np.abs(out[:model.slices]) ** 2))
    n_a = float(np.abs(out[model.slices]) ** 2)
    return n_s_total, n_a


def cascade_fringe_scan(model: CascadeModel, magnon_state: np.ndarray,
                        probe: complex,
                        theta_grid: np.ndarray) -> FringeSeries:
    """Evaluate cascade fringes on a theta grid (same container as the
    single-mode scan; n_s holds the summed magnon intensity)."""
    thetas = np.asarray(theta_grid, dtype=float)
    if thetas.size == 0:
        raise ParameterError("theta grid must be non-empty")
    n_s = np.empty(thetas.size)
    n_a = np.empty(thetas.size)
    for k, theta in enumerate(thetas):
        n_s[k], n_a[k] = cascade_interfere(model, magnon_state, probe,
                                           float(theta))
    return FringeSeries(thetas=thetas, n_s=n_s, n_a=n_a,
                        visibility_s=_visibility(n_s),
                        visibility_a=_visibility(n_a))


@dataclass(frozen=True)
class OdPhasePoint:
    """Cascade fringe phase at one optical depth.

    delta_psi is the signed fit difference in (-pi, pi]; two_phi is its
    fold into [0, pi], the form the phase-diagram observable reports.
    degenerate marks points where one fringe carries no visibility (for
    example od = 0, where the photon port never modulates).
    """

    od: float
    slices: int
    delta_psi: float
    two_phi: float
    degenerate: bool


def phase_vs_od(base: MpbsParams, od_grid: np.ndarray,
                slices_per_unit_od: float = 0.5,
                theta_samples: int = 64) -> list[OdPhasePoint]:
    """Sweep optical depth, rebuilding the cascade at each point.

    The slice count follows the depth, M = max(1, round(s_pu * od)), so
    each slice keeps a fixed share of optical depth as od grows.  The
    fringe phase difference is extracted by sinusoid fits on a uniform
    theta grid; points whose fits fail the visibility precondition are
    returned flagged instead of raising.
    """
    if slices_per_unit_od <= 0:
        raise ParameterError(
            f"slices_per_unit_od must be > 0, got {slices_per_unit_od}")
    thetas = np.linspace(0.0, 2.0 * np.pi, int(theta_samples),
                         endpoint=False)
    points: list[OdPhasePoint] = []
    for od in np.asarray(od_grid, dtype=float):
        params = replace(base, od=float(od))
        coupling = derive_dimensionless(params)
        slices = max(1, round(slices_per_unit_od * float(od)))
        model = build_cascade(coupling, slices)
        magnons, _ = prepare_magnon_profile(model, 1.0)
        fringes = cascade_fringe_scan(model, magnons, 1.0, thetas)
        try:
            fit_s = analysis.fit_sinusoid(fringes.thetas, fringes.n_s)
            fit_a = analysis.fit_sinusoid(fringes.thetas, fringes.n_a)
            dpsi = analysis.fringe_phase_difference(fit_s, fit_a)
            degenerate = False
        except analysis.AnalysisError:
            dpsi = 0.0
            degenerate = True
        points.append(OdPhasePoint(od=float(od), slices=slices,
                                   delta_psi=dpsi,
                                   two_phi=fold_angle(dpsi),
                                   degenerate=degenerate))
    return points

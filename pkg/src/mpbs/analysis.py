"""Fringe and phase-diagram estimators.

Two observables are extracted from simulated or measured data: the fringe
phase difference between the magnon and photon ports (from paired sinusoid
fits), and the Lissajous phase delta of the (n_s, n_a) scatter (from a
constrained conic fit).  For noiseless data the two agree with the matrix
phase difference up to the unavoidable sign fold: an unordered point cloud
cannot distinguish delta from -delta, so ellipse results live in [0, pi].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import wrap_angle


class AnalysisError(ValueError):
    """Input data cannot support the requested fit."""


class DegenerateDataError(AnalysisError):
    """The sample layout is rank-deficient for the model."""


class LowVisibilityError(AnalysisError):
    """Fringe amplitude is too small relative to the fit residual."""


class NearDegenerateWarning(UserWarning):
    """The fitted ellipse is within rounding of a degenerate line."""


@dataclass(frozen=True)
class SinusoidFit:
    """Least-squares fit of values = offset + amplitude*cos(theta + phase).

    amp_cos and amp_sin are the raw coefficients on cos(theta) and
    sin(theta); phase = atan2(-amp_sin, amp_cos).
    """

    offset: float
    amp_cos: float
    amp_sin: float
    amplitude: float
    phase: float
    rms_residual: float


def fit_sinusoid(thetas: np.ndarray, values: np.ndarray) -> SinusoidFit:
    """Exact linear least squares on the basis {1, cos theta, sin theta}.

    Solved through the 3x3 normal equations; needs at least 3 samples at
    3 effectively distinct phases.
    """
    th = np.asarray(thetas, dtype=float)
    v = np.asarray(values, dtype=float)
    if th.shape != v.shape or th.ndim != 1:
        raise AnalysisError("thetas and values must be equal-length vectors")
    if th.size < 3:
        raise DegenerateDataError(
            f"need at least 3 samples, got {th.size}")
    design = np.column_stack([np.ones_like(th), np.cos(th), np.sin(th)])
    gram = design.T @ design
    if np.linalg.cond(gram) > 1e10:
        raise DegenerateDataError(
            "theta samples collapse to fewer than 3 distinct phases")
    coef = np.linalg.solve(gram, design.T @ v)
    offset, amp_cos, amp_sin = (float(c) for c in coef)
    residual = v - design @ coef
    return SinusoidFit(
        offset=offset,
        amp_cos=amp_cos,
        amp_sin=amp_sin,
        amplitude=math.hypot(amp_cos, amp_sin),
        phase=math.atan2(-amp_sin, amp_cos),
        rms_residual=float(np.sqrt(np.mean(residual ** 2))),
    )


def fringe_phase_difference(fit_s: SinusoidFit, fit_a: SinusoidFit) -> float:
    """Signed phase difference between two fringes, wrapped to (-pi, pi].

    Requires both fringes to be meaningful: amplitude above 10x the rms
    fit residual.
    """
    for name, fit in (("magnon", fit_s), ("photon", fit_a)):
        if not fit.amplitude > 10.0 * fit.rms_residual:
            raise LowVisibilityError(
                f"{name}-port fringe amplitude {fit.amplitude:.3g} is not "
                f"above 10x its rms residual {fit.rms_residual:.3g}")
    return wrap_angle(fit_s.phase - fit_a.phase)


@dataclass(frozen=True)
class EllipseFit:
    """Constrained conic fit of a phase-diagram scatter.

    conic holds (A, B, C, D, E, F) of Ax^2+Bxy+Cy^2+Dx+Ey+F = 0 in the
    original data frame, normalized to 4AC - B^2 = 1 with A > 0; it is
    None when the scatter degenerates to a line.  delta is the Lissajous
    phase in [0, pi]; sign_ambiguous records that +delta and -delta are
    indistinguishable in an unordered scatter (always true for a real
    ellipse, false for the degenerate lines where delta is exactly 0 or
    pi).  rms_residual is the algebraic conic residual on the per-axis
    normalized points, or the rms perpendicular spread for a line.
    """

    conic: tuple[float, float, float, float, float, float] | None
    center: tuple[float, float]
    delta: float
    degeneracy: str | None
    rms_residual: float
    sign_ambiguous: bool


def delta_from_conic(conic: tuple[float, ...] | np.ndarray) -> float:
    """Lissajous phase from an ellipse conic: cos delta = -B/(2 sqrt(AC)).

    Centered Lissajous points x = X cos(theta), y = Y cos(theta + delta)
    satisfy (x/X)^2 - 2 cos(delta) (x/X)(y/Y) + (y/Y)^2 = sin^2(delta),
    so the mixed coefficient alone fixes delta up to the sign fold.
    Requires a true ellipse with A, C > 0.
    """
    a, b, c = float(conic[0]), float(conic[1]), float(conic[2])
    if 4.0 * a * c - b * b <= 0.0:
        raise AnalysisError(
            "conic is not an ellipse (4AC - B^2 must be positive)")
    if a <= 0.0 or c <= 0.0:
        raise AnalysisError(
            "conic must be oriented with A, C > 0; multiply all six "
            "coefficients by -1 if both are negative")
    cos_delta = -b / (2.0 * math.sqrt(a * c))
    if abs(cos_delta) >= 1.0 - 1e-12:
        warnings.warn(
            "ellipse is within rounding of a degenerate line; the "
            "extracted phase is at the 0 or pi boundary",
            NearDegenerateWarning, stacklevel=2)
    return math.acos(min(1.0, max(-1.0, cos_delta)))


def _conic_fit_normalized(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # Direct constrained algebraic fit: minimize the conic residual
    # subject to 4AC - B^2 = 1, reduced to a 3x3 eigenproblem on the
    # quadratic block after eliminating the linear coefficients.
    d1 = np.column_stack([x * x, x * y, y * y])
    d2 = np.column_stack([x, y, np.ones_like(x)])
    s1 = d1.T @ d1
    s2 = d1.T @ d2
    s3 = d2.T @ d2
    try:
        t = -np.linalg.solve(s3, s2.T)
    except np.linalg.LinAlgError as exc:
        raise DegenerateDataError(
            "linear scatter block is singular; points do not span a "
            "conic") from exc
    c1inv = np.array([[0.0, 0.0, 0.5], [0.0, -1.0, 0.0], [0.5, 0.0, 0.0]])
    reduced = c1inv @ (s1 + s2 @ t)
    eigvals, eigvecs = np.linalg.eig(reduced)
    quad = None
    for i in range(3):
        cand = np.real(eigvecs[:, i])
        constraint = 4.0 * cand[0] * cand[2] - cand[1] ** 2
        if constraint > 0.0:
            quad = cand / math.sqrt(constraint)
    if quad is None:
        raise DegenerateDataError(
            "no elliptical solution; the scatter is not an ellipse")
    # The eigenvector sign is arbitrary; canonicalize so A (and hence C,
    # since 4AC > B^2 >= 0) is positive.  Without this the extracted
    # phase flips between delta and pi - delta.
    if quad[0] < 0.0:
        quad = -quad
    linear = t @ quad
    return np.concatenate([quad, linear])


def _denormalize_conic(conic: np.ndarray, mx: float, my: float,
                       sx: float, sy: float) -> np.ndarray:
    # Substitute x -> (x - mx)/sx, y -> (y - my)/sy and renormalize the
    # result to 4AC - B^2 = 1 (the substitution scales the discriminant
    # by 1/(sx*sy)^2).
    a, b, c, d, e, f = conic
    ao = a / sx ** 2
    bo = b / (sx * sy)
    co = c / sy ** 2
    do = -2.0 * a * mx / sx ** 2 - b * my / (sx * sy) + d / sx
    eo = -b * mx / (sx * sy) - 2.0 * c * my / sy ** 2 + e / sy
    fo = (a * mx ** 2 / sx ** 2 + b * mx * my / (sx * sy)
          + c * my ** 2 / sy ** 2 - d * mx / sx - e * my / sy + f)
    out = np.array([ao, bo, co, do, eo, fo]) * (sx * sy)
    return out


def fit_ellipse(points: np.ndarray) -> EllipseFit:
    """Fit an ellipse (or classify a degenerate line) to (x, y) points.

    Points are mean-centered and variance-normalized per axis before the
    conic solve to condition the eigenproblem; delta is scale-invariant,
    so the normalization does not bias it.  If the minor principal axis
    of the normalized scatter carries less than 1e-9 of the major-axis
    variance the data are a line and the conic solve is skipped: the
    slope sign distinguishes the fully correlated (delta = 0) and fully
    anti-correlated (delta = pi) cases.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise AnalysisError("points must be an (n, 2) array")
    if pts.shape[0] < 6:
        raise AnalysisError(
            f"need at least 6 points for a conic fit, got {pts.shape[0]}")
    x = pts[:, 0]
    y = pts[:, 1]
    mx, my = float(np.mean(x)), float(np.mean(y))
    sx, sy = float(np.std(x)), float(np.std(y))
    scale = max(abs(mx), abs(my), sx, sy)
    if sx <= 1e-15 * max(1.0, scale) and sy <= 1e-15 * max(1.0, scale):
        raise DegenerateDataError("all points coincide")
    if sx <= 1e-15 * max(1.0, scale) or sy <= 1e-15 * max(1.0, scale):
        raise DegenerateDataError(
            "points fall on an axis-parallel line; the Lissajous phase "
            "is undefined")

    xn = (x - mx) / sx
    yn = (y - my) / sy
    cov = np.cov(np.stack([xn, yn]), bias=True)
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals[0] < 1e-9 * eigvals[1]:
        major = eigvecs[:, 1]
        slope_sign = major[0] * major[1]
        if slope_sign == 0.0:
            raise DegenerateDataError(
                "degenerate scatter with axis-parallel principal axis")
        positive = slope_sign > 0.0
        return EllipseFit(
            conic=None,
            center=(mx, my),
            delta=0.0 if positive else math.pi,
            degeneracy="line_positive" if positive else "line_negative",
            rms_residual=float(math.sqrt(max(eigvals[0], 0.0))),
            sign_ambiguous=False,
        )

    conic_n = _conic_fit_normalized(xn, yn)
    delta = delta_from_conic(conic_n)
    residual = (conic_n[0] * xn ** 2 + conic_n[1] * xn * yn
                + conic_n[2] * yn ** 2 + conic_n[3] * xn
                + conic_n[4] * yn + conic_n[5])
    conic_o = _denormalize_conic(conic_n, mx, my, sx, sy)
    # With 4AC - B^2 = 1 the center formulas lose their denominator.
    ao, bo, co, do, eo, _ = conic_o
    cx = bo * eo - 2.0 * co * do
    cy = bo * do - 2.0 * ao * eo
    return EllipseFit(
        conic=tuple(float(v) for v in conic_o),
        center=(float(cx), float(cy)),
        delta=float(delta),
        degeneracy=None,
        rms_residual=float(np.sqrt(np.mean(residual ** 2))),
        sign_ambiguous=True,
    )


def pearson_correlation(x: np.ndarray, y: np.ndarray) -> float:
    """Product-moment correlation of two equal-length samples."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise AnalysisError("x and y must be equal-length vectors")
    if xv.size < 2:
        raise AnalysisError(f"need at least 2 samples, got {xv.size}")
    dx = xv - np.mean(xv)
    dy = yv - np.mean(yv)
    vx = float(np.dot(dx, dx))
    vy = float(np.dot(dy, dy))
    if vx == 0.0 or vy == 0.0:
        raise DegenerateDataError(
            "correlation is undefined for zero-variance input")
    return float(np.dot(dx, dy) / math.sqrt(vx * vy))

"""Command-line interface: simulate, sweep, and fit from JSON configs.

Subcommands mirror the package's outputs: ``matrix`` (transfer-matrix
elements and diagnostics), ``evolve`` (effective-Hamiltonian propagation),
``fringe`` (interference fringes), ``phase-diagram`` (random-phase scatter
plus ellipse fit), ``sweep`` (phase difference versus detuning, optical
depth, or zeta), and ``fit`` (ellipse fit of an external CSV).

Configuration is a flat JSON object; any key can be overridden on the
command line as ``--key=value``.  Unknown keys are rejected by name.  All
file output is deterministic for a fixed config and seed: CSVs carry one
'#' metadata line with the tool version and the full resolved config, no
timestamps, and fixed-precision decimal formatting.

Exit codes: 0 success, 1 domain or validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import __version__, analysis, cascade, svgplot
from .core import (DimensionlessCoupling, GainRegimeWarning, MpbsParams,
                   ParameterError, TransferMatrix, build_transfer_matrix,
                   derive_dimensionless, diagnostics, fold_angle)
from .hamiltonian import NormGrowthWarning, ValidityWarning, build_heff, propagator
from .interferometer import (ModeAmplitudes, default_protocol, run_protocol,
                             sample_phase_diagram)

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Configuration input is malformed or violates a field constraint."""


@dataclass
class RunConfig:
    """Resolved run configuration; frequencies are in Hz (cycles/s).

    zeta and eta, when set, override the values derived from the physical
    fields; they exist so dimensionless operating points can be dialed in
    directly.
    """

    delta_hz: float = 0.0
    kappa13_hz: float = 3.0e6
    rabi_c_hz: float = 4.37e6
    g_root_n_hz: float = 4.37e6
    tau_p_s: float = 5.0e-8
    od: float = 40.0
    eta_per_od: float = 0.05
    zeta: float | None = None
    eta: float | None = None
    probe_amplitude: float = 1.0
    balance_mode: bool = False
    theta_samples: int = 64
    count: int = 500
    seed: int = 0
    noise_sigma: float = 0.0
    slices: int | None = None
    slices_per_unit_od: float = 0.5
    evolve_tau_s: float | None = None
    initial_s: float = 0.0
    initial_a: float = 1.0
    output_path: str = "."
    formats: tuple[str, ...] = ("csv",)
    precision: int = 12


_FLOAT_FIELDS = {
    "delta_hz", "kappa13_hz", "rabi_c_hz", "g_root_n_hz", "tau_p_s", "od",
    "eta_per_od", "zeta", "eta", "probe_amplitude", "noise_sigma",
    "slices_per_unit_od", "evolve_tau_s", "initial_s", "initial_a",
}
_INT_FIELDS = {"theta_samples", "count", "seed", "slices", "precision"}
_OPTIONAL_FIELDS = {"zeta", "eta", "slices", "evolve_tau_s"}


def _coerce(key: str, value: object) -> object:
    if value is None and key in _OPTIONAL_FIELDS:
        return None
    if key in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        return float(value)
    if key in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        if float(value) != int(value):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return int(value)
    if key == "balance_mode":
        if not isinstance(value, bool):
            raise ConfigError(
                f"balance_mode must be true or false, got {value!r}")
        return value
    if key == "output_path":
        if not isinstance(value, str):
            raise ConfigError(f"output_path must be a string, got {value!r}")
        return value
    if key == "formats":
        if isinstance(value, str):
            value = [part for part in value.split(",") if part]
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError(
                f"formats must be a non-empty list from {{csv, svg}}, "
                f"got {value!r}")
        for fmt in value:
            if fmt not in ("csv", "svg"):
                raise ConfigError(
                    f"formats entries must be 'csv' or 'svg', got {fmt!r}")
        return tuple(value)
    raise ConfigError(f"unknown config key: {key}")


def _validate(cfg: RunConfig) -> None:
    checks = [
        (cfg.kappa13_hz > 0, "kappa13_hz must be > 0"),
        (cfg.rabi_c_hz >= 0, "rabi_c_hz must be >= 0"),
        (cfg.g_root_n_hz >= 0, "g_root_n_hz must be >= 0"),
        (cfg.tau_p_s > 0, "tau_p_s must be > 0"),
        (cfg.od >= 0, "od must be >= 0"),
        (cfg.eta_per_od > 0, "eta_per_od must be > 0"),
        (cfg.zeta is None or cfg.zeta >= 0, "zeta must be >= 0"),
        (cfg.eta is None or cfg.eta >= 0, "eta must be >= 0"),
        (cfg.noise_sigma >= 0, "noise_sigma must be >= 0"),
        (cfg.theta_samples >= 3, "theta_samples must be >= 3"),
        (cfg.count >= 1, "count must be >= 1"),
        (cfg.seed >= 0, "seed must be >= 0"),
        (cfg.slices is None or cfg.slices >= 1, "slices must be >= 1"),
        (cfg.slices_per_unit_od > 0, "slices_per_unit_od must be > 0"),
        (cfg.evolve_tau_s is None or cfg.evolve_tau_s >= 0,
         "evolve_tau_s must be >= 0"),
        (3 <= cfg.precision <= 17, "precision must be in [3, 17]"),
    ]
    for ok, message in checks:
        if not ok:
            raise ConfigError(message)


def parse_config(path: str | None,
                 overrides: dict[str, str] | None = None) -> RunConfig:
    """Load defaults, then the JSON file, then --key=value overrides."""
    merged: dict[str, object] = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
        try:
            data = json.loads(text) if text.strip() else {}
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config {path} is not valid JSON: {exc.msg} at line "
                f"{exc.lineno}, column {exc.colno}") from None
        if not isinstance(data, dict):
            raise ConfigError(
                f"config {path} must contain a JSON object at top level")
        merged.update(data)
    for key, raw in (overrides or {}).items():
        try:
            merged[key] = json.loads(raw)
        except json.JSONDecodeError:
            merged[key] = raw
    valid_keys = {f.name for f in dataclasses.fields(RunConfig)}
    cfg = RunConfig()
    for key, value in merged.items():
        if key not in valid_keys:
            raise ConfigError(f"unknown config key: {key}")
        setattr(cfg, key, _coerce(key, value))
    _validate(cfg)
    return cfg


def _params(cfg: RunConfig, delta_hz: float | None = None,
            od: float | None = None) -> MpbsParams:
    return MpbsParams(
        delta=TWO_PI * (cfg.delta_hz if delta_hz is None else delta_hz),
        kappa13=TWO_PI * cfg.kappa13_hz,
        rabi_c=TWO_PI * cfg.rabi_c_hz,
        g_root_n=TWO_PI * cfg.g_root_n_hz,
        tau_p=cfg.tau_p_s,
        od=cfg.od if od is None else od,
        eta_per_od=cfg.eta_per_od,
    )


def _coupling(cfg: RunConfig, delta_hz: float | None = None,
              od: float | None = None,
              zeta: float | None = None) -> DimensionlessCoupling:
    derived = derive_dimensionless(_params(cfg, delta_hz=delta_hz, od=od))
    use_zeta = zeta if zeta is not None else (
        cfg.zeta if cfg.zeta is not None else derived.zeta)
    use_eta = cfg.eta if cfg.eta is not None and od is None else derived.eta
    return DimensionlessCoupling(zeta=use_zeta, eta=use_eta,
                                 delta_ratio=derived.delta_ratio)


class OutputSink:
    """Collects output files in memory, then writes them atomically-ish:
    if any write fails, files already written by this run are removed."""

    def __init__(self, directory: str) -> None:
        self.directory = directory
        self.pending: list[tuple[str, str]] = []

    def add(self, name: str, text: str) -> None:
        self.pending.append((name, text))

    def commit(self) -> list[str]:
        if not self.pending:
            return []
        os.makedirs(self.directory, exist_ok=True)
        written: list[str] = []
        try:
            for name, text in self.pending:
                target = os.path.join(self.directory, name)
                with open(target, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
                written.append(target)
        except OSError:
            for path in written:
                try:
                    os.unlink(path)
                except OSError:
                    pass
            target_partial = os.path.join(self.directory, self.pending[len(written)][0])
            try:
                os.unlink(target_partial)
            except OSError:
                pass
            raise
        return written


def _metadata_line(cfg: RunConfig) -> str:
    payload = dataclasses.asdict(cfg)
    payload["formats"] = list(payload["formats"])
    return (f"# mpbs {__version__} "
            + json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _fmt(value: float, precision: int) -> str:
    return format(float(value) + 0.0, f".{precision}g")


def _csv(cfg: RunConfig, header: str, rows: list[list[str]]) -> str:
    lines = [_metadata_line(cfg), header]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _theta_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(0.0, TWO_PI, cfg.theta_samples, endpoint=False)


def _fit_pair(fringes) -> tuple[analysis.SinusoidFit, analysis.SinusoidFit]:
    fit_s = analysis.fit_sinusoid(fringes.thetas, fringes.n_s)
    fit_a = analysis.fit_sinusoid(fringes.thetas, fringes.n_a)
    return fit_s, fit_a


def _matrix_csv(cfg: RunConfig, m: TransferMatrix) -> str:
    p = cfg.precision
    row = [_fmt(m.t.real, p), _fmt(m.t.imag, p),
           _fmt(m.r.real, p), _fmt(m.r.imag, p),
           _fmt(m.r_prime.real, p), _fmt(m.r_prime.imag, p),
           _fmt(m.t_prime.real, p), _fmt(m.t_prime.imag, p)]
    return _csv(cfg, "re_t,im_t,re_r,im_r,re_rp,im_rp,re_tp,im_tp", [row])


def cmd_matrix(cfg: RunConfig, sink: OutputSink) -> dict:
    coupling = _coupling(cfg)
    matrix = build_transfer_matrix(coupling)
    diag = diagnostics(matrix)
    if "csv" in cfg.formats:
        sink.add("matrix.csv", _matrix_csv(cfg, matrix))
    return {
        "command": "matrix",
        "zeta": coupling.zeta,
        "eta": coupling.eta,
        "delta_ratio": coupling.delta_ratio,
        "t_re": matrix.t.real, "t_im": matrix.t.imag,
        "r_re": matrix.r.real, "r_im": matrix.r.imag,
        "rp_re": matrix.r_prime.real, "rp_im": matrix.r_prime.imag,
        "tp_re": matrix.t_prime.real, "tp_im": matrix.t_prime.imag,
        "delta_psi_rad": diag.fringe_phase_difference,
        "two_phi_rad": fold_angle(diag.fringe_phase_difference),
        "reflection_phase_rad": diag.reflection_phase,
        "unitarity_deviation": diag.unitarity_deviation,
        "spectral_norm": diag.spectral_norm,
        "gain": diag.gain,
        "degenerate": diag.degenerate,
    }


def cmd_evolve(cfg: RunConfig) -> dict:
    params = _params(cfg)
    tau = cfg.evolve_tau_s if cfg.evolve_tau_s is not None else cfg.tau_p_s
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        heff = build_heff(params)
        u = propagator(heff, tau)
    state = np.array([cfg.initial_a, cfg.initial_s], dtype=complex)
    out = u @ state
    norm_in = float(np.linalg.norm(state))
    norm_out = float(np.linalg.norm(out))
    gram_dev = float(np.linalg.norm(u.conj().T @ u - np.eye(2)))
    validity = any(issubclass(w.category, ValidityWarning) for w in caught)
    return {
        "command": "evolve",
        "tau_s": tau,
        "final_a_re": out[0].real, "final_a_im": out[0].imag,
        "final_s_re": out[1].real, "final_s_im": out[1].imag,
        "n_a": abs(out[0]) ** 2,
        "n_s": abs(out[1]) ** 2,
        "norm_ratio": norm_out / norm_in if norm_in > 0 else None,
        "norm_grew": norm_in > 0 and norm_out > norm_in * (1 + 1e-9),
        "unitarity_deviation": gram_dev,
        "validity_warning": validity,
    }


def _fringe_svg(fringes, fit_s, fit_a) -> str:
    dense = np.linspace(0.0, TWO_PI, 256)
    groups = [
        svgplot.PlotGroup(fringes.thetas, fringes.n_s, "n_s", kind="dots"),
        svgplot.PlotGroup(fringes.thetas, fringes.n_a, "n_a", kind="dots"),
    ]
    for fit, label in ((fit_s, "n_s fit"), (fit_a, "n_a fit")):
        if fit is not None:
            model = fit.offset + fit.amplitude * np.cos(dense + fit.phase)
            groups.append(svgplot.PlotGroup(dense, model, label,
                                            kind="line", dashed=True))
    return svgplot.render_plot(groups, "theta (rad)", "intensity",
                               "interference fringes")


def cmd_fringe(cfg: RunConfig, sink: OutputSink) -> dict:
    coupling = _coupling(cfg)
    protocol = default_protocol(coupling, cfg.probe_amplitude,
                                cfg.balance_mode)
    result = run_protocol(protocol, _theta_grid(cfg))
    fringes = result.fringes
    fit_s = fit_a = None
    delta_psi = None
    degenerate = False
    try:
        fit_s, fit_a = _fit_pair(fringes)
        delta_psi = analysis.fringe_phase_difference(fit_s, fit_a)
    except analysis.AnalysisError:
        degenerate = True
    try:
        pearson = analysis.pearson_correlation(fringes.n_s, fringes.n_a)
    except analysis.AnalysisError:
        pearson = None
    if "csv" in cfg.formats:
        p = cfg.precision
        rows = [[_fmt(th, p), _fmt(ns, p), _fmt(na, p)]
                for th, ns, na in zip(fringes.thetas, fringes.n_s,
                                      fringes.n_a)]
        sink.add("fringe.csv", _csv(cfg, "theta_rad,n_s,n_a", rows))
    if "svg" in cfg.formats:
        sink.add("fringe.svg", _fringe_svg(fringes, fit_s, fit_a))
    return {
        "command": "fringe",
        "delta_psi_rad": delta_psi,
        "two_phi_rad": fold_angle(delta_psi) if delta_psi is not None else None,
        "degenerate": degenerate,
        "visibility_s": fringes.visibility_s,
        "visibility_a": fringes.visibility_a,
        "pearson": pearson,
        "prepared_magnon_intensity": result.prepared.n_s,
        "leakage_intensity": result.prepared.n_a,
        "probe_used": abs(result.probe_used),
        "readout_efficiency": result.readout_efficiency,
        "retrieved_intensity": result.retrieved_intensity,
    }


def _ellipse_trace(fit: analysis.EllipseFit,
                   samples: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    # Parametric trace of the fitted conic for the overlay; degenerate
    # fits draw the principal line through the scatter instead.
    if fit.degeneracy is not None:
        x = samples[:, 0]
        span = np.array([np.min(x), np.max(x)])
        sx = np.std(x)
        sy = np.std(samples[:, 1])
        slope = (sy / sx) if sx > 0 else 0.0
        if fit.degeneracy == "line_negative":
            slope = -slope
        cx, cy = fit.center
        return span, cy + slope * (span - cx)
    a, b, c, *_ = fit.conic
    quad = np.array([[a, b / 2.0], [b / 2.0, c]])
    eigvals, eigvecs = np.linalg.eigh(quad)
    if np.any(eigvals <= 0):
        return None
    cx, cy = fit.center
    const = (a * cx * cx + b * cx * cy + c * cy * cy
             + fit.conic[3] * cx + fit.conic[4] * cy + fit.conic[5])
    if const >= 0:
        return None
    radii = np.sqrt(-const / eigvals)
    angle = np.linspace(0.0, TWO_PI, 181)
    local = np.stack([radii[0] * np.cos(angle), radii[1] * np.sin(angle)])
    world = eigvecs @ local
    return world[0] + cx, world[1] + cy


def _scatter_svg(samples: np.ndarray, fit: analysis.EllipseFit | None,
                 title: str) -> str:
    groups = [svgplot.PlotGroup(samples[:, 0], samples[:, 1], "samples",
                                kind="dots")]
    if fit is not None:
        trace = _ellipse_trace(fit, samples)
        if trace is not None:
            groups.append(svgplot.PlotGroup(trace[0], trace[1], "fit",
                                            kind="line"))
    return svgplot.render_plot(groups, "n_s", "n_a", title)


def _ellipse_summary(fit: analysis.EllipseFit | None,
                     error: str | None) -> dict:
    if fit is None:
        return {"delta_rad": None, "degeneracy": "error",
                "fit_error": error}
    return {
        "delta_rad": fit.delta,
        "degeneracy": fit.degeneracy,
        "center_x": fit.center[0],
        "center_y": fit.center[1],
        "rms_residual": fit.rms_residual,
        "sign_ambiguous": fit.sign_ambiguous,
    }


def cmd_phase_diagram(cfg: RunConfig, sink: OutputSink) -> dict:
    coupling = _coupling(cfg)
    protocol = default_protocol(coupling, cfg.probe_amplitude,
                                cfg.balance_mode)
    result = run_protocol(protocol, _theta_grid(cfg))
    samples = sample_phase_diagram(protocol.bs_matrix, result.prepared.s,
                                   result.probe_used, cfg.count, cfg.seed,
                                   cfg.noise_sigma)
    fit = None
    error = None
    try:
        fit = analysis.fit_ellipse(samples)
    except analysis.AnalysisError as exc:
        error = str(exc)
    try:
        pearson = analysis.pearson_correlation(samples[:, 0], samples[:, 1])
    except analysis.AnalysisError:
        pearson = None
    if "csv" in cfg.formats:
        p = cfg.precision
        rows = [[str(i), _fmt(ns, p), _fmt(na, p)]
                for i, (ns, na) in enumerate(samples)]
        sink.add("phase_diagram.csv", _csv(cfg, "index,n_s,n_a", rows))
    if "svg" in cfg.formats:
        sink.add("phase_diagram.svg",
                 _scatter_svg(samples, fit, "phase diagram"))
    summary = {"command": "phase-diagram", "count": cfg.count,
               "pearson": pearson}
    summary.update(_ellipse_summary(fit, error))
    return summary


_SWEEP_RANGES = {
    "delta": (0.0, 60.0e6),
    "od": (10.0, 40.0),
    "zeta": (0.1, 5.0),
}


def _single_mode_row(cfg: RunConfig,
                     coupling: DimensionlessCoupling) -> tuple[float, dict]:
    matrix = build_transfer_matrix(coupling)
    protocol = default_protocol(coupling, cfg.probe_amplitude,
                                cfg.balance_mode)
    result = run_protocol(protocol, _theta_grid(cfg))
    fringes = result.fringes
    try:
        fit_s, fit_a = _fit_pair(fringes)
        two_phi = fold_angle(analysis.fringe_phase_difference(fit_s, fit_a))
    except analysis.AnalysisError:
        two_phi = 0.0
    try:
        pearson = analysis.pearson_correlation(fringes.n_s, fringes.n_a)
    except analysis.AnalysisError:
        pearson = 0.0
    diag = diagnostics(matrix)
    return two_phi, {
        "two_phi": two_phi,
        "visibility_s": fringes.visibility_s,
        "visibility_a": fringes.visibility_a,
        "pearson": pearson,
        "unitarity_deviation": diag.unitarity_deviation,
    }


def _cascade_row(cfg: RunConfig, od: float) -> tuple[float, dict]:
    coupling = _coupling(cfg, od=od)
    slices = cfg.slices if cfg.slices is not None else max(
        1, round(cfg.slices_per_unit_od * od))
    model = cascade.build_cascade(coupling, slices)
    magnons, _ = cascade.prepare_magnon_profile(model, cfg.probe_amplitude)
    fringes = cascade.cascade_fringe_scan(model, magnons,
                                          cfg.probe_amplitude,
                                          _theta_grid(cfg))
    try:
        fit_s, fit_a = _fit_pair(fringes)
        two_phi = fold_angle(analysis.fringe_phase_difference(fit_s, fit_a))
    except analysis.AnalysisError:
        two_phi = 0.0
    try:
        pearson = analysis.pearson_correlation(fringes.n_s, fringes.n_a)
    except analysis.AnalysisError:
        pearson = 0.0
    gram = model.total.conj().T @ model.total
    deviation = float(np.linalg.norm(gram - np.eye(model.slices + 1)))
    return two_phi, {
        "two_phi": two_phi,
        "visibility_s": fringes.visibility_s,
        "visibility_a": fringes.visibility_a,
        "pearson": pearson,
        "unitarity_deviation": deviation,
    }


def cmd_sweep(cfg: RunConfig, sink: OutputSink, axis: str,
              points: int) -> dict:
    if axis not in _SWEEP_RANGES:
        raise ConfigError(f"axis must be one of delta, od, zeta; got {axis}")
    if points < 2:
        raise ConfigError(f"points must be >= 2, got {points}")
    lo, hi = _SWEEP_RANGES[axis]
    values = np.linspace(lo, hi, points)
    rows = []
    two_phis = []
    for value in values:
        if axis == "delta":
            two_phi, stats = _single_mode_row(
                cfg, _coupling(cfg, delta_hz=float(value)))
        elif axis == "zeta":
            two_phi, stats = _single_mode_row(
                cfg, _coupling(cfg, zeta=float(value)))
        else:
            two_phi, stats = _cascade_row(cfg, float(value))
        two_phis.append(two_phi)
        p = cfg.precision
        rows.append([
            _fmt(value, p), _fmt(stats["two_phi"], p),
            _fmt(stats["visibility_s"], p), _fmt(stats["visibility_a"], p),
            _fmt(stats["pearson"], p), _fmt(stats["unitarity_deviation"], p),
        ])
    if "csv" in cfg.formats:
        sink.add("sweep.csv", _csv(
            cfg,
            "axis_value,two_phi_rad,visibility_s,visibility_a,pearson,"
            "unitarity_deviation", rows))
    if "svg" in cfg.formats:
        label = {"delta": "detuning (Hz)", "od": "optical depth",
                 "zeta": "zeta"}[axis]
        sink.add("sweep.svg", svgplot.render_plot(
            [svgplot.PlotGroup(values, np.array(two_phis), "two_phi")],
            label, "two_phi (rad)", f"phase difference vs {axis}"))
    return {
        "command": "sweep",
        "axis": axis,
        "points": points,
        "axis_first": float(values[0]),
        "axis_last": float(values[-1]),
        "two_phi_first": two_phis[0],
        "two_phi_last": two_phis[-1],
    }


def _read_points_csv(path: str) -> np.ndarray:
    rows: list[tuple[float, ...]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            try:
                numbers = tuple(float(f) for f in fields)
            except ValueError:
                continue  # header line
            rows.append(numbers)
    if not rows:
        raise analysis.AnalysisError(f"no numeric data rows in {path}")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise analysis.AnalysisError(f"ragged rows in {path}")
    data = np.array(rows, dtype=float)
    if width >= 3:
        # phase_diagram schema: index, n_s, n_a.
        return data[:, 1:3]
    if width == 2:
        return data
    raise analysis.AnalysisError(
        f"{path} must have 2 columns (x, y) or 3 (index, x, y)")


def cmd_fit(cfg: RunConfig, sink: OutputSink, input_path: str | None) -> dict:
    if input_path is None:
        raise ConfigError("fit requires --input pointing at a CSV file")
    samples = _read_points_csv(input_path)
    fit = analysis.fit_ellipse(samples)
    try:
        pearson = analysis.pearson_correlation(samples[:, 0], samples[:, 1])
    except analysis.AnalysisError:
        pearson = None
    if "svg" in cfg.formats:
        sink.add("fit.svg", _scatter_svg(samples, fit, "ellipse fit"))
    summary = {"command": "fit", "count": int(samples.shape[0]),
               "pearson": pearson}
    summary.update(_ellipse_summary(fit, None))
    return summary


class _Parser(argparse.ArgumentParser):
    # argparse exits the process on errors; surface them as ConfigError so
    # main() can map every validation problem to exit code 1.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="mpbs",
        description="Magnon-photon beam splitter simulator and analyzer.",
        epilog=(
            "Any config key can be overridden as --key=value.  Defaults: "
            "kappa13_hz=3e6, rabi_c_hz=4.37e6 (zeta close to 2), "
            "g_root_n_hz=4.37e6, tau_p_s=5e-8, od=40, eta_per_od=0.05, "
            "delta_hz=0, seed=0, theta_samples=64, count=500."))
    parser.add_argument("command", choices=[
        "matrix", "evolve", "fringe", "phase-diagram", "sweep", "fit"])
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--output", help="output directory (default '.')")
    parser.add_argument("--format", dest="format_",
                        help="comma list from {csv, svg}")
    parser.add_argument("--seed", type=int, help="random seed override")
    parser.add_argument("--axis", choices=["delta", "od", "zeta"],
                        default="delta", help="sweep axis")
    parser.add_argument("--points", type=int, default=25,
                        help="sweep grid size")
    parser.add_argument("--input", help="input CSV for the fit command")
    return parser


def execute(command: str, cfg: RunConfig, axis: str = "delta",
            points: int = 25, input_path: str | None = None) -> int:
    """Run one subcommand; print its one-line JSON summary on stdout."""
    sink = OutputSink(cfg.output_path)
    if command == "matrix":
        summary = cmd_matrix(cfg, sink)
    elif command == "evolve":
        summary = cmd_evolve(cfg)
    elif command == "fringe":
        summary = cmd_fringe(cfg, sink)
    elif command == "phase-diagram":
        summary = cmd_phase_diagram(cfg, sink)
    elif command == "sweep":
        summary = cmd_sweep(cfg, sink, axis, points)
    elif command == "fit":
        summary = cmd_fit(cfg, sink, input_path)
    else:
        raise ConfigError(f"unknown command: {command}")
    written = sink.commit()
    summary["outputs"] = written
    print(json.dumps(summary, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    args_in = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        known, extra = parser.parse_known_args(args_in)
        overrides: dict[str, str] = {}
        for token in extra:
            if token.startswith("--") and "=" in token:
                key, _, value = token[2:].partition("=")
                overrides[key] = value
            else:
                raise ConfigError(
                    f"unrecognized argument: {token} (config overrides use "
                    "--key=value)")
        cfg = parse_config(known.config, overrides)
        if known.output is not None:
            cfg.output_path = known.output
        if known.format_ is not None:
            cfg.formats = _coerce("formats", known.format_)
        if known.seed is not None:
            cfg.seed = known.seed
        _validate(cfg)
        with warnings.catch_warnings():
            # Model-regime warnings are reported through summary fields
            # and flags; keep stdout to the single JSON line.
            warnings.simplefilter("ignore", NormGrowthWarning)
            warnings.simplefilter("ignore", ValidityWarning)
            warnings.simplefilter("ignore", GainRegimeWarning)
            return execute(known.command, cfg, axis=known.axis,
                           points=known.points, input_path=known.input)
    except (ConfigError, ParameterError, analysis.AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

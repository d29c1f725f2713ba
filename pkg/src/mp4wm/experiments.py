"""Model-level reproductions of the experiments and the inverse analysis.

Three scans are provided: two-photon detuning, density (pseudo propagation
distance) and pump Rabi frequency.  Each scan point runs the full pulse
pipeline and is summarized in a :class:`ScanRecord`; a failing point is
recorded with absent fields instead of aborting the scan.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from scipy.constants import c as C_LIGHT

from .coupling import analytic_delays, peak_gain_formula, renormalized_length
from .errors import GuardError
from .params import MediumParams, derive_coefficients
from .pulses import (
    PropagationResult,
    PulseMetrics,
    TimeGrid,
    make_gaussian_pulse,
    propagate_pulse,
    pulse_metrics,
)

THREADS_ENV = "MP4WM_THREADS"

_ZERO_CONJUGATE_ENERGY = 1e-30  # relative to reference energy


@dataclass(frozen=True)
class PulseConfig:
    """Input pulse and solver settings shared by all experiment runs."""

    fwhm: float = 70e-9
    window: float = 2e-6
    n_samples: int = 4096
    center: float = 0.0
    propagation_mode: str = "relative"
    dispersion_mode: str = "constant"

    def make_grid(self) -> TimeGrid:
        return TimeGrid.centered(self.window, self.n_samples, self.center)


@dataclass(frozen=True)
class SingleRunResult:
    traces: PropagationResult
    probe_metrics: PulseMetrics
    conjugate_metrics: PulseMetrics | None  # None when no conjugate is generated


@dataclass(frozen=True)
class ScanRecord:
    """One row of a scan output; absent fields are None."""

    var: float
    gain_peak: float | None = None
    gain_energy: float | None = None
    probe_delay: float | None = None
    conj_delay: float | None = None
    differential_delay: float | None = None
    probe_broadening: float | None = None
    conj_broadening: float | None = None
    renorm_length: float | None = None
    inferred_eta: float | None = None
    inferred_xi: float | None = None
    predicted_gain: float | None = None
    approx_valid: bool = True  # dtilde << 2 Delta_R flag, not serialized


def run_single(p: MediumParams, pulse_cfg: PulseConfig) -> SingleRunResult:
    """Propagate one Gaussian probe pulse and measure it like the experiment."""
    grid = pulse_cfg.make_grid()
    pulse = make_gaussian_pulse(grid, pulse_cfg.fwhm, pulse_cfg.center)
    traces = propagate_pulse(
        p, pulse, pulse_cfg.propagation_mode, pulse_cfg.dispersion_mode
    )
    conj_energy = traces.conjugate.energy
    if conj_energy <= _ZERO_CONJUGATE_ENERGY * traces.reference.energy:
        probe_m, conj_m = pulse_metrics(traces.reference, traces.probe, traces.probe)[0], None
    else:
        probe_m, conj_m = pulse_metrics(
            traces.reference, traces.probe, traces.conjugate
        )
    return SingleRunResult(
        traces=traces, probe_metrics=probe_m, conjugate_metrics=conj_m
    )


def infer_eta_xi(
    conj_delay: float, differential_delay: float, z: float, gamma_c: float
) -> tuple[float, float]:
    """Invert the delay formulas: eta from tau, xi from the locked dtau.

    Valid in the large-gain, small-gamma_c limit where the conjugate
    delay equals eta z / 2c and the differential delay has locked to
    eta / (2 xi - eta gamma_c).
    """
    if conj_delay <= 0 or differential_delay <= 0:
        raise GuardError("delays must be > 0 to invert")
    if z <= 0:
        raise GuardError("z must be > 0 to invert")
    eta = 2.0 * C_LIGHT * conj_delay / z
    xi = 0.5 * eta * (1.0 / differential_delay + gamma_c)
    return eta, xi


@dataclass(frozen=True)
class GainPrediction:
    gain: float
    loss_ratio: float  # eta gamma_c / 2 xi, linear loss over peak linear gain


def predict_gain(eta: float, xi: float, gamma_c: float, z: float) -> GainPrediction:
    """Line-center probe gain predicted from inferred eta and xi."""
    if eta <= 0 or xi <= 0 or z < 0 or gamma_c < 0:
        raise GuardError("predict_gain needs eta, xi > 0 and z, gamma_c >= 0")
    loss_ratio = 0.5 * eta * gamma_c / xi
    if loss_ratio >= 1.0:
        raise GuardError("loss exceeds gain: 2 xi <= eta gamma_c")
    return GainPrediction(
        gain=peak_gain_formula(eta, xi, gamma_c, z), loss_ratio=loss_ratio
    )


def _record_for(p: MediumParams, var: float, pulse_cfg: PulseConfig) -> ScanRecord:
    d = derive_coefficients(p)
    approx_valid = abs(d.delta_tilde) <= 2.0 * d.delta_r
    try:
        res = run_single(p, pulse_cfg)
    except GuardError:
        return ScanRecord(var=var, approx_valid=approx_valid)

    pm = res.probe_metrics
    cm = res.conjugate_metrics
    rec = ScanRecord(
        var=var,
        gain_peak=pm.gain_peak,
        gain_energy=pm.gain_energy,
        probe_delay=pm.delay_vs_reference,
        probe_broadening=pm.broadening_fraction,
        conj_delay=cm.delay_vs_reference if cm else None,
        conj_broadening=cm.broadening_fraction if cm else None,
        approx_valid=approx_valid,
    )
    if pm.gain_peak >= 1.0:
        rec = replace(rec, renorm_length=renormalized_length(pm.gain_peak))
    if cm is not None:
        dtau = pm.delay_vs_reference - cm.delay_vs_reference
        rec = replace(rec, differential_delay=dtau)
        if cm.delay_vs_reference > 0 and dtau > 0 and p.cell_length > 0:
            try:
                eta_i, xi_i = infer_eta_xi(
                    cm.delay_vs_reference, dtau, p.cell_length, p.gamma_c
                )
                rec = replace(
                    rec,
                    inferred_eta=eta_i,
                    inferred_xi=xi_i,
                    predicted_gain=predict_gain(
                        eta_i, xi_i, p.gamma_c, p.cell_length
                    ).gain,
                )
            except GuardError:
                pass
    return rec


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        n = int(raw)
    except ValueError:
        raise GuardError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 0:
        raise GuardError(f"{THREADS_ENV} must be >= 0")
    if n == 0:
        n = min(8, os.cpu_count() or 1)
    return n


def _scan(points, pulse_cfg: PulseConfig) -> list[ScanRecord]:
    """Run (params, var) points; output order follows input order."""
    points = list(points)
    workers = _worker_count()
    if workers <= 1 or len(points) <= 1:
        return [_record_for(p, var, pulse_cfg) for p, var in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(lambda pv: _record_for(pv[0], pv[1], pulse_cfg), points)
        )


def scan_delta(p: MediumParams, deltas, pulse_cfg: PulseConfig) -> list[ScanRecord]:
    """Two-photon detuning scan; `deltas` in rad/s, recorded var in rad/s."""
    points = [(p.replace(delta_two_photon=float(dv)), float(dv)) for dv in deltas]
    records = _scan(points, pulse_cfg)
    if any(not r.approx_valid for r in records):
        warnings.warn(
            "some scan points have |dtilde| > 2 Delta_R where the line-center "
            "approximation breaks down",
            stacklevel=2,
        )
    return records


def scan_density(p: MediumParams, scales, pulse_cfg: PulseConfig) -> list[ScanRecord]:
    """Density scan: each point multiplies g^2 N by the scale factor."""
    points = [(p.scaled_density(float(s)), float(s)) for s in scales]
    return _scan(points, pulse_cfg)


def scan_pump(
    p: MediumParams,
    rabis,
    pulse_cfg: PulseConfig,
    delta_policy: str = "track",
) -> list[ScanRecord]:
    """Pump scan over Rabi frequencies (rad/s).

    With `delta_policy="track"` the two-photon detuning follows the
    moving light shift (dtilde pinned to 0); with `"fixed"` it stays at
    the configured value.
    """
    if delta_policy not in ("track", "fixed"):
        raise GuardError(f"unknown delta policy {delta_policy!r}")
    points = []
    for rv in rabis:
        rv = float(rv)
        q = p.replace(omega_rabi=rv)
        if delta_policy == "track":
            q = q.replace(delta_two_photon=derive_coefficients(q).light_shift)
        points.append((q, rv))
    return _scan(points, pulse_cfg)

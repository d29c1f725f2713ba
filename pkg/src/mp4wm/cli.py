"""Command-line surface: run, scan-delta, scan-density, scan-pump, derive.

Exit codes: 0 success, 2 config error, 3 numerical/guard error.
All CSV output uses 9 significant digits, '.' decimals and '\\n' endings,
so repeated runs with the same config are byte-identical.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .config import MHZ, Config, parse_config
from .coupling import analytic_delays
from .errors import ConfigError, GuardError, Mp4wmError
from .experiments import run_single, scan_delta, scan_density, scan_pump
from .params import derive_coefficients

TRACE_HEADER = "t_ns,ref,probe,conj"
SCAN_HEADER = (
    "var,gain_peak,gain_energy,probe_delay_ns,conj_delay_ns,dtau_ns,"
    "probe_broad,conj_broad,L,eta_inf,xi_inf_per_s,gain_pred"
)


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.9g}"


def _round9(x: float) -> float:
    """Round to 9 significant digits so JSON output round-trips exactly."""
    return float(f"{x:.9g}")


def _load_config(path: str) -> Config:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}")
    return parse_config(text)


def _write(path: str, content: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(content)


def _metrics_dict(m) -> dict:
    return {
        "peak_time_ns": _round9(m.peak_time * 1e9),
        "fwhm_ns": _round9(m.fwhm_intensity * 1e9),
        "gain_peak": _round9(m.gain_peak),
        "gain_energy": _round9(m.gain_energy),
        "delay_ns": _round9(m.delay_vs_reference * 1e9),
        "broadening_fraction": _round9(m.broadening_fraction),
        "fractional_delay": _round9(m.fractional_delay),
        "centroid_ns": _round9(m.centroid_time * 1e9),
    }


def _cmd_derive(cfg: Config, args) -> int:
    d = derive_coefficients(cfg.to_medium_params())
    out = {
        "eta0": _round9(d.eta0),
        "delta_r_mhz": _round9(d.delta_r / MHZ),
        "light_shift_mhz": _round9(d.light_shift / MHZ),
        "v_group_m_s": _round9(d.v_group),
        "saturation_rabi_mhz": _round9(d.saturation_rabi / MHZ),
    }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_run(cfg: Config, args) -> int:
    res = run_single(cfg.to_medium_params(), cfg.to_pulse_config())
    tr = res.traces
    norm = tr.reference.intensity.max()
    lines = [TRACE_HEADER]
    t_ns = tr.reference.grid.times * 1e9
    ref = tr.reference.intensity / norm
    probe = tr.probe.intensity / norm
    conj = tr.conjugate.intensity / norm
    for i in range(len(t_ns)):
        lines.append(f"{_fmt(t_ns[i])},{_fmt(ref[i])},{_fmt(probe[i])},{_fmt(conj[i])}")
    _write(args.out, "\n".join(lines) + "\n")

    metrics = {"probe": _metrics_dict(res.probe_metrics)}
    metrics["conjugate"] = (
        _metrics_dict(res.conjugate_metrics) if res.conjugate_metrics else None
    )
    try:
        ad = analytic_delays(cfg.to_medium_params())
        metrics["analytic"] = {
            "tau_ns": _round9(ad.tau * 1e9),
            "dtau_locked_ns": _round9(ad.dtau_locked * 1e9),
            "peak_gain": _round9(ad.peak_gain),
        }
    except GuardError:
        pass
    print(json.dumps(metrics, indent=2))
    return 0


def _scan_rows(records) -> list[str]:
    rows = [SCAN_HEADER]
    for r in records:
        ns = lambda v: None if v is None else v * 1e9
        rows.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.var,
                    r.gain_peak,
                    r.gain_energy,
                    ns(r.probe_delay),
                    ns(r.conj_delay),
                    ns(r.differential_delay),
                    r.probe_broadening,
                    r.conj_broadening,
                    r.renorm_length,
                    r.inferred_eta,
                    r.inferred_xi,
                    r.predicted_gain,
                )
            )
        )
    return rows


def _emit_scan(records, args) -> int:
    if args.format == "json":
        payload = []
        header = SCAN_HEADER.split(",")
        for row in _scan_rows(records)[1:]:
            cells = row.split(",")
            payload.append(
                {k: (float(v) if v else None) for k, v in zip(header, cells)}
            )
        _write(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        _write(args.out, "\n".join(_scan_rows(records)) + "\n")
    return 0


def _cmd_scan_delta(cfg: Config, args) -> int:
    deltas = [v * MHZ for v in cfg.scan_values()]
    records = scan_delta(cfg.to_medium_params(), deltas, cfg.to_pulse_config())
    # report the scan variable back in config units (MHz)
    records = [dataclasses.replace(r, var=r.var / MHZ) for r in records]
    return _emit_scan(records, args)


def _cmd_scan_density(cfg: Config, args) -> int:
    records = scan_density(
        cfg.to_medium_params(), cfg.scan_values(), cfg.to_pulse_config()
    )
    return _emit_scan(records, args)


def _cmd_scan_pump(cfg: Config, args) -> int:
    rabis = [v * MHZ for v in cfg.scan_values()]
    records = scan_pump(
        cfg.to_medium_params(), rabis, cfg.to_pulse_config(), cfg.delta_policy
    )
    records = [dataclasses.replace(r, var=r.var / MHZ) for r in records]
    return _emit_scan(records, args)


_COMMANDS = {
    "run": (_cmd_run, True),
    "scan-delta": (_cmd_scan_delta, True),
    "scan-density": (_cmd_scan_density, True),
    "scan-pump": (_cmd_scan_pump, True),
    "derive": (_cmd_derive, False),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mp4wm",
        description="Ultraslow matched-pulse propagation in double-lambda 4WM",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, needs_out) in _COMMANDS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="path to key=value config")
        sp.add_argument("--out", required=needs_out, help="output CSV path")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler, _ = _COMMANDS[args.command]
    try:
        cfg = _load_config(args.config)
        return handler(cfg, args)
    except ConfigError as exc:
        print(f"mp4wm: config error: {exc}", file=sys.stderr)
        return 2
    except Mp4wmError as exc:
        print(f"mp4wm: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end.

Usage::

    giantatom <command> [--config FILE] [--set key=value ...] [--out DIR] [--format csv,json,svg]

Commands: ``spectrum``, ``sw-compare``, ``width-scan``, ``parity``,
``wavepacket``, ``verify``.  The configuration file is flat ``key = value``
text with ``#`` comments; ``--set`` flags override it.  Every run writes
``<command>.json`` with the resolved configuration next to its other outputs.

Exit status: 0 on success, 2 on validation errors, 3 when a numerical guard
trips (singular ranges, perturbative violation, failed verification).
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .checks import solver_vs_analytic, sw_projection_suite
from .errors import ConfigError, NumericalGuardError, ValidationError
from .experiments import analyze, emitter_block, parity_classification, sweep, width_scan
from .io import write_csv, write_json, write_svg
from .model import SystemParams, wavevector_of_detuning
from .solver import solve_scattering
from .wavepacket import WavepacketConfig, momentum_filter_estimate, propagate

__all__ = ["RunConfig", "parse_config", "run", "main", "COMMANDS", "OUTPUT_ENV"]

COMMANDS = ("spectrum", "sw-compare", "width-scan", "parity", "wavepacket", "verify")
FORMATS = ("csv", "json", "svg")
OUTPUT_ENV = "GIANTATOM_OUT"
EXIT_OK, EXIT_VALIDATION, EXIT_GUARD = 0, 2, 3

VERIFY_THRESHOLDS = {"solver_vs_analytic": 1e-10, "sw_projection": 1e-12, "unitarity": 1e-10}


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text):
    return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _optional_int(text):
    return None if text.strip().lower() in ("", "none") else _int(text)


# key -> (converter, default)
PARAM_KEYS = {
    "omega_c": (float, 20.0),
    "xi": (float, 1.0),
    "omega_0": (float, 20.0),
    "Omega": (float, 20.0),
    "lambda": (float, 0.2),
    "g": (float, 0.5),
    "N": (_int, 4),
}
PARAM_ALIASES = {"lam": "lambda"}

OPTION_KEYS = {
    "delta_min": (float, -1.0),
    "delta_max": (float, 1.0),
    "n_points": (_int, 2001),
    "refine": (_bool, False),
    "block_kind": (str, "exact"),
    "floor": (float, 0.5),
    "vary": (str, "lambda"),
    "values": (_floats, [0.1, 0.2, 0.4]),
    "n_values": (_ints, [0, 1, 2, 3, 4, 5, 6]),
    "carrier_delta": (float, 0.5),
    "sigma_x": (float, 40.0),
    "chain_length": (_int, 4000),
    "time_step": (float, 0.05),
    "max_time": (float, 3000.0),
    "absorb_guard": (_int, 50),
    "x0": (_optional_int, None),
    "snapshot_every": (_int, 0),
    "n_draws": (_int, 1000),
    "seed": (_int, 0),
    "n_phonon_cut": (_int, 3),
    "n_sw_draws": (_int, 20),
}

COMMAND_DEFAULTS = {
    "sw-compare": {"omega_0": 18.0, "delta_min": -1.5, "delta_max": 1.5},
    "width-scan": {"refine": True},
    "parity": {"refine": True},
    "verify": {"omega_0": 18.0},
}


@dataclass
class RunConfig:
    command: str
    params: SystemParams
    options: dict
    output_dir: Path
    formats: tuple = FORMATS
    sources: dict = field(default_factory=dict)

    def resolved(self):
        """Everything needed to replay the run."""
        p = self.params.as_dict()
        p["lambda"] = p.pop("lam")
        return {
            "command": self.command,
            "params": p,
            "options": dict(self.options),
            "output_dir": str(self.output_dir),
            "formats": list(self.formats),
        }


def _parse_lines(text):
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: missing key")
        entries[key] = (value, f"line {lineno}")
    return entries


def _parse_flags(flags):
    entries = {}
    for flag in flags or ():
        if "=" not in flag:
            raise ConfigError(f"--set expects key=value, got {flag!r}")
        key, value = (part.strip() for part in flag.split("=", 1))
        entries[key] = (value, "--set")
    return entries


def parse_config(file_text="", flag_overrides=(), command="spectrum", output_dir=None, formats=None):
    """Resolve a :class:`RunConfig` from file text and ``key=value`` overrides.

    Precedence, lowest first: built-in defaults, per-command defaults, the
    file, the flags.

    Raises
    ------
    ConfigError
        Malformed line (with its number), unknown keys (all listed), or a
        value that does not convert.
    ValidationError
        A parameter invariant is violated; the message names the field.
    """
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    merged = dict(_parse_lines(file_text))
    merged.update(_parse_flags(flag_overrides))
    known = set(PARAM_KEYS) | set(OPTION_KEYS) | set(PARAM_ALIASES) | {"out", "format"}
    unknown = sorted(k for k in merged if k not in known)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")

    values = {k: d for k, (_, d) in {**PARAM_KEYS, **OPTION_KEYS}.items()}
    values.update(COMMAND_DEFAULTS.get(command, {}))
    sources = {k: "default" for k in values}
    for key, (text, origin) in merged.items():
        if key in ("out", "format"):
            continue
        name = PARAM_ALIASES.get(key, key)
        convert = (PARAM_KEYS.get(name) or OPTION_KEYS[name])[0]
        try:
            values[name] = convert(text)
        except ValueError as exc:
            raise ConfigError(f"{origin}: bad value for {key}: {exc}") from None
        sources[name] = origin

    params = SystemParams(
        omega_c=values["omega_c"],
        xi=values["xi"],
        omega_0=values["omega_0"],
        Omega=values["Omega"],
        lam=values["lambda"],
        g=values["g"],
        N=values["N"],
    )
    options = {k: values[k] for k in OPTION_KEYS}
    if options["n_points"] < 2:
        raise ValidationError("n_points must be >= 2")
    if options["block_kind"] not in ("exact", "sw"):
        raise ValidationError(f"block_kind must be 'exact' or 'sw', got {options['block_kind']!r}")

    if output_dir is None:
        output_dir = merged["out"][0] if "out" in merged else os.environ.get(OUTPUT_ENV, "giantatom-out")
    if formats is None:
        formats = merged["format"][0] if "format" in merged else ",".join(FORMATS)
    if isinstance(formats, str):
        formats = tuple(f.strip() for f in formats.split(",") if f.strip())
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ConfigError(f"unknown output formats: {', '.join(bad)}")
    return RunConfig(command, params, options, Path(output_dir), tuple(formats), sources)


def _meta(config, **extra):
    out = {"config": config.resolved(), "version": __version__}
    out.update(extra)
    return out


def _run_spectrum(config):
    o = config.options
    spec = sweep(config.params, o["block_kind"], o["delta_min"], o["delta_max"], o["n_points"], refine=o["refine"])
    feats = analyze(spec, o["floor"])
    stem = config.output_dir / "spectrum"
    if "csv" in config.formats:
        write_csv(stem.with_suffix(".csv"), ["delta", "R"], zip(spec.deltas, spec.values))
    if "svg" in config.formats:
        write_svg(stem.with_suffix(".svg"), spec.deltas, {"R": spec.values},
                  xlabel="detuning delta / xi", ylabel="reflection R", title=f"N = {config.params.N}")
    write_json(stem.with_suffix(".json"), _meta(
        config,
        spectrum=spec.meta,
        skipped=[{"index": i, "delta": float(spec.deltas[i]), "reason": r} for i, r in spec.skipped],
        features={
            "maxima": [{"delta": d, "R": r} for d, r in feats.maxima],
            "n_peaks": feats.n_peaks,
            "central_dip_fwhm": feats.central_dip_fwhm,
            "window_width": feats.window_width,
            "shoulder_separation": feats.shoulder_separation,
        },
    ))
    return EXIT_OK


def _run_sw_compare(config):
    o = config.options
    p = config.params
    exact = sweep(p, "exact", o["delta_min"], o["delta_max"], o["n_points"], refine=o["refine"])
    block = emitter_block(p, "sw")
    prime = np.full(exact.deltas.size, np.nan)
    for i, d in enumerate(exact.deltas):
        if not np.isfinite(exact.values[i]):
            continue
        try:
            prime[i] = solve_scattering(block, p, wavevector_of_detuning(p, d)).reflectance
        except NumericalGuardError:
            pass
    diff = np.abs(exact.values - prime)
    ok = np.isfinite(diff)
    if not ok.any():
        raise NumericalGuardError("no detuning where both models could be evaluated")
    sup = float(np.max(diff[ok]))
    stem = config.output_dir / "sw-compare"
    if "csv" in config.formats:
        write_csv(stem.with_suffix(".csv"), ["delta", "R", "R_prime", "abs_diff"],
                  zip(exact.deltas, exact.values, prime, diff))
    if "svg" in config.formats:
        write_svg(stem.with_suffix(".svg"), exact.deltas, {"R (exact)": exact.values, "R' (effective)": prime},
                  xlabel="detuning delta / xi", ylabel="reflection", title="exact vs effective model")
    write_json(stem.with_suffix(".json"), _meta(
        config,
        sup_norm=sup,
        argmax_delta=float(exact.deltas[ok][np.argmax(diff[ok])]),
        small_parameter=abs(p.lam / p.delta_c),
        delta_range=[o["delta_min"], o["delta_max"]],
        n_compared=int(ok.sum()),
        spectrum=exact.meta,
    ))
    return EXIT_OK


def _run_width_scan(config):
    o = config.options
    scan = width_scan(config.params, o["vary"], o["values"], block_kind=o["block_kind"],
                      delta_min=o["delta_min"], delta_max=o["delta_max"], n_points=o["n_points"],
                      refine=o["refine"], floor=o["floor"])
    rows = []
    for value, feats in scan:
        if feats is None:
            rows.append((value, None, None, None))
        else:
            rows.append((value, feats.central_dip_fwhm, feats.window_width, feats.n_peaks))
    stem = config.output_dir / "width-scan"
    if "csv" in config.formats:
        write_csv(stem.with_suffix(".csv"), ["vary_value", "fwhm", "window_width", "n_peaks"], rows)
    if "svg" in config.formats:
        nan = float("nan")
        write_svg(stem.with_suffix(".svg"), [r[0] for r in rows],
                  {"central_dip_fwhm": [nan if r[1] is None else r[1] for r in rows],
                   "window_width": [nan if r[2] is None else r[2] for r in rows]},
                  xlabel=f"{scan.vary} / xi", ylabel="width / xi", title=f"width scan, N = {config.params.N}")
    write_json(stem.with_suffix(".json"), _meta(
        config,
        vary=scan.vary,
        fwhm_strictly_increasing=scan.fwhm_strictly_increasing,
        window_strictly_increasing=scan.window_strictly_increasing,
        fwhm_relative_variation=scan.fwhm_relative_variation,
        errors=scan.errors,
        definitions={
            "fwhm": "full width at half depth of the dip containing delta=0",
            "window_width": "contiguous width around delta=0 with R <= 0.5",
        },
    ))
    return EXIT_OK


def _run_parity(config):
    o = config.options
    rows = parity_classification(config.params, o["n_values"], delta_min=o["delta_min"],
                                 delta_max=o["delta_max"], n_points=o["n_points"], refine=o["refine"])
    stem = config.output_dir / "parity"
    if "csv" in config.formats:
        write_csv(stem.with_suffix(".csv"), ["N", "class", "r_at_zero", "width"],
                  [(r.N, r.klass, r.r_at_zero, r.width) for r in rows])
    write_json(stem.with_suffix(".json"), _meta(
        config,
        rows=[{"N": r.N, "class": r.klass, "r_at_zero": r.r_at_zero, "width": r.width,
               "asymmetry": r.asymmetry, "r_at_q_roots": r.r_at_q_roots} for r in rows],
    ))
    return EXIT_OK


def _run_wavepacket(config):
    o = config.options
    p = config.params
    cfg = WavepacketConfig.at_detuning(
        p, o["carrier_delta"], chain_length=o["chain_length"], sigma_x=o["sigma_x"], x0=o["x0"],
        time_step=o["time_step"], max_time=o["max_time"], absorb_guard=o["absorb_guard"],
        snapshot_every=o["snapshot_every"] or None,
    )
    block = emitter_block(p, o["block_kind"])
    stem = config.output_dir / "wavepacket"
    snapshot = None
    if cfg.snapshot_every and "csv" in config.formats:
        snapshot = stem.with_name("wavepacket-snapshots.csv")
        snapshot.parent.mkdir(parents=True, exist_ok=True)
    res = propagate(block, p, cfg, snapshot_file=snapshot)
    r_point = solve_scattering(block, p, cfg.k0).reflectance
    half = 8 * cfg.k_spread * 2 * p.xi
    curve = sweep(p, o["block_kind"], o["carrier_delta"] - half, o["carrier_delta"] + half, 801)
    write_json(stem.with_suffix(".json"), _meta(
        config,
        R_wp=res.R_wp,
        T_wp=res.T_wp,
        leak=res.leak,
        R_analytic=r_point,
        abs_diff=abs(res.R_wp - r_point),
        R_filtered=momentum_filter_estimate(cfg, curve),
        k0=cfg.k0,
        time=res.time,
        norm_drift=res.norm_drift,
        energy_drift=res.energy_drift,
    ))
    return EXIT_OK


def _run_verify(config):
    o = config.options
    check = solver_vs_analytic(o["n_draws"], o["seed"])
    proj = sw_projection_suite(config.params, o["n_sw_draws"], o["seed"], o["n_phonon_cut"])
    result = {
        "solver_vs_analytic_max": check.max_deviation,
        "sw_projection_max": max(proj),
        "unitarity_max_residual": check.max_unitarity_residual,
        "n_draws": check.n_draws,
        "n_skipped": check.n_skipped,
        "thresholds": VERIFY_THRESHOLDS,
    }
    passed = (
        check.max_deviation <= VERIFY_THRESHOLDS["solver_vs_analytic"]
        and max(proj) <= VERIFY_THRESHOLDS["sw_projection"]
        and check.max_unitarity_residual <= VERIFY_THRESHOLDS["unitarity"]
    )
    result["passed"] = passed
    write_json(config.output_dir / "verify.json", _meta(config, **result))
    return EXIT_OK if passed else EXIT_GUARD


_RUNNERS = {
    "spectrum": _run_spectrum,
    "sw-compare": _run_sw_compare,
    "width-scan": _run_width_scan,
    "parity": _run_parity,
    "wavepacket": _run_wavepacket,
    "verify": _run_verify,
}


def run(config):
    """Execute one command; returns the exit status."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    return _RUNNERS[config.command](config)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="giantatom",
        description="Single-photon scattering off a phonon-dressed giant atom.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="flat 'key = value' configuration file")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one configuration key (repeatable)")
    parser.add_argument("--out", type=Path, help=f"output directory (default: ${OUTPUT_ENV} or ./giantatom-out)")
    parser.add_argument("--format", dest="formats", help="comma-separated subset of csv,json,svg")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text() if args.config else ""
        config = parse_config(text, args.overrides, args.command, args.out, args.formats)
        return run(config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalGuardError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())

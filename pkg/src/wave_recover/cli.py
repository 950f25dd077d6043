"""``wave-recover`` command line: reconstruct, sweep, diagnose.

Exit codes: 0 success, 1 I/O failure, 2 domain error (inadmissible input,
too few admissible sweep points, degenerate fit).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    CHANNELS,
    RunConfig,
    diagnose,
    format_float,
    load_trace,
    parse_config_text,
    run_sweep,
    sweep_csv_text,
)
from .plotting import render_svg
from .reconstruction import linear_baseline_eta, reconstruct_full
from .wave_model import AdmissibilityError, check_admissibility

EXIT_OK, EXIT_IO, EXIT_DOMAIN = 0, 1, 2

# flag name -> RunConfig field, type
_FLAGS = {
    "--speed": ("speed", float),
    "--depth": ("depth", float),
    "--n": ("n", int),
    "--half-width": ("half_width", float),
    "--cutoff-rel": ("cutoff_rel", float),
    "--k-max": ("k_max", float),
    "--channel": ("channel", str),
    "--min": ("min", float),
    "--max": ("max", float),
    "--count": ("count", int),
    "--spacing": ("spacing", str),
    "--delta-width": ("delta_width", float),
    "--epsilon": ("epsilon", float),
    "--delta-amplitude": ("delta_amplitude", float),
    "--gamma": ("gamma", float),
    "--gravity": ("gravity", float),
    "--decay-k-lo": ("decay_k_lo", float),
    "--decay-k-hi": ("decay_k_hi", float),
    "--pressure-csv": ("pressure_csv", str),
    "--sweep-csv": ("sweep_csv", str),
    "--out": ("out", str),
    "--jobs": ("jobs", int),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wave-recover",
        description="Recover solitary-wave surfaces from bed pressure and study perturbation errors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("reconstruct", "write profile.csv and spectrum.csv for one configuration"),
        ("sweep", "sweep one perturbation channel and write sweep_<channel>.csv/.svg"),
        ("diagnose", "fit the auxiliary-spectrum decay and compare bounds with a sweep"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key=value file; flags override it")
        for flag, (dest, typ) in _FLAGS.items():
            kwargs = {"dest": dest, "type": typ, "default": argparse.SUPPRESS}
            if flag == "--channel":
                kwargs["choices"] = CHANNELS
            if flag == "--spacing":
                kwargs["choices"] = ("log", "linear")
            p.add_argument(flag, **kwargs)
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(parse_config_text(Path(args.config).read_text()))
    for dest, _ in _FLAGS.values():
        if hasattr(args, dest):
            values[dest] = getattr(args, dest)
    return RunConfig(**values)


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out)
    if not out.is_dir():
        raise FileNotFoundError(f"output directory does not exist: {out}")
    return out


def _write(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def cmd_reconstruct(config: RunConfig) -> int:
    out = _out_dir(config)
    trace = load_trace(config)
    grid = config.grid
    p = trace.sample(grid)
    spec = config.perturbation
    report = check_admissibility(trace, config.params, spec, grid=grid)
    if not report.passed:
        raise AdmissibilityError(report)
    result = reconstruct_full(p, config.params, spec, config.cutoff_rel, config.k_max)
    baseline = linear_baseline_eta(
        p, config.depth + spec.gamma, config.gravity, config.cutoff_rel, config.k_max
    )
    rows = ["q,x_of_q,eta,eta_linear_baseline"]
    for q, x, eta, lin in zip(grid.nodes, result.x_of_q.values, result.eta.values, baseline.values):
        rows.append(",".join(format_float(v) for v in (q, x, eta, lin)))
    _write(out / "profile.csv", "\n".join(rows) + "\n")
    rows = ["k,abs_g_hat"]
    for k, c in zip(grid.wavenumbers, np.abs(result.g_hat.coeffs)):
        rows.append(f"{format_float(k)},{format_float(c)}")
    _write(out / "spectrum.csv", "\n".join(rows) + "\n")
    d = result.diagnostics
    print(f"cutoff_k={format_float(d.cutoff_k)} edge_warning={d.edge_warning} monotone_x={d.monotone_x}")
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    out = _out_dir(config)
    result = run_sweep(config)
    if result.admissible_count < 4:
        print(
            f"only {result.admissible_count} admissible sweep points; at least 4 are needed",
            file=sys.stderr,
        )
        return EXIT_DOMAIN
    channel = config.channel
    _write(out / f"sweep_{channel}.csv", sweep_csv_text(result))
    adm = [r for r in result.records if r.admissible]
    _, _, _, spacing = config.resolved_sweep()
    svg = render_svg(
        [abs(r.param_value) if spacing == "log" else r.param_value for r in adm],
        [r.error_l2 for r in adm],
        log=spacing == "log",
        title=f"Reconstruction error, {channel} sweep",
        xlabel=channel,
        ylabel="E (L2 in q)",
    )
    _write(out / f"sweep_{channel}.svg", svg)
    for note in result.notes:
        print(note, file=sys.stderr)
    if result.fit is not None:
        print(
            f"alpha_hat={format_float(result.fit.alpha_hat)} r2={format_float(result.fit.r_squared)}"
        )
    return EXIT_OK


def cmd_diagnose(config: RunConfig) -> int:
    out = _out_dir(config)
    report = diagnose(config)
    _write(out / "diagnostics.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    comparison = report.get("bound_comparison")
    if comparison is not None and comparison["violations"]:
        print(f"{len(comparison['violations'])} bound violations", file=sys.stderr)
    print(f"sigma_hat={format_float(report['sigma_hat'])}")
    return EXIT_OK


_COMMANDS = {"reconstruct": cmd_reconstruct, "sweep": cmd_sweep, "diagnose": cmd_diagnose}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        return _COMMANDS[args.command](config)
    except AdmissibilityError as exc:
        print(f"inadmissible configuration: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

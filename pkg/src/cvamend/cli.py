"""Command-line front end: single points, sweeps, thresholds, figure presets.

Option precedence is command-line flags over config-file values over
built-in defaults, and the effective configuration is echoed into a JSON
manifest next to every CSV so that any output file can be reproduced
byte-for-byte from its manifest alone.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .experiment import (
    ExperimentConfig,
    SweepResult,
    find_flip_eta,
    run_point,
    sweep_eta,
)
from .plotting import save_witness_plot
from .uncertainty import PropagationError, UncertaintyModel
from .witness import eb_threshold

CSV_HEADER = ["eta", "nu2", "delta", "verdict", "variant"]

DEFAULTS = {
    "r": -1.3,
    "eta": 0.15,
    "eta-min": 0.01,
    "eta-max": 0.99,
    "steps": 197,
    "t0": 1.0,
    "tm": 1.0,
    "variant": "phi1",
    "uncertainty": "off",
    "sigma": 0.02,
    "samples": 10000,
    "seed": 20260810,
    "method": "first-order",
    "output": None,
    "plot": None,
}

_OPTION_TYPES = {
    "r": float,
    "eta": float,
    "eta-min": float,
    "eta-max": float,
    "steps": int,
    "t0": float,
    "tm": float,
    "variant": str,
    "uncertainty": str,
    "sigma": float,
    "samples": int,
    "seed": int,
    "method": str,
    "output": str,
    "plot": str,
}

# Figure presets: source squeeze r (probe r' = -r/2), loss settings, which
# channel variants to sweep, and whether confidence intervals are computed.
PRESETS = {
    "fig5": {"r": -1.3, "configs": [("", 1.0, 1.0)], "variants": ("phi1", "phi2"), "uncertainty": False},
    "fig6a": {"r": -1.0, "configs": [("", 1.0, 1.0)], "variants": ("phi1", "phi2"), "uncertainty": True},
    "fig6b": {"r": -1.3, "configs": [("", 1.0, 1.0)], "variants": ("phi1", "phi2"), "uncertainty": True},
    "fig7": {"r": -1.3, "configs": [("_ideal", 1.0, 1.0), ("_lossy", 0.75, 0.90)], "variants": ("phi1",), "uncertainty": True},
}


class UsageError(Exception):
    """Invalid flags or config-file contents; maps to exit code 2."""


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record written next to every CSV output."""

    tool: str
    version: str
    command: str
    config: dict
    grid: dict | None
    output: str
    created: str

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def load_config_file(path: str) -> dict:
    """Flat key = value file with the same keys as the command-line flags."""
    if not os.path.exists(path):
        raise UsageError(f"config file not found: {path}")
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _OPTION_TYPES:
                raise UsageError(f"{path}:{lineno}: unknown option {key!r}")
            try:
                values[key] = _OPTION_TYPES[key](value)
            except ValueError:
                raise UsageError(
                    f"{path}:{lineno}: cannot parse {value!r} as {_OPTION_TYPES[key].__name__}"
                ) from None
    return values


def effective_options(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and explicit flags, then validate ranges."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        opts.update(load_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            opts[key] = value

    for name in ("eta", "eta-min", "eta-max", "t0", "tm"):
        if not 0.0 <= opts[name] <= 1.0:
            raise UsageError(f"--{name} must lie in [0, 1], got {opts[name]}")
    if not opts["eta-min"] < opts["eta-max"]:
        raise UsageError(
            f"--eta-min must be smaller than --eta-max, got {opts['eta-min']} >= {opts['eta-max']}"
        )
    if opts["steps"] < 2:
        raise UsageError(f"--steps must be >= 2, got {opts['steps']}")
    if abs(opts["r"]) > 20.0:
        raise UsageError(f"--r must satisfy |r| <= 20, got {opts['r']}")
    if opts["variant"] not in ("phi1", "phi2"):
        raise UsageError(f"--variant must be phi1 or phi2, got {opts['variant']!r}")
    if opts["uncertainty"] not in ("on", "off"):
        raise UsageError(f"--uncertainty must be on or off, got {opts['uncertainty']!r}")
    if opts["method"] not in ("first-order", "monte-carlo"):
        raise UsageError(f"--method must be first-order or monte-carlo, got {opts['method']!r}")
    if opts["sigma"] < 0:
        raise UsageError(f"--sigma must be >= 0, got {opts['sigma']}")
    if opts["samples"] < 100:
        raise UsageError(f"--samples must be >= 100, got {opts['samples']}")
    if opts["plot"] not in (None, "on", "off"):
        raise UsageError(f"--plot must be on or off, got {opts['plot']!r}")
    return opts


def _uncertainty_model(opts: dict) -> UncertaintyModel | None:
    if opts["uncertainty"] != "on":
        return None
    return UncertaintyModel(
        relative_sigma=opts["sigma"], samples=opts["samples"], seed=opts["seed"]
    )


def _experiment_config(opts: dict, eta: float | None = None, t0=None, tm=None, variant=None) -> ExperimentConfig:
    return ExperimentConfig(
        r=opts["r"],
        eta=opts["eta"] if eta is None else eta,
        t0=opts["t0"] if t0 is None else t0,
        tm=opts["tm"] if tm is None else tm,
        variant=opts["variant"] if variant is None else variant,
        uncertainty=_uncertainty_model(opts),
    )


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _config_echo(config: ExperimentConfig, opts: dict, variants) -> dict:
    model = config.uncertainty
    return {
        "r": config.r,
        "r_prime": config.r_prime,
        "eta": config.eta,
        "t0": config.t0,
        "tm": config.tm,
        "variant": "+".join(variants),
        "uncertainty": "on" if model else "off",
        "relative_sigma": model.relative_sigma if model else None,
        "absolute_floor": model.absolute_floor if model else None,
        "samples": model.samples if model else None,
        "seed": model.seed if model else None,
        "method": opts["method"] if model else None,
    }


def _write_manifest(command: str, csv_path: str, config: ExperimentConfig, opts: dict, variants, grid: dict | None) -> None:
    manifest = RunManifest(
        tool="cvamend",
        version=__version__,
        command=command,
        config=_config_echo(config, opts, variants),
        grid=grid,
        output=os.path.basename(csv_path),
        created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    stem, _ = os.path.splitext(csv_path)
    manifest.write(stem + ".manifest.json")


def _verdict_cell(point) -> str:
    if point.classification is not None:
        return point.classification
    return "entangled" if point.witness.entangled else "separable"


def write_sweep_csv(path: str, blocks: list[tuple[str, SweepResult]]) -> None:
    """One row per grid point; multiple variants are stacked in block order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for variant, sweep in blocks:
            for eta, point in zip(sweep.grid, sweep.points):
                delta = "" if point.delta is None else _fmt(point.delta)
                writer.writerow(
                    [_fmt(eta), _fmt(point.witness.nu_squared), delta, _verdict_cell(point), variant]
                )


def _plot_curves(blocks: list[tuple[str, SweepResult]]):
    curves = []
    for label, sweep in blocks:
        etas = np.array(sweep.grid)
        nu2 = np.array([p.witness.nu_squared for p in sweep.points])
        deltas = None
        if sweep.points and sweep.points[0].delta is not None:
            deltas = np.array([p.delta for p in sweep.points])
        curves.append((label, etas, nu2, deltas))
    return curves


def cmd_point(args: argparse.Namespace, opts: dict) -> int:
    config = _experiment_config(opts)
    result = run_point(config, delta_method=opts["method"])
    print(f"variant            {config.variant}")
    print(f"source squeeze r   {_fmt(config.r)}")
    print(f"probe r' (-r/2)    {_fmt(config.r_prime)}")
    print(f"eta                {_fmt(config.eta)}")
    print(f"t0 / tm            {_fmt(config.t0)} / {_fmt(config.tm)}")
    print(f"nu2                {_fmt(result.witness.nu_squared)}")
    if result.delta is not None:
        print(f"delta(nu2)         {_fmt(result.delta)}  ({opts['method']})")
        print(f"verdict            {result.classification}")
    else:
        print(f"verdict            {_verdict_cell(result)}")
    if config.variant == "phi1" and config.r_prime != 0.0:
        threshold = eb_threshold(config.r_prime)
        side = "inside" if config.eta <= threshold else "outside"
        print(f"ideal EB window    eta <= {_fmt(threshold)} (eta {_fmt(config.eta)} is {side})")
    return 0


def cmd_sweep(args: argparse.Namespace, opts: dict) -> int:
    config = _experiment_config(opts)
    sweep = sweep_eta(
        config, opts["eta-min"], opts["eta-max"], opts["steps"], delta_method=opts["method"]
    )
    path = opts["output"] or "sweep.csv"
    grid = {"eta_min": opts["eta-min"], "eta_max": opts["eta-max"], "steps": opts["steps"]}
    write_sweep_csv(path, [(config.variant, sweep)])
    _write_manifest("sweep", path, config, opts, [config.variant], grid)
    if opts["plot"] == "on":
        save_witness_plot(os.path.splitext(path)[0] + ".png", _plot_curves([(config.variant, sweep)]))
    print(f"wrote {opts['steps']} rows to {path}")
    return 0


def cmd_threshold(args: argparse.Namespace, opts: dict) -> int:
    if opts["r"] == 0.0:
        raise UsageError("--r must be nonzero: the probe squeezing vanishes at r = 0")
    config = _experiment_config(opts)
    ideal = config.t0 == 1.0 and config.tm == 1.0
    if ideal:
        print(f"analytic eb threshold   eta_tilde({_fmt(config.r_prime)}) = {_fmt(eb_threshold(config.r_prime))}")
    flip = find_flip_eta(config, tol=1e-4)
    label = "bisection flip eta      " if ideal else "bisection flip eta (lossy bench)"
    print(f"{label} {_fmt(flip)}")
    return 0


def cmd_reproduce(args: argparse.Namespace, opts: dict) -> int:
    preset = PRESETS[args.figure]
    out_dir = opts["output"] or "."
    os.makedirs(out_dir, exist_ok=True)
    grid = {"eta_min": opts["eta-min"], "eta_max": opts["eta-max"], "steps": opts["steps"]}

    preset_opts = dict(opts)
    preset_opts["r"] = preset["r"]
    preset_opts["uncertainty"] = "on" if preset["uncertainty"] else "off"

    all_blocks = []
    written = []
    for suffix, t0, tm in preset["configs"]:
        blocks = []
        config = None
        for variant in preset["variants"]:
            config = _experiment_config(preset_opts, t0=t0, tm=tm, variant=variant)
            sweep = sweep_eta(
                config, opts["eta-min"], opts["eta-max"], opts["steps"],
                delta_method=opts["method"],
            )
            label = variant if not suffix else f"{variant}{suffix.replace('_', ' ')}"
            blocks.append((variant, sweep))
            all_blocks.append((label, sweep))
        path = os.path.join(out_dir, f"{args.figure}{suffix}.csv")
        write_sweep_csv(path, blocks)
        _write_manifest("reproduce", path, config, preset_opts, preset["variants"], grid)
        written.append(path)

    if opts["plot"] != "off":
        png = os.path.join(out_dir, f"{args.figure}.png")
        save_witness_plot(png, _plot_curves(all_blocks), title=args.figure)
        written.append(png)
    print("wrote " + ", ".join(written))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvamend",
        description=(
            "Gaussian covariance-matrix bench: test whether an interposed squeezing "
            "filter rescues entanglement that double attenuation would otherwise break."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=float, help="source two-mode squeeze parameter (probe r' = -r/2)")
    common.add_argument("--eta", type=float, help="channel transmissivity in [0, 1]")
    common.add_argument("--eta-min", type=float, help="sweep grid lower edge")
    common.add_argument("--eta-max", type=float, help="sweep grid upper edge")
    common.add_argument("--steps", type=int, help="sweep grid size (>= 2)")
    common.add_argument("--t0", type=float, help="preparation-loss transmissivity")
    common.add_argument("--tm", type=float, help="detection transmissivity")
    common.add_argument("--variant", choices=["phi1", "phi2"], help="channel route under test")
    common.add_argument("--uncertainty", choices=["on", "off"], help="compute delta(nu2)")
    common.add_argument("--sigma", type=float, help="relative per-element CM uncertainty")
    common.add_argument("--samples", type=int, help="Monte Carlo sample count")
    common.add_argument("--seed", type=int, help="Monte Carlo seed")
    common.add_argument("--method", choices=["first-order", "monte-carlo"],
                        help="uncertainty propagation method")
    common.add_argument("--output", type=str, help="output CSV path (sweep) or directory (reproduce)")
    common.add_argument("--config", type=str, help="flat key = value config file")
    common.add_argument("--plot", choices=["on", "off"], help="render a PNG next to the CSV")

    sub = parser.add_subparsers(dest="command", required=True)
    p_point = sub.add_parser("point", parents=[common], help="evaluate one configuration")
    p_point.set_defaults(func=cmd_point)
    p_sweep = sub.add_parser("sweep", parents=[common], help="sweep eta and write CSV")
    p_sweep.set_defaults(func=cmd_sweep)
    p_threshold = sub.add_parser("threshold", parents=[common],
                                 help="locate the separability flip transmissivity")
    p_threshold.set_defaults(func=cmd_threshold)
    p_reproduce = sub.add_parser("reproduce", parents=[common],
                                 help="run a canned figure preset and write CSV(s) and a plot")
    p_reproduce.add_argument("figure", choices=sorted(PRESETS))
    p_reproduce.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        opts = effective_options(args)
        return args.func(args, opts)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, PropagationError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: argument parsing, configuration merge and dispatch."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from app.commands.analytic_command import AnalyticCommand
from app.commands.diversity_command import DiversityCommand
from app.commands.figure_command import FigureCommand
from app.commands.simulate_command import SimulateCommand
from app.commands.sweep_command import SweepCommand
from app.commands.validate_command import ValidateCommand
from app.config import get_settings
from app.constants.noma import REFERENCE_CONFIG, ThroughputPairing
from app.core.logging_config import LoggingConfig, get_logger
from app.exceptions.config_validation_error import ConfigValidationError
from app.exceptions.handlers import ExitCode, exit_code_for
from app.exceptions.usage_error import UsageError
from app.numerics.units import db_to_linear
from app.schemas.manifest import RunManifest
from app.schemas.sweep import SweepAxis, SweepMetric
from app.schemas.system import EvalMode
from app.services.config_service import validate_config
from app.utils.grids import parse_grid

logger = logging.getLogger(__name__)

DEFAULT_SNR_GRID = "0:40:5"
DEFAULT_DIVERSITY_WINDOW = "30:45"
# Grid step used when the diversity command derives its grid from the window.
DIVERSITY_STEP_DB = 2.5

_COMMANDS = {
    "analytic": AnalyticCommand,
    "simulate": SimulateCommand,
    "validate": ValidateCommand,
    "sweep": SweepCommand,
    "figure": FigureCommand,
    "diversity": DiversityCommand,
}

# CLI flag dest -> SystemConfig field
_CONFIG_FLAGS = {
    "users": "num_users",
    "k": "num_subcarriers",
    "m": "m",
    "n": "n",
    "a_m": "a_m",
    "a_n": "a_n",
    "r_m": "rate_m",
    "r_n": "rate_n",
    "alpha": "alpha",
    "eta": "eta",
    "radius": "radius",
    "nodes": "chebyshev_nodes",
    "semi_nodes": "semi_infinite_nodes",
    "throughput_pairing": "throughput_pairing",
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with SystemConfig fields")
    common.add_argument("--snr-db", help="SNR grid in dB, start:stop:step or a,b,c")
    common.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument(
        "--mode",
        action="append",
        dest="modes",
        help="m, n-<sic>-<formulation> or pair-<sic>-<formulation>; repeatable",
    )
    common.add_argument("--out", help="output directory")
    common.add_argument("--chunk-size", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--log-level")

    network = common.add_argument_group("network overrides")
    network.add_argument("--users", type=int, help="number of users M")
    network.add_argument("--k", type=int, help="subcarriers per user (1 = PD-NOMA)")
    network.add_argument("--m", type=int, help="rank of the far user")
    network.add_argument("--n", type=int, help="rank of the near user")
    network.add_argument("--a-m", type=float)
    network.add_argument("--a-n", type=float)
    network.add_argument("--r-m", type=float, help="target rate of the m-th user (BPCU)")
    network.add_argument("--r-n", type=float, help="target rate of the n-th user (BPCU)")
    network.add_argument("--alpha", type=float)
    network.add_argument("--eta", type=float)
    network.add_argument("--radius", type=float)
    network.add_argument("--ri-db", type=float, help="total residual-interference power")
    network.add_argument("--nodes", type=int, help="Gauss-Chebyshev nodes")
    network.add_argument("--semi-nodes", type=int, help="semi-infinite rule nodes")
    network.add_argument("--throughput-pairing", choices=ThroughputPairing.ALL)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="nomacop",
        description="Connection outage probabilities of NOMA user pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("analytic", parents=[common], help="closed-form and asymptotic COP")
    sub.add_parser("simulate", parents=[common], help="analytic plus Monte Carlo")

    validate = sub.add_parser(
        "validate", parents=[common], help="analytic versus Monte Carlo check"
    )
    validate.add_argument("--rel-tol", type=float)

    sweep = sub.add_parser("sweep", parents=[common], help="single-axis sweep")
    sweep.add_argument("--axis", choices=SweepAxis.ALL, default=SweepAxis.SNR_DB)
    sweep.add_argument("--grid", help="grid for the theta or rate axis")
    sweep.add_argument("--metric", choices=SweepMetric.ALL, default=SweepMetric.COP)
    sweep.add_argument(
        "--fixed-snr-db", type=float, default=30.0, help="SNR for non-SNR axes"
    )

    figure = sub.add_parser("figure", parents=[common], help="figure reproduction preset")
    figure.add_argument("number", type=int, nargs="?")
    figure.add_argument("--list", action="store_true", help="list the presets and exit")

    diversity = sub.add_parser(
        "diversity", parents=[common], help="fitted versus predicted diversity orders"
    )
    diversity.add_argument(
        "--window", default=DEFAULT_DIVERSITY_WINDOW, help="fit window in dB, lo:hi"
    )
    diversity.add_argument(
        "--min-probability", type=float, help="drop points at or below this COP"
    )
    return parser


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    """Accept ``--figure N`` as a shorthand for the figure subcommand."""
    argv = list(argv)
    if argv and argv[0] in _COMMANDS:
        return argv
    for i, arg in enumerate(argv):
        if arg == "--figure" and i + 1 < len(argv):
            return ["figure", argv[i + 1], *argv[:i], *argv[i + 2 :]]
        if arg.startswith("--figure="):
            return ["figure", arg.split("=", 1)[1], *argv[:i], *argv[i + 1 :]]
    return argv


def _load_config_file(path: str) -> dict[str, Any]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise UsageError(f"{path} must hold a JSON object")
    return data


def _merge(base: dict[str, Any], layer: dict[str, Any]) -> dict[str, Any]:
    """Overlay ``layer``; a ``<field>_db`` key replaces the linear field below it."""
    merged = dict(base)
    for key, value in layer.items():
        if key.endswith("_db"):
            merged.pop(key[: -len("_db")], None)
        else:
            merged.pop(f"{key}_db", None)
        merged[key] = value
    return merged


def _parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError as e:
        raise UsageError(f"window must look like lo:hi, got {text!r}") from e
    if hi <= lo:
        raise UsageError(f"degenerate diversity window {text!r}")
    return lo, hi


def _resolve_trials(command: str, trials: Optional[int]) -> int:
    if command in ("analytic", "diversity"):
        return 0
    if trials is not None:
        return trials
    if command == "sweep":
        return 0
    return get_settings().default_trials


def parse_args_and_config(argv: Optional[Sequence[str]] = None) -> RunManifest:
    """Resolve flags over the config file over the reference defaults."""
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_normalize_argv(argv))
    settings = get_settings()
    if args.log_level:
        LoggingConfig().set_level(args.log_level)

    raw: dict[str, Any] = dict(REFERENCE_CONFIG)
    if args.config:
        raw = _merge(raw, _load_config_file(args.config))
    flags = {
        field: getattr(args, dest)
        for dest, field in _CONFIG_FLAGS.items()
        if getattr(args, dest) is not None
    }
    if args.ri_db is not None:
        flags["omega_i_total"] = db_to_linear(args.ri_db)
    config = validate_config(_merge(raw, flags))

    modes = args.modes or []
    for label in modes:
        try:
            EvalMode.parse(label)
        except ValueError as e:
            raise UsageError(str(e)) from e

    options: dict[str, Any] = {}
    if args.command == "validate" and args.rel_tol is not None:
        options["rel_tol"] = args.rel_tol
    if args.command == "sweep":
        options.update(
            axis=args.axis, metric=args.metric, fixed_snr_db=args.fixed_snr_db
        )
        if args.grid:
            options["grid"] = parse_grid(args.grid)
    if args.command == "figure":
        if args.number is None and not args.list:
            raise UsageError("figure needs a figure number or --list")
        options.update(
            figure=args.number,
            list=args.list,
            snr_grid_explicit=args.snr_db is not None,
        )
    snr_grid = args.snr_db or DEFAULT_SNR_GRID
    if args.command == "diversity":
        lo, hi = _parse_window(args.window)
        options["window_db"] = [lo, hi]
        if args.min_probability is not None:
            options["min_probability"] = args.min_probability
        snr_grid = args.snr_db or f"{lo:g}:{hi:g}:{DIVERSITY_STEP_DB:g}"

    if args.seed < 0:
        raise UsageError(f"--seed must be non-negative, got {args.seed}")

    chunk_size = args.chunk_size or settings.chunk_size
    workers = args.workers or settings.workers
    if chunk_size < 1 or workers < 1:
        raise UsageError("--chunk-size and --workers must be positive")

    return RunManifest(
        command=args.command,
        config_path=args.config,
        config=config,
        output_dir=args.out or settings.output_dir,
        seed=args.seed,
        trials=_resolve_trials(args.command, args.trials),
        chunk_size=chunk_size,
        workers=workers,
        snr_db=parse_grid(snr_grid),
        modes=modes,
        options=options,
    )


def run_command(manifest: RunManifest) -> int:
    command = _COMMANDS[manifest.command](manifest)
    logger.info(f"Running {manifest.command} into {manifest.output_dir}")
    try:
        return command.execute()
    except Exception as e:
        return exit_code_for(e)


def main(argv: Optional[Sequence[str]] = None) -> int:
    LoggingConfig()
    try:
        manifest = parse_args_and_config(argv)
    except (ConfigValidationError, UsageError, OSError) as e:
        return exit_code_for(e)
    code = run_command(manifest)
    get_logger().info(f"{manifest.command} finished with exit code {code}")
    return code if code is not None else ExitCode.OK

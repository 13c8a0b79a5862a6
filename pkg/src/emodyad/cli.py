"""Command-line interface for emodyad."""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable

from .analysis import (
    PreconditionError,
    basin_map,
    describe_relationship,
    divergence_certificate,
    focus_condition,
    lyapunov_descent_check,
    meeting_benefit,
    oscillation_condition_51,
    scan_parameter,
    separatrix,
    theorem1_applies,
    theorem2_applies,
)
from .config import (
    ConfigError,
    RunConfig,
    parse_config,
    read_document,
)
from .discrete import fixed_points, iterate, sequence_to_csv
from .equilibria import SADDLE, count_regime, find_steady_states
from .influence import KINDS, validate_axioms
from .integrate import METHODS, integrate
from .model import PARAMETER_NAMES
from .output import atomic_write_text, csv_to_json, resolve_output_path, to_json
from .scenarios import preset_names

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_ERROR = 2
EXIT_NUMERICAL = 3

COMMANDS = (
    "simulate",
    "equilibria",
    "basin",
    "separatrix",
    "scan",
    "validate",
    "discrete",
    "scenario",
    "certify",
)


def _common_parser() -> argparse.ArgumentParser:
    """Options shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=Path,
        metavar="FILE",
        help="Path to the JSON or YAML configuration file.",
    )
    common.add_argument(
        "--out",
        type=str,
        metavar="FILE",
        help="Output file (default: stdout). Relative paths go under $EMODYAD_OUTPUT_DIR if set.",
    )
    common.add_argument(
        "--format",
        type=str,
        choices=["csv", "json"],
        help="Format for tabular output: csv or json (default: csv).",
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Enable verbose output.",
    )
    common.add_argument(
        "-q",
        "--quiet",
        action="store_true",
        help="Suppress output except for errors.",
    )
    return common


def _add_trajectory_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--t-end", type=float, metavar="T", help="Integration end time.")
    sub.add_argument("--method", type=str, choices=METHODS, help="Integrator.")


def create_parser() -> argparse.ArgumentParser:
    """Create and configure the argument parser."""
    parser = argparse.ArgumentParser(
        prog="emodyad",
        description="Emotional dynamics of two interacting people - simulate and analyse.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common_parser()

    sub = subparsers.add_parser("simulate", parents=[common], help="Integrate a trajectory.")
    _add_trajectory_flags(sub)
    sub.add_argument("--x0", type=float, metavar="X", help="Initial mood of person 1.")
    sub.add_argument("--y0", type=float, metavar="Y", help="Initial mood of person 2.")

    subparsers.add_parser("equilibria", parents=[common], help="List and classify steady states.")

    sub = subparsers.add_parser("basin", parents=[common], help="Compute a basin-of-attraction map.")
    sub.add_argument("--nx", type=int, metavar="N", help="Grid cells along x.")
    sub.add_argument("--ny", type=int, metavar="N", help="Grid cells along y.")
    sub.add_argument("--workers", type=int, metavar="N", help="Worker processes (default: 1).")

    sub = subparsers.add_parser("separatrix", parents=[common], help="Trace the saddle's stable manifold.")
    sub.add_argument("--arc-length", type=float, metavar="L", help="Arc length per branch.")

    sub = subparsers.add_parser("scan", parents=[common], help="Sweep one parameter.")
    sub.add_argument("--param", type=str, choices=PARAMETER_NAMES, help="Parameter to sweep.")
    sub.add_argument("--lo", type=float, metavar="V", help="First sample value.")
    sub.add_argument("--hi", type=float, metavar="V", help="Last sample value.")
    sub.add_argument("--n", type=int, metavar="N", help="Number of samples.")
    sub.add_argument("--workers", type=int, metavar="N", help="Worker processes (default: 1).")

    sub = subparsers.add_parser("validate", parents=[common], help="Check influence-function axioms.")
    sub.add_argument("--kind", type=str, choices=KINDS, help="Influence function family.")
    sub.add_argument("--saturation", type=float, metavar="S", help="Saturation scale.")
    sub.add_argument("--grid-half-width", type=float, metavar="W", help="Check on [-W, W].")
    sub.add_argument("--grid-points", type=int, metavar="N", help="Number of grid points.")
    sub.add_argument("--tol", type=float, metavar="TOL", help="Tolerance for equality axioms.")

    sub = subparsers.add_parser("discrete", parents=[common], help="Iterate the round model.")
    sub.add_argument("--steps", type=int, metavar="N", help="Number of rounds.")
    sub.add_argument("--w0", type=float, metavar="W", help="Initial score of the wife.")
    sub.add_argument("--h0", type=float, metavar="H", help="Initial score of the husband.")

    sub = subparsers.add_parser("scenario", parents=[common], help="Simulate a named preset.")
    sub.add_argument(
        "--name",
        type=str,
        metavar="NAME",
        help=f"Preset name: {', '.join(preset_names())}.",
    )
    _add_trajectory_flags(sub)

    sub = subparsers.add_parser("certify", parents=[common], help="Report stability certificates.")
    sub.add_argument("--seed", type=int, metavar="SEED", help="Seed for Lyapunov sampling.")
    sub.add_argument("--samples", type=int, metavar="N", help="Number of Lyapunov samples.")
    return parser


def setup_logging(verbose: bool, quiet: bool) -> None:
    """Configure logging based on verbosity settings."""
    if quiet:
        level = logging.ERROR
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        stream=sys.stderr,
    )


def load_scenario(name: str) -> RunConfig:
    """Fully populated configuration for a named preset.

    Raises:
        ConfigError: If the name is unknown; the message lists the presets.
    """
    return parse_config({"scenario": name})


def _flag(args: argparse.Namespace, name: str) -> Any:
    return getattr(args, name, None)


def _changes(args: argparse.Namespace, mapping: dict[str, str]) -> dict[str, Any]:
    """Collect the flags that were given, keyed by the field they override."""
    return {
        field_name: _flag(args, flag)
        for flag, field_name in mapping.items()
        if _flag(args, flag) is not None
    }


def apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Apply CLI overrides to a config loaded from file.

    Args:
        config: Validated configuration.
        args: Parsed command-line arguments.

    Returns:
        New RunConfig with overrides applied.
    """
    changes: dict[str, Any] = {}
    integrator = _changes(args, {"t_end": "t_end", "method": "method"})
    if integrator:
        changes["integrator"] = replace(config.integrator, **integrator)
    state = _changes(args, {"x0": "x", "y0": "y"})
    if state:
        changes["initial_state"] = replace(config.initial_state, **state)
    grid = _changes(args, {"nx": "nx", "ny": "ny"})
    if grid:
        changes["grid"] = replace(config.grid, grid=replace(config.grid.grid, **grid))
    scan = _changes(args, {"param": "param", "lo": "lo", "hi": "hi", "n": "n"})
    if scan:
        changes["scan"] = replace(config.scan, **scan)
    arc = _changes(args, {"arc_length": "arc_length"})
    if arc:
        changes["separatrix"] = replace(config.separatrix, **arc)
    validate = _changes(
        args, {"grid_half_width": "grid_half_width", "grid_points": "grid_points", "tol": "tol"}
    )
    influence = _changes(args, {"kind": "kind", "saturation": "saturation"})
    if influence:
        validate["influence"] = replace(config.validate.influence, **influence)
    if validate:
        changes["validate"] = replace(config.validate, **validate)
    discrete = _changes(args, {"steps": "steps", "w0": "w0", "h0": "h0"})
    if discrete:
        changes["discrete"] = replace(config.discrete, **discrete)
    certify = _changes(args, {"seed": "seed", "samples": "samples"})
    if certify:
        changes["certify"] = replace(config.certify, **certify)
    output = _changes(args, {"out": "path", "format": "format"})
    if output:
        changes["output"] = replace(config.output, **output)
    if _flag(args, "workers") is not None:
        if args.workers < 1:
            raise ConfigError(f"--workers must be at least 1, got {args.workers}")
        changes["workers"] = args.workers
    return replace(config, **changes) if changes else config


def build_config(args: argparse.Namespace) -> RunConfig:
    """Read the config file (if any), select the scenario and apply flags.

    Raises:
        ConfigError: If the configuration is invalid.
        FileNotFoundError: If the configuration file doesn't exist.
    """
    data = read_document(args.config) if args.config else {}
    if args.command == "scenario":
        name = _flag(args, "name") or data.get("scenario")
        if not name:
            raise ConfigError(
                f"scenario needs --name; available: {', '.join(preset_names())}"
            )
        data = {**data, "scenario": name}
    return apply_overrides(parse_config(data), args)


def _emit(config: RunConfig, text: str, tabular: bool = True) -> None:
    """Write data to the configured output path, or stdout."""
    if tabular and config.output.format == "json":
        text = csv_to_json(text)
    if config.output.path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    atomic_write_text(resolve_output_path(config.output.path), text)


def cmd_simulate(config: RunConfig) -> int:
    """Integrate from the initial state and emit the trajectory."""
    trajectory = integrate(config.initial_state, config.parameter_schedule(), config.integrator)
    final = trajectory.final
    logger.info("Final state at t=%g: (%.6g, %.6g)", trajectory.times[-1], final.x, final.y)
    _emit(config, trajectory.to_csv())
    return EXIT_SUCCESS


def cmd_equilibria(config: RunConfig) -> int:
    """Emit the steady states as a JSON array."""
    p = config.require_model()
    states = find_steady_states(p)
    regime = count_regime(p, states)
    logger.info("Found %d steady states (case %d)", len(states), regime.case)
    _emit(config, to_json([s.as_dict() for s in states]), tabular=False)
    return EXIT_SUCCESS


def cmd_basin(config: RunConfig) -> int:
    """Write the label raster and its legend."""
    if config.output.path is None:
        raise ConfigError("basin requires --out (or output.path)")
    g = config.grid
    result = basin_map(
        config.require_model(), g.grid, g.tol, g.t_max, g.match_radius, config.workers
    )
    path = resolve_output_path(config.output.path)
    atomic_write_text(path, result.to_csv())
    atomic_write_text(path.with_name(f"{path.stem}.legend.json"), result.legend_json())
    return EXIT_SUCCESS


def cmd_separatrix(config: RunConfig) -> int:
    """Emit both branches of the saddle's stable manifold."""
    p = config.require_model()
    saddles = [s for s in find_steady_states(p) if s.stability == SADDLE]
    if not saddles:
        raise PreconditionError("No saddle: these parameters have no separatrix")
    _emit(config, separatrix(saddles[0], p, config.separatrix.arc_length).to_csv())
    return EXIT_SUCCESS


def cmd_scan(config: RunConfig) -> int:
    """Emit per-sample steady-state counts and classes."""
    s = config.scan
    result = scan_parameter(config.require_model(), s.param, s.lo, s.hi, s.n, config.workers)
    logger.info("%d fold intervals detected", len(result.folds))
    _emit(config, result.to_csv())
    return EXIT_SUCCESS


def cmd_validate(config: RunConfig) -> int:
    """Emit the axiom report; exit 1 if any axiom fails."""
    v = config.validate
    report = validate_axioms(v.influence, v.grid_half_width, v.grid_points, v.tol)
    _emit(config, to_json(report.as_dict()), tabular=False)
    if not report.passed:
        logger.error("Influence function fails the axioms")
        return EXIT_FAILURE
    return EXIT_SUCCESS


def cmd_discrete(config: RunConfig) -> int:
    """Emit the round-by-round scores."""
    d = config.discrete
    sequence = iterate(d.w0, d.h0, d.params, d.steps)
    for w, h in fixed_points(d.params):
        logger.info("Fixed point: W=%.6g H=%.6g", w, h)
    _emit(config, sequence_to_csv(sequence))
    return EXIT_SUCCESS


def cmd_certify(config: RunConfig) -> int:
    """Emit theorem flags and certificates; exit 1 if a Lyapunov check fails."""
    p = config.require_model()
    states = find_steady_states(p)
    weak = theorem1_applies(p, states)
    opposite = theorem2_applies(p)
    entries = []
    for ss in states:
        entry = ss.as_dict()
        entry["meeting_benefit"] = list(meeting_benefit(ss, p))
        entry["focus_condition"] = focus_condition(ss, p) if opposite and ss.is_stable else None
        entries.append(entry)
    report: dict[str, Any] = {
        "theorem1": weak,
        "theorem2": opposite,
        "divergence": divergence_certificate(p),
        "oscillation_condition": oscillation_condition_51(p),
        "relationship": describe_relationship(p).as_dict(),
        "steady_states": entries,
        "lyapunov": None,
    }
    exit_code = EXIT_SUCCESS
    if weak or opposite:
        c = config.certify
        lyapunov = lyapunov_descent_check(p, states[0], c.samples, seed=c.seed)
        report["lyapunov"] = lyapunov.as_dict()
        if not lyapunov.passed:
            logger.error("Lyapunov descent check failed: max derivative %.3g", lyapunov.max_derivative)
            exit_code = EXIT_FAILURE
    _emit(config, to_json(report), tabular=False)
    return exit_code


HANDLERS: dict[str, Callable[[RunConfig], int]] = {
    "simulate": cmd_simulate,
    "equilibria": cmd_equilibria,
    "basin": cmd_basin,
    "separatrix": cmd_separatrix,
    "scan": cmd_scan,
    "validate": cmd_validate,
    "discrete": cmd_discrete,
    "scenario": cmd_simulate,
    "certify": cmd_certify,
}


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, run one subcommand and return its exit code.

    Argument errors exit through argparse with status 2.
    """
    parser = create_parser()
    args = parser.parse_args(argv)

    setup_logging(args.verbose, args.quiet)

    try:
        config = build_config(args)
    except (ConfigError, FileNotFoundError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR

    try:
        return HANDLERS[args.command](config)
    except (ConfigError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, RuntimeError, ArithmeticError) as e:
        logger.error("Computation failed: %s", e)
        return EXIT_NUMERICAL


def main() -> None:
    """Main entry point for the CLI."""
    sys.exit(run())

# -*- encoding: utf-8 -*-
"""
gricci CLI - batch front-end for the flow, diagram and Monte-Carlo engines.

Settings are layered: RunConfig defaults, then --config FILE (JSON), then
command-line flags. Results go to stdout as a table (or JSON with --json) and
to a run directory under --out with a manifest.

Exit codes: 0 success, 1 validation failure, 2 numeric failure. Errors are
printed to stderr as {"error", "message", ...details} JSON.

Usage:
    gricci ricci --preset su2_double --metric subalgebra
    gricci flow --preset abelian:2,2 --metric random:seed=7 --s 0:1
    gricci verify-lemma --l1 1 --l2 2 --n 1e7 --seed 1 --json
"""

import argparse
import json
import logging
import sys
import time
from typing import Optional, Sequence

import numpy as np

from gricci.cli.commands import COMMANDS, Outcome
from gricci.cli.persist import RunRecorder, to_jsonable
from gricci.config import RunConfig
from gricci.exceptions import ConfigError, GricciError, NumericError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2

CUTOFF_HELP = "cutoff scale expression in x, y (and z on the sphere): numbers, + - * / ^, exp, log"


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(":", ",").split(",") if v.strip()]


def _count(text: str) -> int:
    """Sample counts accept 1e7 style input."""
    return int(float(text))


def build_parser() -> argparse.ArgumentParser:
    """
    Parser with one subparser per command.

    Every option defaults to None so that only flags given on the command
    line override the config file.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output directory (default GRICCI_OUT or runs)")
    common.add_argument("--threads", type=int, help="worker threads (default GRICCI_THREADS)")
    common.add_argument("--budget", type=float, help="wall-time budget in seconds for Monte-Carlo runs")
    common.add_argument("--batch-size", dest="batch_size", type=int, help="Monte-Carlo batch size")
    common.add_argument("--json", action="store_true", help="machine-readable stdout")
    common.add_argument("--seed", type=int)

    structure = argparse.ArgumentParser(add_help=False)
    structure.add_argument("--preset", "--algebra", dest="algebra", help="abelian:p,q, su2, su2_double or file:PATH")
    structure.add_argument("--level", type=float)
    structure.add_argument(
        "--metric", help="canonical, subalgebra, random:seed=S, rotated:i,j,theta or file:PATH"
    )

    courant = argparse.ArgumentParser(add_help=False)
    courant.add_argument("--courant", help="lie[:M], exact:M or file:PATH")
    courant.add_argument("--x", type=_floats, help="base point, comma separated")

    cutoffs = argparse.ArgumentParser(add_help=False)
    cutoffs.add_argument("--l1", help=CUTOFF_HELP)
    cutoffs.add_argument("--l2", help=CUTOFF_HELP)
    cutoffs.add_argument("--epsilon", type=float)

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--n", type=_count, help="sample count")

    parser = argparse.ArgumentParser(prog="gricci", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("ricci", parents=[common, structure], help="T_D and the generalized Ricci tensor")
    beta = sub.add_parser("beta", parents=[common, structure, cutoffs], help="one-loop beta function")
    beta.add_argument("--hbar", type=float)

    flow = sub.add_parser("flow", parents=[common, structure], help="integrate the flow, write trajectory.csv")
    flow.add_argument("--s", dest="s_span", type=_floats, help="span s0:s1 of s = log eps")
    flow.add_argument("--ds", type=float)
    flow.add_argument("--ds-floor", dest="ds_floor", type=float)
    flow.add_argument("--hbar", type=float)
    flow.add_argument("--scheme", choices=["lie_euler", "rkmk4"])
    flow.add_argument("--direction", choices=["toward_ir", "toward_uv"])

    sub.add_parser("courant-ricci", parents=[common, structure, courant], help="T_D' of a Courant sigma model")
    master = sub.add_parser("master-check", parents=[common, structure, courant], help="check {C, C} = 0")
    master.add_argument("--samples", type=int, help="number of base points")

    lemma = sub.add_parser("verify-lemma", parents=[common, cutoffs, sampling], help="eye divergence integral")
    lemma.add_argument("--pair", help="form degrees: 1,1 0,2 or 2,0")
    sub.add_parser("verify-courant", parents=[common, cutoffs, sampling], help="anchor-loop divergence integral")
    scan = sub.add_parser("scan-convergence", parents=[common, sampling], help="cutoff scaling of n-vertex loops")
    scan.add_argument("--vertices", type=int)
    scan.add_argument("--epsilons", type=_floats, help="cutoff grid, comma separated")

    diagram = sub.add_parser("diagram", parents=[common, structure], help="automorphisms and tensor of a graph")
    diagram.add_argument("--graph", help="preset name or file:PATH")
    diagram.add_argument(
        "--all-automorphisms", dest="fix_leaves", action="store_false", default=None,
        help="count automorphisms that move leaves",
    )

    sub.add_parser("validate", parents=[common, structure], help="check algebra and metric axioms")
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True
    )


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then the flags given."""
    base = RunConfig.from_file(args.config) if args.config else RunConfig()
    skip = {"verbose", "config", "json", "subcommand"}
    overrides = {k: v for k, v in vars(args).items() if k not in skip}
    return base.with_overrides(subcommand=args.subcommand, **overrides)


def _format(value) -> str:
    if isinstance(value, np.ndarray):
        return "\n" + np.array2string(value, precision=6, suppress_small=True)
    if isinstance(value, dict):
        return json.dumps(to_jsonable(value), sort_keys=True)
    return str(to_jsonable(value))


def print_outcome(outcome: Outcome, as_json: bool) -> None:
    if as_json:
        print(json.dumps(to_jsonable(outcome.result), sort_keys=True))
        return
    width = max((len(k) for k in outcome.result), default=0)
    for key, value in outcome.result.items():
        print(f"{key:<{width}}  {_format(value)}")


def _fail(error: GricciError, recorder: Optional[RunRecorder], start: float) -> int:
    payload = error.to_dict()
    print(json.dumps(to_jsonable(payload), sort_keys=True), file=sys.stderr)
    if recorder is not None:
        recorder.write_manifest(time.monotonic() - start, status="error", error=to_jsonable(payload))
    return EXIT_NUMERIC if isinstance(error, NumericError) else EXIT_VALIDATION


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name (default sys.argv[1:])

    Returns:
        Exit code
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    start = time.monotonic()
    recorder = None
    try:
        config = resolve_config(args)
        if config.subcommand not in COMMANDS:
            raise ConfigError(f"unknown subcommand {config.subcommand!r}", ["subcommand"])
        recorder = RunRecorder(config, argv)
        outcome = COMMANDS[config.subcommand](config)
        if outcome.trajectory is not None:
            recorder.write_trajectory(*outcome.trajectory)
        if outcome.document is not None:
            recorder.write_document(outcome.document)
        recorder.write_result(outcome.result)
        if isinstance(outcome.error, GricciError):
            return _fail(outcome.error, recorder, start)
        recorder.write_manifest(time.monotonic() - start, status="ok" if outcome.passed else "failed")
        print_outcome(outcome, args.json)
        return EXIT_OK if outcome.passed else EXIT_VALIDATION
    except GricciError as e:
        return _fail(e, recorder, start)


def main() -> None:
    """Console entry point."""
    sys.exit(run())

"""
Command-line entry point.

Every subcommand maps onto one Experiment stage and works on an artifact
directory; `gen-potential` seeds the directory from a config file and the
later subcommands read their inputs back from it.

Example Usage:
    ```bash
    regland gen-potential --config example/localization.toml --output out/localization
    regland eigen --dir out/localization
    regland landscape --dir out/localization
    regland predict --dir out/localization
    regland residuals --dir out/localization --sweep 1e-6..1e-4
    regland report --dir out/localization
    ```
"""

import argparse
import logging
import os
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

from ..utils import RegLandError
from ._exceptions import MissingArtifactError
from .config import ExperimentConfig, load_config
from .experiment import CONFIG_FILE, Experiment, write_kernel_profiles
from .report import write_report

logger = logging.getLogger("regland")

DEFAULT_SWEEP_POINTS = 9


def parse_sweep(text: str, points: int = DEFAULT_SWEEP_POINTS) -> list[float]:
    """
    "a..b" → `points` log-spaced scales from max(a, b) down to min(a, b);
    "a,b,c" → the listed scales.
    """
    try:
        if ".." in text:
            low, high = sorted(float(part) for part in text.split(".."))
            if low <= 0:
                raise ValueError(text)
            return [float(t) for t in np.geomspace(high, low, points)]
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid sweep {text!r}, expected a..b or a,b,c") from exc


def _directory_config(args) -> ExperimentConfig:
    directory = Path(args.dir)
    path = directory / CONFIG_FILE
    if not path.exists():
        raise MissingArtifactError(str(path), "gen-potential")
    return load_config(path).model_copy(update={"output_dir": str(directory)})


def _experiment(args, **overrides) -> Experiment:
    config = _directory_config(args)
    overrides = {key: value for key, value in overrides.items() if value is not None}
    if overrides:
        config = ExperimentConfig(**{**config.model_dump(), **overrides})
    return Experiment(config, getattr(args, "workers", None))


def cmd_run(args) -> int:
    config = load_config(Path(args.config))
    if args.output:
        config = config.model_copy(update={"output_dir": args.output})
    passed = Experiment(config, args.workers).run()
    logger.info(f"Artifacts in {config.directory}, gates {'passed' if passed else 'FAILED'}")
    return 0 if passed else 1


def cmd_gen_potential(args) -> int:
    config = load_config(Path(args.config))
    if args.output:
        config = config.model_copy(update={"output_dir": args.output})
    Experiment(config).generate()
    return 0


def cmd_eigen(args) -> int:
    _experiment(args, k=args.k).eigen()
    return 0


def cmd_landscape(args) -> int:
    _experiment(args).landscape()
    return 0


def cmd_regularize(args) -> int:
    experiment = _experiment(args, ts=args.t, t_policy="explicit" if args.t else None)
    experiment.regularize()
    return 0


def cmd_residuals(args) -> int:
    experiment = _experiment(args)
    sweep = parse_sweep(args.sweep, args.points) if args.sweep else None
    experiment.residuals(sweep)
    experiment.plots()
    return 0


def cmd_feynman_kac(args) -> int:
    experiment = _experiment(args)
    experiment.feynman_kac(args.paths)
    checks = experiment.state.mc_checks
    return 0 if all(check.passed for check in checks) else 1


def cmd_agmon(args) -> int:
    _experiment(args).agmon()
    return 0


def cmd_predict(args) -> int:
    _experiment(args).predict()
    return 0


def cmd_report(args) -> int:
    experiment = _experiment(args)
    experiment.require_potential()
    experiment.load_available()
    experiment.plots()
    path = write_report(experiment.directory)
    logger.info(f"Report at {path}")
    return 0


def cmd_kernel(args) -> int:
    for path in write_kernel_profiles(Path(args.output), args.t):
        logger.info(f"Wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regland",
        description="Regularized potentials, landscape functions and Feynman-Kac checks",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def with_dir(name: str, help: str):
        sub = subparsers.add_parser(name, help=help)
        sub.add_argument("--dir", required=True, help="artifact directory")
        return sub

    sub = subparsers.add_parser("run", help="full pipeline of one config")
    sub.add_argument("--config", required=True, help="TOML config or manifest")
    sub.add_argument("--output", help="override the artifact directory")
    sub.add_argument("--workers", type=int, default=None, help="Monte Carlo threads")
    sub.set_defaults(handler=cmd_run)

    sub = subparsers.add_parser("gen-potential", help="potential and rhs CSVs")
    sub.add_argument("--config", required=True, help="TOML config")
    sub.add_argument("--output", help="override the artifact directory")
    sub.set_defaults(handler=cmd_gen_potential)

    sub = with_dir("eigen", "lowest eigenpairs")
    sub.add_argument("--k", type=int, default=None, help="number of eigenpairs")
    sub.set_defaults(handler=cmd_eigen)

    with_dir("landscape", "landscape function and effective potentials").set_defaults(
        handler=cmd_landscape
    )

    sub = with_dir("regularize", "V_t per scale")
    sub.add_argument("--t", type=float, nargs="+", default=None, help="scales")
    sub.set_defaults(handler=cmd_regularize)

    sub = with_dir("residuals", "regularized-equation residuals")
    sub.add_argument("--sweep", default=None, help='scales, "1e-6..1e-4" or "1e-4,5e-5"')
    sub.add_argument("--points", type=int, default=DEFAULT_SWEEP_POINTS, help="points of a range sweep")
    sub.set_defaults(handler=cmd_residuals)

    sub = with_dir("feynman-kac", "Monte Carlo checks")
    sub.add_argument("--paths", type=int, default=None, help="paths per ensemble")
    sub.add_argument("--workers", type=int, default=None, help="threads")
    sub.set_defaults(handler=cmd_feynman_kac)

    with_dir("agmon", "Agmon decay envelopes").set_defaults(handler=cmd_agmon)
    with_dir("predict", "localization match table").set_defaults(handler=cmd_predict)
    with_dir("report", "HTML index of the artifacts").set_defaults(handler=cmd_report)

    sub = subparsers.add_parser("kernel", help="radial kernel profiles")
    sub.add_argument("--output", required=True, help="output directory")
    sub.add_argument("--t", type=float, nargs="+", default=[1e-4, 1e-3, 1e-2], help="scales")
    sub.set_defaults(handler=cmd_kernel)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    logging.basicConfig(
        level=os.getenv("REGLAND_LOG_LEVEL", "INFO").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        logger.error(f"[config] {exc}")
        return 2
    except RegLandError as exc:
        logger.error(exc.qualified())
        return 1

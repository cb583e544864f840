from __future__ import annotations

import argparse
import sys

from lilrates import __version__
from lilrates.constants import SEED_ENV, ExitCode, Global, logger

COMMON_DESTS = (
    "command",
    "config",
    "output",
    "cache_dir",
    "seed",
    "workers",
    "show_cache",
    "debug",
)


def epsilon_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers: {text!r}"
        ) from exc


def add_series_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--regime", choices=["thm1", "thm2"])
    parser.add_argument("--a", type=float, help="(log n)^a weight exponent")
    parser.add_argument("--b", type=float, help="(loglog n)^b weight exponent")
    parser.add_argument("--tau", type=float, help="drift limit a_n·loglog n")


def add_dist_arguments(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--dist", choices=["normal", "rademacher", "uniform", "pareto"]
    )
    parser.add_argument("--sigma", type=float, help="Normal standard deviation")
    parser.add_argument(
        "--half-width", type=float, dest="half_width", help="Uniform(-h, h) width"
    )
    parser.add_argument("--alpha", type=float, help="Pareto tail index (>= 2)")


def get_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        dest="config",
        help="YAML file of parameter values. Command-line flags take precedence",
    )
    common.add_argument(
        "--output",
        dest="output",
        help="Write OUTPUT.csv (payload) and OUTPUT.json (envelope)",
    )
    common.add_argument(
        "--cache-dir",
        dest="cache_dir",
        help="Directory to cache Monte Carlo results in. "
        "Cache Policy can be configured in CACHE_DIR/policy.yaml",
    )
    common.add_argument(
        "--show-cache",
        action="store_true",
        dest="show_cache",
        help="Print a summary of the Cache's content",
    )
    common.add_argument(
        "--seed",
        type=int,
        dest="seed",
        help=f"Master seed. Defaults to ${SEED_ENV} then 0",
    )
    common.add_argument(
        "--workers",
        type=int,
        default=1,
        dest="workers",
        help="Threads for sweeps and simulations (results do not depend on it)",
    )
    common.add_argument("-D", "--debug", action="store_true", dest="debug")

    parser = argparse.ArgumentParser(
        prog="lilrates",
        description="Precise rates in the law of the iterated logarithm: "
        "limit constants, series sweeps and Monte Carlo diagnostics",
    )
    parser.add_argument("-V", "--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    constants = subparsers.add_parser(
        "constants", parents=[common], help="Limit constants of both regimes"
    )
    add_series_arguments(constants)
    constants.add_argument("--stat", choices=["max", "abs", "both"])

    sweep = subparsers.add_parser(
        "sweep", parents=[common], help="Normalized series toward the critical epsilon"
    )
    add_series_arguments(sweep)
    sweep.add_argument("--drift", choices=["zero", "canonical", "bounded"])
    sweep.add_argument("--model", choices=["abs", "sup"])
    sweep.add_argument("--grid", type=epsilon_list, help="E1,E2,… (decreasing)")
    sweep.add_argument("--tol", type=float, help="relative tolerance of each row")
    sweep.add_argument("--splice", type=int, help="initial head/tail splice index")

    simulate = subparsers.add_parser(
        "simulate", parents=[common], help="Monte Carlo tails and empirical series"
    )
    add_dist_arguments(simulate)
    add_series_arguments(simulate)
    simulate.add_argument("--n", type=int, help="walk length")
    simulate.add_argument("--threshold", type=float)
    simulate.add_argument("--epsilon", type=float)
    simulate.add_argument("--stat", choices=["max", "abs"])
    simulate.add_argument("--paths", type=int)
    simulate.add_argument(
        "--series",
        action="store_true",
        default=None,
        help="Assemble the empirical series instead of a single tail",
    )
    simulate.add_argument("--drift", choices=["zero", "canonical", "bounded"])
    simulate.add_argument("--n-min", type=int, dest="n_min")
    simulate.add_argument("--n-max", type=int, dest="n_max")
    simulate.add_argument("--ratio", type=float, help="geometric grid ratio")
    simulate.add_argument("--grid-tol", type=float, dest="grid_tol")

    truncation = subparsers.add_parser(
        "truncation", parents=[common], help="Truncated variance and Δ_n diagnostics"
    )
    add_dist_arguments(truncation)
    truncation.add_argument("--p", type=float, help="truncation exponent")
    truncation.add_argument("--n", type=int)
    truncation.add_argument("--paths", type=int)
    truncation.add_argument("--epsilon", type=float)
    truncation.add_argument("--tau", type=float)

    moments = subparsers.add_parser(
        "moments", parents=[common], help="Moment conditions of the increment law"
    )
    add_dist_arguments(moments)
    moments.add_argument("--a", type=float)
    moments.add_argument("--b", type=float)
    moments.add_argument("--t-max", type=float, dest="t_max")
    moments.add_argument("--t-points", type=int, dest="t_points")

    return parser


def run(argv: list[str] | None = None) -> int:
    kwargs = dict(get_parser().parse_args(argv)._get_kwargs())
    Global._debug = kwargs.get("debug", False)

    # purposedly import after setting debug
    from lilrates.errors import ConfigError
    from lilrates.runner import Runner

    app = None
    try:
        app = Runner(
            command=kwargs["command"],
            config=kwargs["config"],
            output=kwargs["output"],
            cache_dir=kwargs["cache_dir"],
            seed=kwargs["seed"],
            workers=kwargs["workers"],
            show_cache=kwargs["show_cache"],
            debug=kwargs["debug"],
            params={
                key: value
                for key, value in kwargs.items()
                if key not in COMMON_DESTS
            },
        )
        return app.run()
    except ConfigError as exc:
        logger.critical(str(exc))
        return ExitCode.config
    except Exception as exc:
        if kwargs.get("debug"):
            logger.exception(exc)
        logger.critical(str(exc))
        return ExitCode.unexpected
    finally:
        if app is not None:
            try:
                app.halt()
            except Exception as exc:
                logger.debug(f"Errors cleaning-up: {exc}")
        logger.terminate()


def main():
    sys.exit(run())


if __name__ == "__main__":
    sys.exit(main())

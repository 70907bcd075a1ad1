import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from typing_extensions import TypedDict

from constants import (
    CLUSTER_TOL,
    DEFAULT_PRIME,
    DEFAULT_TRIALS,
    LOG_FORMAT,
    MAX_ITERATIONS,
    PRIME_ENV_VAR,
    SCALAR_COMPLEX,
    SCALAR_PRIME,
    SCALAR_RATIONAL,
    SEARCH_STARTS
)
from exceptions import FormatError, PreconditionError
from file_data_io import FileDataIO
from version import __version__
from .helpers import CommandRunner

LOGGER = logging.getLogger(__name__)

OUTPUT_JSON = "json"
OUTPUT_CSV = "csv"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

class RunConfig(TypedDict):
    """
    Everything that determines a report.

    Attributes:
        command (str): The subcommand.
        seed (int): The root seed.
        prime (int): The modulus.
        trials (int): Trials of every count.
        jobs (int): Worker processes.
        out (Optional[str]): Report path; stdout when None.
        output_format (str): "json" or "csv".
        log_level (str): The logging level.
        options (Dict[str, Any]): The subcommand flags.
    """
    command: str
    seed: int
    prime: int
    trials: int
    jobs: int
    out: Optional[str]
    output_format: str
    log_level: str
    options: Dict[str, Any]


class WaringLabCli:
    """
    Provides static methods for the command line: parsing flags (also from
    "@file" arguments, one flag per line), running a subcommand and writing
    its report.

    Static Methods:
        default_prime: The modulus from the environment or the default.
        build_parser: The argparse parser with all subcommands.
        run_config: The RunConfig of parsed arguments.
        run: Parses, runs and reports; returns the exit status.
    """
    @staticmethod
    def default_prime() -> int:
        """
        Raises:
            FormatError: If the environment variable is not an integer.
        """
        value = os.environ.get(PRIME_ENV_VAR)
        if value is None:
            return DEFAULT_PRIME
        try:
            return int(value)
        except ValueError as e:
            raise FormatError(
                f"Failed to read {PRIME_ENV_VAR}: {value!r} is not an integer."
                ).with_traceback(e.__traceback__)

    @staticmethod
    def build_parser(default_prime: int = DEFAULT_PRIME) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--seed", type=int, default=0, help="Root seed")
        common.add_argument(
            "--prime", type=int, default=default_prime,
            help=f"Modulus of exact counts (env {PRIME_ENV_VAR})"
            )
        common.add_argument(
            "--trials", type=int, default=DEFAULT_TRIALS,
            help="Point draws before a deficiency is reported"
            )
        common.add_argument("--jobs", type=int, default=1, help="Worker processes")
        common.add_argument("--out", default=None, help="Report path (stdout if absent)")
        common.add_argument(
            "--output-format", choices=[OUTPUT_JSON, OUTPUT_CSV], default=None,
            help="Report format (csv for enumerate, json otherwise)"
            )
        common.add_argument(
            "--json", dest="json_output", action="store_true",
            help="Same as --output-format json"
            )
        common.add_argument(
            "--csv", dest="csv_output", action="store_true",
            help="Same as --output-format csv"
            )
        common.add_argument(
            "--log-level", default="WARNING",
            choices=["DEBUG", "INFO", "WARNING", "ERROR"]
            )

        parser = argparse.ArgumentParser(
            prog="waring_lab",
            description="Defectivity, Horace certificates and decomposition "
                        "counts for partially symmetric tensors",
            fromfile_prefix_chars="@",
            )
        parser.add_argument("--version", action="version", version=__version__)
        subparsers = parser.add_subparsers(dest="command", required=True)

        enumerate_parser = subparsers.add_parser(
            "enumerate", parents=[common], help="List perfect cases"
            )
        family = enumerate_parser.add_mutually_exclusive_group(required=True)
        family.add_argument("--theorem", type=int, choices=[1, 2])
        family.add_argument("--corollary", type=int, choices=[2, 3])
        enumerate_parser.add_argument("--dmax", type=int, required=True)
        enumerate_parser.add_argument("--n", type=int, default=2)
        enumerate_parser.add_argument("--r", type=int, default=1)
        enumerate_parser.add_argument(
            "--all", action="store_true",
            help="Keep three-factor cases failing the degree assumption"
            )

        defect_parser = subparsers.add_parser(
            "defect", parents=[common], help="Dimension of the k-th secant variety"
            )
        defect_parser.add_argument("--format", required=True, help="r=..;d=..")
        defect_parser.add_argument("--k", type=int, required=True)
        defect_parser.add_argument(
            "--kind", default=SCALAR_PRIME,
            choices=[SCALAR_PRIME, SCALAR_RATIONAL, SCALAR_COMPLEX]
            )

        weak_parser = subparsers.add_parser(
            "weakdefect", parents=[common],
            help="Singularities of a form double at general points"
            )
        weak_parser.add_argument("--format", required=True)
        weak_parser.add_argument("--points", type=int, required=True)
        weak_parser.add_argument("--starts", type=int, default=SEARCH_STARTS)

        horace_parser = subparsers.add_parser(
            "horace", parents=[common], help="One Horace step"
            )
        horace_parser.add_argument("--format", required=True)
        horace_parser.add_argument("--l", type=int, required=True)
        horace_parser.add_argument("--h", type=int, required=True)
        horace_parser.add_argument("--no-residual", action="store_true")

        certify_parser = subparsers.add_parser(
            "certify", parents=[common], help="Degeneration certificate"
            )
        certify_parser.add_argument("--format", required=True)
        certify_parser.add_argument("--s", type=int, required=True)
        certify_parser.add_argument("--horace-steps", action="store_true")
        certify_parser.add_argument("--cross-check", action="store_true")
        certify_parser.add_argument("--starts", type=int, default=SEARCH_STARTS)

        decompose_parser = subparsers.add_parser(
            "decompose", parents=[common], help="Count decompositions"
            )
        decompose_parser.add_argument("--format", default=None)
        decompose_parser.add_argument("--k", type=int, required=True)
        decompose_parser.add_argument("--starts", type=int, default=SEARCH_STARTS)
        decompose_parser.add_argument("--tol", type=float, default=CLUSTER_TOL)
        decompose_parser.add_argument(
            "--max-iterations", type=int, default=MAX_ITERATIONS
            )
        decompose_parser.add_argument("--target", default=None, help="Tensor file")
        decompose_parser.add_argument("--save-target", default=None)

        pipeline_parser = subparsers.add_parser(
            "pipeline", parents=[common], help="Chained checks of a perfect case"
            )
        which = pipeline_parser.add_mutually_exclusive_group(required=True)
        which.add_argument("--theorem", type=int, choices=[1])
        which.add_argument("--corollary", type=int, choices=[2, 3])
        pipeline_parser.add_argument("--d", required=True, help="Degrees, e.g. 4,5")
        pipeline_parser.add_argument("--r", type=int, default=None)
        pipeline_parser.add_argument("--starts", type=int, default=SEARCH_STARTS)
        pipeline_parser.add_argument("--nu-starts", type=int, default=SEARCH_STARTS)
        return parser

    @staticmethod
    def run_config(args: argparse.Namespace) -> RunConfig:
        shared = {
            "command", "seed", "prime", "trials", "jobs", "out",
            "output_format", "log_level", "json_output", "csv_output"
        }
        output_format = args.output_format
        if output_format is None and args.json_output:
            output_format = OUTPUT_JSON
        elif output_format is None and args.csv_output:
            output_format = OUTPUT_CSV
        elif output_format is None:
            output_format = OUTPUT_CSV if args.command == "enumerate" else OUTPUT_JSON
        config: RunConfig = {
            "command": args.command,
            "seed": args.seed,
            "prime": args.prime,
            "trials": args.trials,
            "jobs": args.jobs,
            "out": args.out,
            "output_format": output_format,
            "log_level": args.log_level,
            "options": {
                k: v for (k, v) in sorted(vars(args).items()) if k not in shared
            },
        }
        return config

    @staticmethod
    def run(argv: Optional[List[str]] = None) -> int:
        """
        Parses argv, runs the subcommand and writes the report.

        Parameters:
            argv (Optional[List[str]]): The arguments; sys.argv[1:] if None.

        Returns:
            int: 0 when a verdict was produced, 2 on usage, format or
                precondition errors (no report), 1 on other errors.
        """
        try:
            parser = WaringLabCli.build_parser(WaringLabCli.default_prime())
        except FormatError as e:
            sys.stderr.write(f"{e}\n")
            return EXIT_USAGE
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code == 0 else EXIT_USAGE
        logging.basicConfig(level=args.log_level, format=LOG_FORMAT)
        config = WaringLabCli.run_config(args)
        LOGGER.info("Running %s with seed %d", config["command"], config["seed"])
        try:
            result, rows = getattr(CommandRunner, config["command"])(args)
        except (FormatError, PreconditionError) as e:
            LOGGER.error("%s", e)
            return EXIT_USAGE
        except Exception as e:
            LOGGER.exception("Failed to run %s: %s", config["command"], e)
            return EXIT_ERROR

        try:
            if config["output_format"] == OUTPUT_CSV:
                if config["out"] is None:
                    FileDataIO.write_csv_rows(sys.stdout, rows)
                else:
                    FileDataIO.write_csv(config["out"], rows)
            else:
                report = {
                    "config": config,
                    "version": __version__,
                    "prime": config["prime"],
                    "seed": config["seed"],
                    "result": result,
                }
                if config["out"] is None:
                    sys.stdout.write(FileDataIO.dumps(report) + "\n")
                else:
                    FileDataIO.write_json(config["out"], report)
        except Exception as e:
            LOGGER.error("%s", e)
            return EXIT_ERROR
        return EXIT_OK


def main() -> None:
    sys.exit(WaringLabCli.run())

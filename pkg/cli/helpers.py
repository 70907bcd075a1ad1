import argparse
import logging
from typing import Any, Dict, List, Tuple

from constants import SCALAR_COMPLEX, SCALAR_PRIME
from exceptions import FormatError, PreconditionError
from file_data_io import FileDataIO
from horace import CorollaryPipeline, HoraceCertifier
from interpolation import InterpolationSystem
from multipoly import MultiPoly
from perfect_case_enumerator import PerfectCaseEnumerator
from segre_format import SegreFormat
from tangency import TangencyAnalyzer
from waring import WaringDecomposer

LOGGER = logging.getLogger(__name__)

Rows = List[Dict[str, Any]]


class CommandRunner:
    """
    Provides static methods running one subcommand from parsed arguments.
    Every method returns the result embedded in the report and the rows
    written when CSV output is requested.

    Static Methods:
        flat_row: Keeps the scalar fields of a result.
        parse_degrees: Reads a comma separated degree list.
        enumerate: Perfect cases of a family.
        defect: Secant variety dimension.
        weakdefect: Singularities of a form double at general points.
        horace: One Horace step.
        certify: Degeneration certificate.
        decompose: Multi-start count of decompositions.
        pipeline: Chained checks of a perfect case.
    """
    @staticmethod
    def flat_row(result: Dict[str, Any]) -> Dict[str, Any]:
        return {
            k: v for (k, v) in result.items()
            if v is None or isinstance(v, (str, int, float, bool))
        }

    @staticmethod
    def parse_degrees(text: str) -> List[int]:
        try:
            return [int(x) for x in text.split(",") if x.strip()]
        except ValueError as e:
            raise FormatError(
                f"Failed to parse degrees: {text!r} is not a comma separated "
                "list of integers."
                ).with_traceback(e.__traceback__)

    @staticmethod
    def enumerate(args: argparse.Namespace) -> Tuple[Any, Rows]:
        cases = []
        if args.theorem == 1:
            cases = PerfectCaseEnumerator.enumerate_theorem_one(args.dmax)
        elif args.theorem == 2:
            cases = PerfectCaseEnumerator.enumerate_theorem_two(
                args.n, args.r, args.dmax
                )
        elif args.corollary == 2:
            cases = PerfectCaseEnumerator.enumerate_corollary_two(args.dmax)
        elif args.corollary == 3:
            cases = PerfectCaseEnumerator.enumerate_corollary_three(
                args.dmax, require_assumption=not args.all
                )
        else:
            raise PreconditionError(
                "Failed to enumerate: one of --theorem or --corollary is needed."
                )
        rows = PerfectCaseEnumerator.table_rows(cases)
        return {"count": len(rows), "cases": rows}, rows

    @staticmethod
    def defect(args: argparse.Namespace) -> Tuple[Any, Rows]:
        fmt = SegreFormat.parse(args.format)
        verdict = InterpolationSystem.secant_dim(
            fmt, args.k, args.trials, args.seed, args.kind,
            args.prime if args.kind == SCALAR_PRIME else None
            )
        return verdict, [CommandRunner.flat_row(verdict)]

    @staticmethod
    def weakdefect(args: argparse.Namespace) -> Tuple[Any, Rows]:
        fmt = SegreFormat.parse(args.format)
        report = TangencyAnalyzer.check_weak_defectivity(
            fmt, args.points, args.seed, args.starts, args.jobs
            )
        row = CommandRunner.flat_row(report)
        row["extra_singularities"] = len(report["extra_singularities"])
        row["hessian_ok"] = all(report["hessian_ok"])
        return report, [row]

    @staticmethod
    def horace(args: argparse.Namespace) -> Tuple[Any, Rows]:
        fmt = SegreFormat.parse(args.format, normalize=False)
        step = HoraceCertifier.horace_step(
            fmt, args.l, args.h, args.seed, args.trials, args.prime,
            residual_check=not args.no_residual
            )
        rows = [
            dict(CommandRunner.flat_row(verdict), hypothesis=name,
                 holds=step["hypotheses_ok"][name])
            for (name, verdict) in step["hypothesis_verdicts"].items()
        ]
        rows.append(dict(
            CommandRunner.flat_row(step["conclusion_verdict"]),
            hypothesis="conclusion", holds=step["conclusion_verdict"]["independent"]
            ))
        return step, rows

    @staticmethod
    def certify(args: argparse.Namespace) -> Tuple[Any, Rows]:
        fmt = SegreFormat.parse(args.format, normalize=False)
        certificate = HoraceCertifier.certify_weakly(
            fmt, args.s, args.seed, args.trials, args.prime,
            horace_steps=args.horace_steps, cross_check=args.cross_check,
            starts=args.starts, jobs=args.jobs
            )
        rows = [
            dict(
                CommandRunner.flat_row(node),
                status=node["verdict"]["status"],
                rank=node["verdict"]["rank"],
                rows=node["verdict"]["rows"],
                )
            for node in certificate["nodes"]
        ]
        return certificate, rows

    @staticmethod
    def decompose(args: argparse.Namespace) -> Tuple[Any, Rows]:
        target = None
        if args.target:
            target = FileDataIO.load_tensor(args.target)
            if target["kind"] != SCALAR_COMPLEX:
                target = MultiPoly.section(
                    target["format"],
                    [complex(float(c)) for c in target["coeffs"]],
                    SCALAR_COMPLEX
                    )
            fmt = target["format"]
        elif args.format:
            fmt = SegreFormat.parse(args.format)
        else:
            raise PreconditionError(
                "Failed to decompose: one of --format or --target is needed."
                )
        if args.save_target:
            if target is not None:
                raise PreconditionError(
                    "Failed to decompose: --save-target needs a synthesized target."
                    )
            synthesized, _ = WaringDecomposer.synthesize_target(fmt, args.k, args.seed)
            FileDataIO.save_tensor(args.save_target, synthesized)
        report = WaringDecomposer.nu_experiment(
            fmt, args.k, args.starts, args.seed, args.tol, args.jobs,
            args.max_iterations, target
            )
        return report, [CommandRunner.flat_row(report)]

    @staticmethod
    def pipeline(args: argparse.Namespace) -> Tuple[Any, Rows]:
        degrees = CommandRunner.parse_degrees(args.d)
        if args.theorem == 1:
            if args.r is None or len(degrees) != 1:
                raise PreconditionError(
                    "Failed to run pipeline: --theorem 1 needs --r and one degree."
                    )
            report = CorollaryPipeline.theorem_one_pipeline(
                args.r, degrees[0], args.seed, args.trials, args.prime,
                args.starts, args.nu_starts, args.jobs
                )
        elif args.corollary in (2, 3):
            if len(degrees) != args.corollary:
                raise PreconditionError(
                    f"Failed to run pipeline: --corollary {args.corollary} needs "
                    f"{args.corollary} degrees, got {len(degrees)}."
                    )
            fmt = SegreFormat.create([1] * args.corollary, degrees)
            if args.corollary == 2:
                cases = PerfectCaseEnumerator.enumerate_corollary_two(max(degrees))
            else:
                cases = PerfectCaseEnumerator.enumerate_corollary_three(
                    max(degrees), require_assumption=False
                    )
            case = CorollaryPipeline.find_case(cases, fmt)
            if not case["assumption1_ok"]:
                LOGGER.warning(
                    "%s fails the degree assumption", SegreFormat.label(fmt)
                    )
            report = CorollaryPipeline.corollary_pipeline(
                case, args.seed, args.trials, args.prime, args.starts, args.jobs
                )
        else:
            raise PreconditionError(
                "Failed to run pipeline: one of --theorem 1 or --corollary is needed."
                )
        return report, [CommandRunner.flat_row(report)]

import logging
from typing import List, Optional

from typing_extensions import TypedDict

from constants import DEFAULT_PRIME, DEFAULT_TRIALS, SEARCH_STARTS
from exceptions import EmptySystemError, PreconditionError
from interpolation import STATUS_EXPECTED, InterpolationSystem, Verdict
from job_runner import SeedStream
from segre_format import NU_MULTIPLE, NU_UNIQUE, Format, PerfectCase, SegreFormat
from tangency import TangencyAnalyzer
from waring import NuReport, WaringDecomposer
from .horace import CERTIFIED, Certificate, HoraceCertifier

LOGGER = logging.getLogger(__name__)

STAGE_SECANT = "secant_dim"
STAGE_WEAK = "check_weak_defectivity"
STAGE_CERTIFY = "certify_weakly"
STAGE_NU = "nu_experiment"


class PipelineReport(TypedDict):
    """
    Aggregated checks of one perfect case.

    Attributes:
        format (Format): The format.
        label (str): The canonical format string.
        k (int): The case has k + 1 terms.
        nu_expected (str): "unique", "multiple" or "unknown".
        seed (int): The root seed.
        secant (Verdict): Non-defectivity of the k-th secant variety.
        weak_defectivity (Optional[dict]): Summary of the singularity
            analysis at k points.
        certificate (Optional[Certificate]): The degeneration certificate of
            three-factor cases.
        certificate_error (Optional[str]): Why no certificate was built.
        nu (Optional[NuReport]): The decomposition count, when run.
        nef_ok (Optional[bool]): The nef inequality, for equal r_i.
        halted_at (Optional[str]): The first stage that failed.
        hypotheses_ok (bool): Whether every stage that ran succeeded.
        statement (str): The aggregated verdict.
    """
    format: Format
    label: str
    k: int
    nu_expected: str
    seed: int
    secant: Verdict
    weak_defectivity: Optional[dict]
    certificate: Optional[Certificate]
    certificate_error: Optional[str]
    nu: Optional[NuReport]
    nef_ok: Optional[bool]
    halted_at: Optional[str]
    hypotheses_ok: bool
    statement: str


class CorollaryPipeline:
    """
    Provides static methods chaining the checks that make a perfect case
    admit several decompositions: the secant variety is not defective, a
    general form double at k general points has only ordinary double points
    there, and, for three factors, the degeneration certificate.

    Static Methods:
        find_case: Looks a format up among enumerated cases.
        corollary_pipeline: The checks of a multiple-decomposition case.
        theorem_one_pipeline: The checks of a symmetric case plus a count.
    """
    @staticmethod
    def find_case(cases: List[PerfectCase], fmt: Format) -> PerfectCase:
        """
        Returns the case of the list whose format matches fmt.

        Raises:
            PreconditionError: If no case matches.
        """
        for case in cases:
            if case["format"]["r"] == fmt["r"] and case["format"]["d"] == fmt["d"]:
                return case
        raise PreconditionError(
            f"Failed to find perfect case: {SegreFormat.label(fmt)} is not in "
            "the enumerated family."
            )

    @staticmethod
    def _weak_summary(fmt: Format, npoints: int, seed: int, starts: int,
                      jobs: int) -> dict:
        try:
            report = TangencyAnalyzer.check_weak_defectivity(
                fmt, npoints, seed, starts, jobs
                )
        except EmptySystemError as e:
            LOGGER.warning("No form to analyze on %s: %s", SegreFormat.label(fmt), e)
            return {"ran": False, "weakly_defective": None, "note": str(e)}
        return {
            "ran": True,
            "npoints": npoints,
            "certification": report["certification"],
            "starts": report["starts"],
            "hessian_ok": report["hessian_ok"],
            "hessian_ratios": report["hessian_ratios"],
            "extra_singularities": report["extra_singularities"],
            "weakly_defective": report["weakly_defective"],
        }

    @staticmethod
    def _finish(report: PipelineReport) -> PipelineReport:
        report["hypotheses_ok"] = report["halted_at"] is None
        if report["halted_at"] is not None:
            report["statement"] = f"halted at {report['halted_at']}"
            LOGGER.warning(
                "Pipeline on %s halted at %s", report["label"], report["halted_at"]
                )
        else:
            report["statement"] = "hypotheses verified (probabilistic)"
        return report

    @staticmethod
    def corollary_pipeline(
        case: PerfectCase,
        seed: int = 0,
        trials: int = DEFAULT_TRIALS,
        prime: int = DEFAULT_PRIME,
        starts: int = SEARCH_STARTS,
        jobs: int = 1
        ) -> PipelineReport:
        """
        Runs secant_dim at k, check_weak_defectivity at k points and, for
        three-factor cases, certify_weakly with s = k. Halts at the first
        failing stage.

        Parameters:
            case (PerfectCase): A case of the two- or three-factor family.
            seed (int): Root seed; every stage draws from its own child.
            trials (int): Trials of every count.
            prime (int): The modulus.
            starts (int): Starts of the heuristic singularity search.
            jobs (int): Worker processes.

        Returns:
            PipelineReport: The report.
        """
        fmt = case["format"]
        k = case["k"]
        secant = InterpolationSystem.secant_dim(
            fmt, k, trials, SeedStream.child_seed(seed, (0,)), prime=prime
            )
        report: PipelineReport = {
            "format": fmt,
            "label": SegreFormat.label(fmt),
            "k": k,
            "nu_expected": case["nu_expected"],
            "seed": seed,
            "secant": secant,
            "weak_defectivity": None,
            "certificate": None,
            "certificate_error": None,
            "nu": None,
            "nef_ok": SegreFormat.nef_check(fmt) if len(set(fmt["r"])) == 1 else None,
            "halted_at": None,
            "hypotheses_ok": False,
            "statement": "",
        }
        if secant["status"] != STATUS_EXPECTED:
            report["halted_at"] = STAGE_SECANT
            return CorollaryPipeline._finish(report)

        weak = CorollaryPipeline._weak_summary(
            fmt, k, SeedStream.child_seed(seed, (1,)), starts, jobs
            )
        report["weak_defectivity"] = weak
        if weak["weakly_defective"] is not False:
            report["halted_at"] = STAGE_WEAK
            return CorollaryPipeline._finish(report)

        if fmt["n"] == 3:
            try:
                certificate = HoraceCertifier.certify_weakly(
                    fmt, k, SeedStream.child_seed(seed, (2,)), trials, prime,
                    jobs=jobs
                    )
            except PreconditionError as e:
                LOGGER.warning("No certificate for %s: %s", report["label"], e)
                report["certificate_error"] = str(e)
                report["halted_at"] = STAGE_CERTIFY
                return CorollaryPipeline._finish(report)
            report["certificate"] = certificate
            if certificate["status"] != CERTIFIED:
                report["halted_at"] = STAGE_CERTIFY
        return CorollaryPipeline._finish(report)

    @staticmethod
    def theorem_one_pipeline(
        r: int,
        d: int,
        seed: int = 0,
        trials: int = DEFAULT_TRIALS,
        prime: int = DEFAULT_PRIME,
        starts: int = SEARCH_STARTS,
        nu_starts: int = SEARCH_STARTS,
        jobs: int = 1
        ) -> PipelineReport:
        """
        Checks a form of degree d in r + 1 variables in its perfect case:
        non-defectivity, ordinary double points at k points, then counts
        decompositions of a general target.

        Raises:
            PreconditionError: If (r, d) is not a perfect case.
        """
        fmt = SegreFormat.create([r], [d])
        k = SegreFormat.perfect_k(fmt)
        if k is None:
            raise PreconditionError(
                f"Failed to run pipeline: {SegreFormat.label(fmt)} is not a "
                "perfect case."
                )
        case: PerfectCase = {
            "format": fmt,
            "k": k,
            "nu_expected": NU_UNIQUE if (r, d) == (2, 5) else NU_MULTIPLE,
            "assumption1_ok": True,
        }
        report = CorollaryPipeline.corollary_pipeline(
            case, seed, trials, prime, starts, jobs
            )
        if report["halted_at"] is None:
            report["nu"] = WaringDecomposer.nu_experiment(
                fmt, k, nu_starts, SeedStream.child_seed(seed, (3,)), jobs=jobs
                )
            if report["nu"]["inconclusive"]:
                report["halted_at"] = STAGE_NU
            report = CorollaryPipeline._finish(report)
        return report

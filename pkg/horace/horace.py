import logging
from typing import Dict, List, Optional

from typing_extensions import TypedDict

from constants import DEFAULT_PRIME, DEFAULT_TRIALS, SCALAR_PRIME, SEARCH_STARTS
from exceptions import HoraceConsistencyError, PreconditionError
from interpolation import STATUS_EXPECTED, InterpolationSystem, Verdict
from job_runner import JobRunner, SeedStream
from point_config import PointSampler
from segre_format import Format, SegreFormat, WeaklySchedule
from tangency import TangencyAnalyzer

LOGGER = logging.getLogger(__name__)

CERTIFIED = "certified"
PARTIAL = "partial"
FAILED = "failed"

HYPOTHESIS_A = "A"
HYPOTHESIS_B = "B"
HYPOTHESIS_C = "C"

# Residual degree pattern logged by a Horace step
RESIDUAL_DEGREE_PATTERN = "(d_1, ..., d_n - 1)"


class HoraceStep(TypedDict):
    """
    One Horace step on an (n+1)-factor format whose last factor is P^1,
    with l general double points and h double points on a divisor D of
    type (0, ..., 0, 1).

    Attributes:
        format (Format): The format of the conclusion.
        label (str): The canonical format string.
        l (int): Double points off D.
        h (int): Double points on D.
        hypothesis_verdicts (Dict[str, Verdict]): "A": l double points in
            degree d_{n+1}-1; "B": h double points on D, in the degree of
            the first n factors; "C": l double points in degree d_{n+1}-2.
        hypotheses_ok (Dict[str, bool]): Whether each hypothesis holds.
        bound_c (int): The upper bound on the dimension of hypothesis C.
        residual_verdict (Optional[Verdict]): l double points and h simple
            points on D in degree d_{n+1}-1.
        conclusion_verdict (Verdict): The direct count of the whole scheme.
        all_hold (bool): Whether the three hypotheses hold.
        failed_hypotheses (List[str]): The hypotheses that do not hold.
    """
    format: Format
    label: str
    l: int
    h: int
    hypothesis_verdicts: Dict[str, Verdict]
    hypotheses_ok: Dict[str, bool]
    bound_c: int
    residual_verdict: Optional[Verdict]
    conclusion_verdict: Verdict
    all_hold: bool
    failed_hypotheses: List[str]


class CertificateNode(TypedDict):
    """
    One statement of a degeneration certificate.

    Attributes:
        t (int): The degeneration level; t0 + 1 for the final statement.
        kind (str): "level" or "final".
        degree (int): The degree in the last factor.
        free_points (int): General double points.
        divisor_points (int): Double points on D.
        verdict (Verdict): The count of the statement.
        ok (bool): Whether the statement holds.
        horace (Optional[HoraceStep]): The Horace step proving the level
            statement, when requested and within bounds.
    """
    t: int
    kind: str
    degree: int
    free_points: int
    divisor_points: int
    verdict: Verdict
    ok: bool
    horace: Optional[HoraceStep]


class Certificate(TypedDict):
    """
    Certificate that a general form double at s general points has only
    ordinary double points there and is smooth elsewhere.

    Attributes:
        format (Format): The format.
        label (str): The canonical format string.
        statement (str): The root statement.
        schedule (WeaklySchedule): The (s, h0, t0) schedule.
        nodes (List[CertificateNode]): t0 level statements, then the final
            statement.
        status (str): "certified", "partial" or "failed".
        failed_t (List[int]): Levels whose statement does not hold.
        tangency (Optional[dict]): Instance level cross-check summary.
    """
    format: Format
    label: str
    statement: str
    schedule: WeaklySchedule
    nodes: List[CertificateNode]
    status: str
    failed_t: List[int]
    tangency: Optional[dict]


def leaf_verdict(
    fmt: Format,
    nfree: int,
    ndivisor: int,
    seed: int,
    trials: int,
    prime: int
    ) -> Verdict:
    """
    Counts the forms of fmt double at nfree general points and at ndivisor
    general points of one divisor D.
    """
    rng = SeedStream.generator(seed)
    scheme = InterpolationSystem.random_scheme(
        fmt, nfree, rng, SCALAR_PRIME, prime, ndivisor
        )
    return InterpolationSystem.sysdim(fmt, scheme, trials, seed)


class HoraceCertifier:
    """
    Provides static methods proving that double point schemes impose
    independent conditions by specializing part of the points onto a
    divisor D of type (0, ..., 0, 1) and counting the trace on D and the
    residual separately.

    Static Methods:
        horace_step: One specialization, with its three hypotheses, the
            residual count and the direct count of the conclusion.
        certify_weakly: The full degeneration schedule for s double points.
    """
    @staticmethod
    def horace_step(
        fmt: Format,
        l: int,
        h: int,
        seed: int = 0,
        trials: int = DEFAULT_TRIALS,
        prime: int = DEFAULT_PRIME,
        residual_check: bool = True
        ) -> HoraceStep:
        """
        Runs one Horace step.

        Parameters:
            fmt (Format): An (n+1)-factor format whose last factor is P^1,
                with d_{n+1} >= 2.
            l (int): Double points off D, 0 <= l <= l_max.
            h (int): Double points on D, 0 <= h <= h0.
            seed (int): Root seed of the points.
            trials (int): Trials of every count.
            prime (int): The modulus.
            residual_check (bool): Also count the residual scheme directly.

        Returns:
            HoraceStep: The verdicts.

        Raises:
            PreconditionError: If the format, l or h is out of range.
            HoraceConsistencyError: If the hypotheses hold and the direct
                count of the conclusion disagrees.
        """
        head = SegreFormat.head(fmt)
        degree = fmt["d"][-1]
        if degree < 2:
            raise PreconditionError(
                f"Failed to run Horace step: d_last={degree} < 2 on "
                f"{SegreFormat.label(fmt)}."
                )
        h_max, l_max = SegreFormat.horace_bounds(fmt)
        if not (0 <= h <= h_max and 0 <= l <= l_max):
            raise PreconditionError(
                f"Failed to run Horace step: (l, h) = ({l}, {h}) outside "
                f"[0, {l_max}] x [0, {h_max}] on {SegreFormat.label(fmt)}."
                )
        rng = SeedStream.generator(seed, (0,))
        free = PointSampler.random_points(fmt, l, rng, SCALAR_PRIME, prime)
        last = [PointSampler.random_scalar(rng, SCALAR_PRIME, prime)]
        on_d = PointSampler.divisor_points(fmt, h, rng, SCALAR_PRIME, prime, last)
        LOGGER.debug(
            "Residual systems drop the last-factor degree; one displayed "
            "system reads %s", RESIDUAL_DEGREE_PATTERN
            )
        fmt_a = SegreFormat.with_last_degree(fmt, degree - 1)
        fmt_c = SegreFormat.with_last_degree(fmt, degree - 2)

        verdict_a = InterpolationSystem.sysdim(
            fmt_a, InterpolationSystem.create_scheme(fmt_a, free),
            trials, SeedStream.child_seed(seed, (1,))
            )
        verdict_b = InterpolationSystem.sysdim(
            head,
            InterpolationSystem.create_scheme(
                head, PointSampler.restrict_to_head(on_d, head)
                ),
            trials, SeedStream.child_seed(seed, (2,))
            )
        verdict_c = InterpolationSystem.sysdim(
            fmt_c, InterpolationSystem.create_scheme(fmt_c, free),
            trials, SeedStream.child_seed(seed, (3,))
            )
        bound_c = verdict_a["ncoeff"] - verdict_a["rows"] - h
        hypotheses_ok = {
            HYPOTHESIS_A: verdict_a["independent"],
            HYPOTHESIS_B: verdict_b["independent"],
            HYPOTHESIS_C: verdict_c["actual_dim"] <= bound_c,
        }
        failed = [name for (name, ok) in hypotheses_ok.items() if not ok]
        for name in failed:
            LOGGER.info(
                "Horace step on %s with (l, h) = (%d, %d): hypothesis %s fails",
                SegreFormat.label(fmt), l, h, name
                )

        residual = None
        if residual_check:
            residual = InterpolationSystem.sysdim(
                fmt_a,
                InterpolationSystem.create_scheme(
                    fmt_a, free, None, on_d if h else None
                    ),
                trials, SeedStream.child_seed(seed, (4,))
                )
        conclusion = InterpolationSystem.sysdim(
            fmt,
            InterpolationSystem.create_scheme(fmt, free, on_d if h else None),
            trials, SeedStream.child_seed(seed, (5,))
            )
        all_hold = not failed
        if all_hold and not conclusion["independent"]:
            raise HoraceConsistencyError(
                f"Failed to confirm Horace step on {SegreFormat.label(fmt)} with "
                f"(l, h) = ({l}, {h}): hypotheses hold but rank "
                f"{conclusion['rank']} < {conclusion['rows']}."
                )
        step: HoraceStep = {
            "format": fmt,
            "label": SegreFormat.label(fmt),
            "l": l,
            "h": h,
            "hypothesis_verdicts": {
                HYPOTHESIS_A: verdict_a,
                HYPOTHESIS_B: verdict_b,
                HYPOTHESIS_C: verdict_c,
            },
            "hypotheses_ok": hypotheses_ok,
            "bound_c": bound_c,
            "residual_verdict": residual,
            "conclusion_verdict": conclusion,
            "all_hold": all_hold,
            "failed_hypotheses": failed,
        }
        return step

    @staticmethod
    def certify_weakly(
        fmt: Format,
        s: int,
        seed: int = 0,
        trials: int = DEFAULT_TRIALS,
        prime: int = DEFAULT_PRIME,
        horace_steps: bool = False,
        cross_check: bool = False,
        starts: int = SEARCH_STARTS,
        jobs: int = 1
        ) -> Certificate:
        """
        Verifies, for t = 1..t0, that s - t h0 general double points and h0
        double points on D impose independent conditions in degree
        d_{n+1} - t + 1, and the final statement with one general double
        point and s - t0 h0 - 1 on D in degree d_{n+1} - t0.

        Parameters:
            fmt (Format): An (n+1)-factor format whose last factor is P^1.
            s (int): The number of double points.
            seed (int): Root seed.
            trials (int): Trials of every count.
            prime (int): The modulus.
            horace_steps (bool): Attach a Horace step to every level
                statement within bounds.
            cross_check (bool): Also run the instance level singularity
                analysis when forms double at s points exist.
            starts (int): Starts of that analysis when heuristic.
            jobs (int): Worker processes for the level statements.

        Returns:
            Certificate: The certificate.

        Raises:
            PreconditionError: If the schedule fails or d_{n+1} < t0 + 3.
        """
        schedule = SegreFormat.weakly_schedule(fmt, s)
        h0 = schedule["h0"]
        t0 = schedule["t0"]
        degree = fmt["d"][-1]
        if not schedule["degree_ok"]:
            raise PreconditionError(
                f"Failed to certify: d_last={degree} < t0 + 3 = {t0 + 3} on "
                f"{SegreFormat.label(fmt)} with s={s}."
                )
        if not schedule["head_degrees_ok"]:
            LOGGER.warning(
                "%s has a head degree below 2", SegreFormat.label(fmt)
                )
        plan = [
            (t, "level", degree - t + 1, s - t * h0, h0) for t in range(1, t0 + 1)
        ]
        plan.append((t0 + 1, "final", degree - t0, 1, s - t0 * h0 - 1))
        jobs_args = [
            (
                SegreFormat.with_last_degree(fmt, d_t), nfree, ndivisor,
                SeedStream.child_seed(seed, (t,)), trials, prime
            )
            for (t, _, d_t, nfree, ndivisor) in plan
        ]
        verdicts = JobRunner.map(leaf_verdict, jobs_args, jobs)
        nodes: List[CertificateNode] = []
        for ((t, kind, d_t, nfree, ndivisor), verdict) in zip(plan, verdicts):
            step = None
            if horace_steps and kind == "level":
                step = HoraceCertifier._optional_step(
                    SegreFormat.with_last_degree(fmt, d_t), nfree, ndivisor,
                    SeedStream.child_seed(seed, (t, 1)), trials, prime
                    )
            ok = verdict["status"] == STATUS_EXPECTED and \
                (step is None or step["all_hold"])
            nodes.append({
                "t": t,
                "kind": kind,
                "degree": d_t,
                "free_points": nfree,
                "divisor_points": ndivisor,
                "verdict": verdict,
                "ok": ok,
                "horace": step,
            })
        failed_t = [node["t"] for node in nodes if not node["ok"]]
        if not failed_t:
            status = CERTIFIED
        elif len(failed_t) == len(nodes):
            status = FAILED
        else:
            status = PARTIAL
        if failed_t:
            LOGGER.warning(
                "Certificate of %s with s=%d is %s, failing levels %s",
                SegreFormat.label(fmt), s, status, failed_t
                )
        certificate: Certificate = {
            "format": fmt,
            "label": SegreFormat.label(fmt),
            "statement": (
                f"a general form of {SegreFormat.label(fmt)} double at {s} "
                "general points has only ordinary double points there and is "
                "smooth elsewhere"
            ),
            "schedule": schedule,
            "nodes": nodes,
            "status": status,
            "failed_t": failed_t,
            "tangency": None,
        }
        if cross_check:
            certificate["tangency"] = HoraceCertifier._tangency_summary(
                fmt, s, seed, starts, jobs
                )
        return certificate

    @staticmethod
    def _optional_step(
        fmt: Format, l: int, h: int, seed: int, trials: int, prime: int
        ) -> Optional[HoraceStep]:
        try:
            return HoraceCertifier.horace_step(
                fmt, l, h, seed, trials, prime, residual_check=False
                )
        except PreconditionError as e:
            LOGGER.debug("No Horace step attached: %s", e)
            return None

    @staticmethod
    def _tangency_summary(
        fmt: Format, s: int, seed: int, starts: int, jobs: int
        ) -> dict:
        rows = s * (sum(fmt["r"]) + 1)
        if rows >= SegreFormat.ncoeff(fmt):
            return {
                "ran": False,
                "note": f"{rows} conditions leave no form to analyze",
            }
        report = TangencyAnalyzer.check_weak_defectivity(
            fmt, s, SeedStream.child_seed(seed, (99,)), starts, jobs
            )
        return {
            "ran": True,
            "certification": report["certification"],
            "hessian_ok": report["hessian_ok"],
            "extra_singularities": len(report["extra_singularities"]),
            "ordinary_double_points_only":
                TangencyAnalyzer.ordinary_double_points_only(report),
        }

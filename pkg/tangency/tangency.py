import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from typing_extensions import TypedDict

from constants import (
    HESSIAN_TOL,
    POINT_MATCH_TOL,
    SCALAR_COMPLEX,
    SCALAR_PRIME,
    SEARCH_STARTS
)
from interpolation import InterpolationSystem, ModularElimination, NumericalRank
from job_runner import JobRunner, SeedStream
from multipoly import MultiPoly, ScalarArithmetic, Section
from point_config import PointConfig, PointSampler, Scalar
from segre_format import Format, SegreFormat
from .helpers import (
    COMPONENT_ISOLATED,
    ChartAtlas,
    ResultantSolver,
    SingularPoint,
    search_from_start
)

LOGGER = logging.getLogger(__name__)

CERTIFIED = "certified"
HEURISTIC = "heuristic"


class SingularityReport(TypedDict):
    """
    Singularities of a general form with double points at npoints general
    points.

    Attributes:
        format (Format): The format.
        label (str): The canonical format string.
        section (Section): The form analyzed.
        imposed_points (PointConfig): The imposed double points.
        imposed_residuals (List[float]): Normalized value and gradient
            residual at every imposed point.
        hessian_ok (List[bool]): Whether the affine Hessian at every imposed
            point is nondegenerate.
        hessian_ratios (List[float]): Smallest over largest singular value
            of every Hessian.
        extra_singularities (List[SingularPoint]): Singular points away
            from the imposed points.
        certification (str): "certified" or "heuristic".
        starts (int): Starts of the heuristic search (0 when certified).
        seed (int): The seed of the run.
        weakly_defective (bool): False iff the form has only ordinary double
            points at the imposed points.
    """
    format: Format
    label: str
    section: Section
    imposed_points: PointConfig
    imposed_residuals: List[float]
    hessian_ok: List[bool]
    hessian_ratios: List[float]
    extra_singularities: List[SingularPoint]
    certification: str
    starts: int
    seed: int
    weakly_defective: bool


class TangencyAnalyzer:
    """
    Provides static methods testing whether a general form singular at
    given general points has ordinary double points there and is smooth
    elsewhere, i.e. the instance level meaning of weak non-defectivity.

    Static Methods:
        hessian_at: Affine Hessian of a section at a point.
        hessian_nondegenerate: Nondegeneracy test of a Hessian.
        find_singularities: Singular points of a complex section.
        check_weak_defectivity: Full analysis at npoints random points.
        ordinary_double_points_only: Reads the conclusion off a report.
    """
    @staticmethod
    def hessian_at(section: Section, point: List[Sequence[Scalar]]) -> np.ndarray:
        """
        Returns the sum(r) x sum(r) matrix of second affine partials.

        Parameters:
            section (Section): The form.
            point (List[Sequence[Scalar]]): Affine coordinates per factor.

        Returns:
            np.ndarray: The Hessian in the section's scalar kind.
        """
        basis = MultiPoly.basis(section["format"])
        rows = MultiPoly.eval_second_partial_rows(
            basis, point, section["kind"], section["prime"]
            )
        size = rows.shape[0]
        hessian = np.empty((size, size), dtype=ScalarArithmetic.dtype(section["kind"]))
        for a in range(size):
            hessian[a] = ScalarArithmetic.matvec(
                rows[a], section["coeffs"], section["kind"], section["prime"]
                )
        return hessian

    @staticmethod
    def hessian_nondegenerate(hessian: np.ndarray, kind: str = SCALAR_COMPLEX,
                              prime: Optional[int] = None) -> Tuple[bool, float]:
        """
        Returns (ok, ratio): full rank over F_p for primes, otherwise
        smallest singular value > HESSIAN_TOL * largest.
        """
        if kind == SCALAR_PRIME:
            full = ModularElimination.rank(hessian, prime) == hessian.shape[0]
            return full, 1.0 if full else 0.0
        values = NumericalRank.singular_values(
            np.asarray(hessian, dtype=np.complex128)
            )
        if values.size == 0 or values[0] == 0.0:
            return False, 0.0
        ratio = float(values[-1] / values[0])
        return ratio > HESSIAN_TOL, ratio

    @staticmethod
    def find_singularities(
        section: Section,
        seed: int = 0,
        starts: int = SEARCH_STARTS,
        jobs: int = 1
        ) -> Tuple[List[SingularPoint], str]:
        """
        Locates singular points of a complex section: by resultants on every
        chart when there are two affine variables (certified), otherwise by
        a multi-start descent (heuristic). Duplicates are merged.

        Returns:
            Tuple[List[SingularPoint], str]: The points and the
                certification level.
        """
        fmt = section["format"]
        basis = MultiPoly.basis(fmt)
        coeffs = np.asarray(section["coeffs"], dtype=np.complex128)
        if sum(fmt["r"]) == 2:
            found = ResultantSolver.search(
                basis, coeffs, SeedStream.generator(seed, (2,))
                )
            certification = CERTIFIED
        else:
            results = JobRunner.map(
                search_from_start,
                [(fmt, coeffs, seed, index) for index in range(starts)],
                jobs
                )
            found = [
                {
                    "coordinates": [list(xi) for xi in x],
                    "residual": score,
                    "component": COMPONENT_ISOLATED,
                }
                for (x, score) in (r for r in results if r is not None)
            ]
            certification = HEURISTIC
        merged: List[SingularPoint] = []
        for point in found:
            if all(
                PointSampler.fubini_study_distance(
                    point["coordinates"], other["coordinates"]
                    ) >= POINT_MATCH_TOL
                for other in merged
                ):
                merged.append(point)
        return merged, certification

    @staticmethod
    def check_weak_defectivity(
        fmt: Format,
        npoints: int,
        seed: int = 0,
        starts: int = SEARCH_STARTS,
        jobs: int = 1
        ) -> SingularityReport:
        """
        Draws npoints general points, a general complex form double at them,
        checks its Hessian at every point and searches its other singular
        points.

        Parameters:
            fmt (Format): The format.
            npoints (int): The number of double points (k for the
                (k-1)-weak defectivity test).
            seed (int): Root seed of points, form and search.
            starts (int): Starts of the heuristic search.
            jobs (int): Worker processes of the heuristic search.

        Returns:
            SingularityReport: The report.

        Raises:
            EmptySystemError: If no nonzero form is double at the points.
        """
        rng = SeedStream.generator(seed, (0,))
        scheme = InterpolationSystem.random_scheme(fmt, npoints, rng, SCALAR_COMPLEX)
        section = InterpolationSystem.kernel_section(
            fmt, scheme, SeedStream.child_seed(seed, (1,))
            )
        basis = MultiPoly.basis(fmt)
        coeffs = np.asarray(section["coeffs"], dtype=np.complex128)
        imposed = [
            PointSampler.homogeneous(point, SCALAR_COMPLEX)
            for point in scheme["simple_points"]["points"]
        ]
        hessian_ok = []
        ratios = []
        for point in scheme["simple_points"]["points"]:
            ok, ratio = TangencyAnalyzer.hessian_nondegenerate(
                TangencyAnalyzer.hessian_at(section, point)
                )
            hessian_ok.append(bool(ok))
            ratios.append(ratio)
        residuals = [
            ChartAtlas.normalized_residual(basis, coeffs, [np.asarray(c) for c in x])
            for x in imposed
        ]
        found, certification = TangencyAnalyzer.find_singularities(
            section, seed, starts, jobs
            )
        extra = [
            point for point in found
            if all(
                PointSampler.fubini_study_distance(point["coordinates"], x)
                >= POINT_MATCH_TOL
                for x in imposed
                )
        ]
        LOGGER.info(
            "%s with %d double points: %d/%d nondegenerate Hessians, %d extra "
            "singular points (%s)",
            SegreFormat.label(fmt), npoints, sum(hessian_ok), npoints,
            len(extra), certification
            )
        report: SingularityReport = {
            "format": fmt,
            "label": SegreFormat.label(fmt),
            "section": section,
            "imposed_points": scheme["simple_points"],
            "imposed_residuals": residuals,
            "hessian_ok": hessian_ok,
            "hessian_ratios": ratios,
            "extra_singularities": extra,
            "certification": certification,
            "starts": 0 if certification == CERTIFIED else starts,
            "seed": seed,
            "weakly_defective": False,
        }
        report["weakly_defective"] = not TangencyAnalyzer.ordinary_double_points_only(
            report
            )
        return report

    @staticmethod
    def ordinary_double_points_only(report: SingularityReport) -> bool:
        """
        True iff every imposed point is an ordinary double point and no
        other singular point was found; heuristic reports keep their flag.
        """
        return all(report["hessian_ok"]) and not report["extra_singularities"]

import logging
from typing import List, Optional

import numpy as np
from typing_extensions import TypedDict

from constants import (
    DEFAULT_PRIME,
    DEFAULT_TRIALS,
    FALLBACK_PRIME,
    SCALAR_COMPLEX,
    SCALAR_PRIME,
    SCALAR_RATIONAL
)
from exceptions import EmptySystemError, PreconditionError
from job_runner import SeedStream
from multipoly import MultiPoly, ScalarArithmetic, Section
from point_config import PointConfig, PointSampler
from segre_format import Format, SegreFormat
from .helpers import ModularElimination, NumericalRank, RationalElimination

LOGGER = logging.getLogger(__name__)

MEASURE_SECTIONS = "sections"
MEASURE_SECANT = "secant"

STATUS_EXPECTED = "expected"
STATUS_DEFICIENT = "deficient"
STATUS_EXCEEDS = "exceeds"

CONFIDENCE_CERTIFICATE = "certificate"
CONFIDENCE_PROBABILISTIC = "probabilistic"

# Resampling attempts when drawn points coincide
COLLISION_ATTEMPTS = 10


class DoubleScheme(TypedDict):
    """
    A zero-dimensional scheme made of double points, possibly some of them
    on a divisor D of type (0, ..., 0, 1), and possibly simple points on D.

    Attributes:
        format (Format): The format of the linear system.
        simple_points (PointConfig): General points imposed with
            multiplicity 2.
        divisor_points (Optional[PointConfig]): Points of D imposed with
            multiplicity 2.
        reduced_points (Optional[PointConfig]): Points of D imposed with
            multiplicity 1 (the trace of a residual scheme).
    """
    format: Format
    simple_points: PointConfig
    divisor_points: Optional[PointConfig]
    reduced_points: Optional[PointConfig]


class Verdict(TypedDict):
    """
    Outcome of one dimension count.

    Attributes:
        format (Format): The format.
        label (str): The canonical format string.
        scheme (str): Description of the imposed scheme.
        measure (str): "sections" (kernel dimension) or "secant" (rank).
        rows (int): Number of linear conditions.
        ncoeff (int): Number of monomials.
        rank (int): Rank of the conditions on the last trial.
        expected_dim (int): max(0, ncoeff - rows) for sections,
            min(ncoeff, rows) for secant.
        actual_dim (int): ncoeff - rank for sections, rank for secant.
        status (str): "expected", "deficient" or "exceeds".
        independent (bool): Whether rank = rows.
        trials (int): Number of point draws used.
        scalar_kind (str): The scalar kind.
        prime (Optional[int]): The modulus of the last trial.
        primes_used (List[int]): The moduli of all trials.
        confidence (str): "certificate" or "probabilistic".
        note (str): Human readable summary.
    """
    format: Format
    label: str
    scheme: str
    measure: str
    rows: int
    ncoeff: int
    rank: int
    expected_dim: int
    actual_dim: int
    status: str
    independent: bool
    trials: int
    scalar_kind: str
    prime: Optional[int]
    primes_used: List[int]
    confidence: str
    note: str


class InterpolationSystem:
    """
    Provides static methods building the linear conditions imposed by
    double points on multihomogeneous forms, and the dimension verdicts
    derived from their rank (Terracini's lemma for secant varieties).

    Static Methods:
        create_scheme: Validates and builds a DoubleScheme.
        random_scheme: Draws a scheme with the given point counts.
        describe: Short description of a scheme.
        assemble: The condition matrix of a scheme.
        matrix_rank: Exact or numerical rank of a condition matrix.
        resample_scheme: Fresh points with the same structure.
        sysdim: Dimension of the space of sections through a scheme.
        secant_dim: Terracini rank at k+1 general double points.
        kernel_section: A random section through a scheme.
        residuals: Condition values of a section on a scheme.
    """
    @staticmethod
    def _parts(scheme: DoubleScheme) -> List[PointConfig]:
        return [
            config for config in (
                scheme["simple_points"],
                scheme["divisor_points"],
                scheme["reduced_points"]
            ) if config is not None
        ]

    @staticmethod
    def create_scheme(
        fmt: Format,
        simple_points: PointConfig,
        divisor_points: Optional[PointConfig] = None,
        reduced_points: Optional[PointConfig] = None
        ) -> DoubleScheme:
        """
        Builds a DoubleScheme.

        Parameters:
            fmt (Format): The format.
            simple_points (PointConfig): General double points.
            divisor_points (Optional[PointConfig]): Double points on D.
            reduced_points (Optional[PointConfig]): Simple points on D.

        Returns:
            DoubleScheme: The scheme.

        Raises:
            PreconditionError: If the kinds differ or the points on D do
                not share the last-factor coordinate.
        """
        scheme: DoubleScheme = {
            "format": fmt,
            "simple_points": simple_points,
            "divisor_points": divisor_points,
            "reduced_points": reduced_points,
        }
        parts = InterpolationSystem._parts(scheme)
        if len({(c["kind"], c["prime"]) for c in parts}) != 1:
            raise PreconditionError(
                "Failed to build scheme: point sets use different scalars."
                )
        on_d = [
            point[-1]
            for config in (divisor_points, reduced_points) if config is not None
            for point in config["points"]
        ]
        if any(list(c) != list(on_d[0]) for c in on_d):
            raise PreconditionError(
                "Failed to build scheme: points on D must share the "
                "last-factor coordinate."
                )
        return scheme

    @staticmethod
    def random_scheme(
        fmt: Format,
        nsimple: int,
        rng: np.random.Generator,
        kind: str = SCALAR_PRIME,
        prime: Optional[int] = None,
        ndivisor: int = 0,
        nreduced: int = 0
        ) -> DoubleScheme:
        """
        Draws nsimple general double points, ndivisor double points on a
        random divisor D and nreduced simple points on the same D.
        """
        prime = prime or DEFAULT_PRIME
        simple = PointSampler.random_points(fmt, nsimple, rng, kind, prime)
        divisor = None
        reduced = None
        if ndivisor or nreduced:
            last = [
                PointSampler.random_scalar(rng, kind, prime)
                for _ in range(fmt["r"][-1])
            ]
            if ndivisor:
                divisor = PointSampler.divisor_points(
                    fmt, ndivisor, rng, kind, prime, last
                    )
            if nreduced:
                reduced = PointSampler.divisor_points(
                    fmt, nreduced, rng, kind, prime, last
                    )
        return InterpolationSystem.create_scheme(fmt, simple, divisor, reduced)

    @staticmethod
    def describe(scheme: DoubleScheme) -> str:
        parts = [f"{len(scheme['simple_points']['points'])} double"]
        if scheme["divisor_points"] is not None:
            parts.append(f"{len(scheme['divisor_points']['points'])} double on D")
        if scheme["reduced_points"] is not None:
            parts.append(f"{len(scheme['reduced_points']['points'])} simple on D")
        return " + ".join(parts)

    @staticmethod
    def assemble(fmt: Format, scheme: DoubleScheme) -> np.ndarray:
        """
        Returns the condition matrix of a scheme: for every double point the
        value row followed by the sum(r) affine partial rows, then one value
        row for every simple point on D.

        Parameters:
            fmt (Format): The format of the forms.
            scheme (DoubleScheme): The scheme.

        Returns:
            np.ndarray: (rows, ncoeff) matrix of the scheme's scalar kind.
        """
        basis = MultiPoly.basis(fmt)
        kind = scheme["simple_points"]["kind"]
        prime = scheme["simple_points"]["prime"]
        blocks = []
        for config in (scheme["simple_points"], scheme["divisor_points"]):
            if config is None:
                continue
            for point in config["points"]:
                blocks.append(
                    MultiPoly.eval_monomial_row(basis, point, kind, prime)[None, :]
                    )
                blocks.append(
                    MultiPoly.eval_partial_rows(basis, point, kind, prime)
                    )
        if scheme["reduced_points"] is not None:
            for point in scheme["reduced_points"]["points"]:
                blocks.append(
                    MultiPoly.eval_monomial_row(basis, point, kind, prime)[None, :]
                    )
        if not blocks:
            return np.zeros((0, basis["size"]), dtype=ScalarArithmetic.dtype(kind))
        return np.concatenate(blocks, axis=0)

    @staticmethod
    def matrix_rank(
        matrix: np.ndarray, ncoeff: int, kind: str, prime: Optional[int] = None
        ) -> int:
        """
        Rank over F_p, over Q (small systems) or numerical over C.
        """
        if kind == SCALAR_PRIME:
            return ModularElimination.rank(matrix, prime)
        if kind == SCALAR_RATIONAL:
            return RationalElimination.rank(matrix, ncoeff)
        return NumericalRank.rank(matrix)

    @staticmethod
    def resample_scheme(
        scheme: DoubleScheme,
        rng: np.random.Generator,
        prime: Optional[int] = None
        ) -> DoubleScheme:
        """
        Draws fresh points with the same counts and the same divisor
        structure, optionally over another prime.
        """
        simple = scheme["simple_points"]
        fresh = InterpolationSystem.random_scheme(
            scheme["format"],
            len(simple["points"]),
            rng,
            simple["kind"],
            prime or simple["prime"],
            len(scheme["divisor_points"]["points"])
            if scheme["divisor_points"] is not None else 0,
            len(scheme["reduced_points"]["points"])
            if scheme["reduced_points"] is not None else 0
            )
        return fresh

    @staticmethod
    def _has_collisions(scheme: DoubleScheme) -> bool:
        parts = InterpolationSystem._parts(scheme)
        return PointSampler.has_collisions(
            PointSampler.concat(scheme["format"], parts)
            )

    @staticmethod
    def _measure(
        fmt: Format,
        scheme: DoubleScheme,
        measure: str,
        trials: int,
        seed: int
        ) -> Verdict:
        rng = SeedStream.generator(seed)
        kind = scheme["simple_points"]["kind"]
        ncoeff = SegreFormat.ncoeff(fmt)
        current = scheme
        primes_used: List[int] = []
        trials = max(1, trials)
        used = 0
        rank = rows = expected = actual = 0
        for trial in range(1, trials + 1):
            prime = current["simple_points"]["prime"]
            if trial > 1:
                if kind == SCALAR_PRIME and trial == trials:
                    prime = FALLBACK_PRIME
                current = InterpolationSystem.resample_scheme(current, rng, prime)
            for _ in range(COLLISION_ATTEMPTS):
                if not InterpolationSystem._has_collisions(current):
                    break
                LOGGER.info(
                    "Coinciding points in %s, resampling",
                    InterpolationSystem.describe(current)
                    )
                current = InterpolationSystem.resample_scheme(current, rng, prime)
            matrix = InterpolationSystem.assemble(fmt, current)
            rows = matrix.shape[0]
            rank = InterpolationSystem.matrix_rank(matrix, ncoeff, kind, prime)
            used = trial
            if prime is not None:
                primes_used.append(prime)
            if measure == MEASURE_SECANT:
                expected = min(ncoeff, rows)
                actual = rank
            else:
                expected = max(0, ncoeff - rows)
                actual = ncoeff - rank
            if actual == expected:
                break
            LOGGER.info(
                "%s on %s: trial %d/%d gave %d, expected %d",
                measure, SegreFormat.label(fmt), trial, trials, actual, expected
                )
        if actual == expected:
            status = STATUS_EXPECTED
        elif (measure == MEASURE_SECANT) == (actual < expected):
            status = STATUS_DEFICIENT
        else:
            status = STATUS_EXCEEDS
        exact = kind in (SCALAR_PRIME, SCALAR_RATIONAL)
        confidence = CONFIDENCE_CERTIFICATE \
            if status == STATUS_EXPECTED and exact else CONFIDENCE_PROBABILISTIC
        if status == STATUS_EXPECTED:
            note = "expected dimension"
        elif status == STATUS_DEFICIENT:
            what = "defective" if measure == MEASURE_SECANT else "deficient"
            note = f"{what} (probabilistic) after {used} trials"
            LOGGER.warning("%s: %s", SegreFormat.label(fmt), note)
        else:
            note = "count beyond the generic bound; numerical rank is unreliable"
            LOGGER.warning("%s: %s", SegreFormat.label(fmt), note)
        verdict: Verdict = {
            "format": fmt,
            "label": SegreFormat.label(fmt),
            "scheme": InterpolationSystem.describe(current),
            "measure": measure,
            "rows": rows,
            "ncoeff": ncoeff,
            "rank": rank,
            "expected_dim": expected,
            "actual_dim": actual,
            "status": status,
            "independent": rank == rows,
            "trials": used,
            "scalar_kind": kind,
            "prime": primes_used[-1] if primes_used else None,
            "primes_used": primes_used,
            "confidence": confidence,
            "note": note,
        }
        return verdict

    @staticmethod
    def sysdim(
        fmt: Format,
        scheme: DoubleScheme,
        trials: int = DEFAULT_TRIALS,
        seed: int = 0
        ) -> Verdict:
        """
        Computes the dimension of the space of forms through the scheme and
        compares it with max(0, ncoeff - rows). A larger dimension triggers
        new draws of the points, the last one over the fallback prime.

        Parameters:
            fmt (Format): The format of the forms.
            scheme (DoubleScheme): The scheme of the first trial.
            trials (int): Maximum number of draws.
            seed (int): Root seed of the redraws.

        Returns:
            Verdict: The verdict of the last draw.
        """
        return InterpolationSystem._measure(
            fmt, scheme, MEASURE_SECTIONS, trials, seed
            )

    @staticmethod
    def secant_dim(
        fmt: Format,
        k: int,
        trials: int = DEFAULT_TRIALS,
        seed: int = 0,
        kind: str = SCALAR_PRIME,
        prime: Optional[int] = None
        ) -> Verdict:
        """
        Terracini verdict: the rank of the conditions of k+1 general double
        points is the affine dimension of the k-th secant variety, expected
        min(ncoeff, (k+1)(sum(r)+1)).

        Raises:
            PreconditionError: If k < 0.
        """
        if k < 0:
            raise PreconditionError(f"Failed to compute secant dimension: k={k} < 0.")
        scheme = InterpolationSystem.random_scheme(
            fmt, k + 1, SeedStream.generator(seed, (0,)), kind, prime
            )
        return InterpolationSystem._measure(fmt, scheme, MEASURE_SECANT, trials, seed)

    @staticmethod
    def kernel_section(fmt: Format, scheme: DoubleScheme, seed: int = 0) -> Section:
        """
        Returns a random linear combination of a kernel basis of the
        conditions of the scheme, in the scheme's scalar kind.

        Parameters:
            fmt (Format): The format.
            scheme (DoubleScheme): The scheme.
            seed (int): Seed of the combination.

        Returns:
            Section: A form through the scheme; a random form when the
                scheme is empty.

        Raises:
            EmptySystemError: If only the zero form passes through the scheme.
        """
        rng = SeedStream.generator(seed)
        kind = scheme["simple_points"]["kind"]
        prime = scheme["simple_points"]["prime"]
        ncoeff = SegreFormat.ncoeff(fmt)
        matrix = InterpolationSystem.assemble(fmt, scheme)
        if kind == SCALAR_PRIME:
            basis = ModularElimination.nullspace(matrix, ncoeff, prime)
        elif kind == SCALAR_RATIONAL:
            basis = RationalElimination.nullspace(matrix, ncoeff)
        else:
            basis = NumericalRank.nullspace(matrix, ncoeff)
        if basis.shape[0] == 0:
            raise EmptySystemError(
                f"Failed to draw section: no nonzero form of "
                f"{SegreFormat.label(fmt)} through "
                f"{InterpolationSystem.describe(scheme)}."
                )
        weights = [
            PointSampler.random_scalar(rng, kind, prime)
            for _ in range(basis.shape[0])
        ]
        coeffs = ScalarArithmetic.scale(weights[0], basis[0], kind, prime)
        for (weight, vector) in zip(weights[1:], basis[1:]):
            coeffs = ScalarArithmetic.reduce(
                coeffs + ScalarArithmetic.scale(weight, vector, kind, prime),
                kind, prime
                )
        LOGGER.debug(
            "Kernel of dimension %d for %s", basis.shape[0], SegreFormat.label(fmt)
            )
        return MultiPoly.section(fmt, coeffs, kind, prime)

    @staticmethod
    def residuals(section: Section, scheme: DoubleScheme) -> np.ndarray:
        """
        Returns the values of the conditions of the scheme on a section.
        """
        matrix = InterpolationSystem.assemble(section["format"], scheme)
        return ScalarArithmetic.matvec(
            matrix, section["coeffs"], section["kind"], section["prime"]
            )

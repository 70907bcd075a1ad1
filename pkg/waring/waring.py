import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.cluster.hierarchy
from typing_extensions import TypedDict

from constants import (
    CANONICAL_ROUNDING,
    CANONICAL_ZERO_TOL,
    CLUSTER_SWEEP,
    CLUSTER_TOL,
    CONVERGENCE_TOL,
    MAX_ITERATIONS,
    MIN_CONVERGED,
    SCALAR_COMPLEX,
    SEARCH_STARTS
)
from damped_least_squares import DampedLeastSquares
from exceptions import PreconditionError
from job_runner import JobRunner, SeedStream
from multipoly import MultiPoly, Section
from segre_format import Format, SegreFormat
from .helpers import DecompositionMatcher, RankOneModel

LOGGER = logging.getLogger(__name__)


class RankOneTerm(TypedDict):
    """
    A decomposable form scalar * l_1^{d_1} ... l_n^{d_n}.

    Attributes:
        scalar (complex): The scalar.
        linforms (List[np.ndarray]): One linear form of length r_i + 1 per
            factor; in canonical form each has unit norm and its first
            nonvanishing coordinate is real positive.
    """
    scalar: complex
    linforms: List[np.ndarray]


class Decomposition(TypedDict):
    """
    A sum of decomposable forms approximating a target.

    Attributes:
        format (Format): The format.
        terms (List[RankOneTerm]): The k + 1 terms.
        residual (float): ||sum - target|| / ||target||.
        converged (bool): Whether residual <= CONVERGENCE_TOL.
        iterations (int): Iterations of the descent (0 when synthesized).
        history (List[float]): Relative residual after every accepted step.
    """
    format: Format
    terms: List[RankOneTerm]
    residual: float
    converged: bool
    iterations: int
    history: List[float]


class ClusterResult(TypedDict):
    """
    Decompositions grouped by single linkage on the matching distance.

    Attributes:
        nu_est (int): The number of clusters.
        labels (List[int]): Cluster index of every input, clusters ordered
            by decreasing size, then by smallest residual.
        sizes (List[int]): Size of every cluster.
        representatives (List[Decomposition]): The smallest residual member
            of every cluster.
    """
    nu_est: int
    labels: List[int]
    sizes: List[int]
    representatives: List[Decomposition]


class NuReport(TypedDict):
    """
    Outcome of a multi-start count of decompositions of a general target.

    Attributes:
        format (Format): The format.
        label (str): The canonical format string.
        k (int): The decompositions have k + 1 terms.
        seed (int): The root seed.
        nstarts (int): The number of fits.
        nconverged (int): The number of converged fits.
        convergence_rate (float): nconverged / nstarts.
        nu_est (int): Distinct decompositions among the converged fits.
        statement (str): "nu >= nu_est", a lower bound.
        inconclusive (bool): Whether nconverged < MIN_CONVERGED.
        residual_stats (Dict[str, float]): min, median and max residual.
        cluster_sizes (List[int]): The size of every cluster.
        tol (float): The cluster tolerance.
        sweep (Dict[str, int]): nu_est at the other tolerances.
        witness_cluster (Optional[int]): The cluster holding the
            synthesized decomposition, if any.
        representatives (List[Decomposition]): One per cluster.
    """
    format: Format
    label: str
    k: int
    seed: int
    nstarts: int
    nconverged: int
    convergence_rate: float
    nu_est: int
    statement: str
    inconclusive: bool
    residual_stats: Dict[str, float]
    cluster_sizes: List[int]
    tol: float
    sweep: Dict[str, int]
    witness_cluster: Optional[int]
    representatives: List[Decomposition]


def fit_start(
    target: Section, k: int, root_seed: int, index: int, max_iterations: int
    ) -> Decomposition:
    """
    One start of a multi-start experiment.
    """
    return WaringDecomposer.fit(
        target, k, SeedStream.child_seed(root_seed, (1, index)),
        max_iterations=max_iterations
        )


class WaringDecomposer:
    """
    Provides static methods writing a partially symmetric tensor as a sum of
    k + 1 decomposable ones over the complex numbers, and counting the
    essentially distinct such decompositions found from many starts.

    Static Methods:
        random_linform: Draws a complex Gaussian linear form.
        expand: Sums the expansions of the terms.
        relative_residual: ||expand(dec) - target|| / ||target||.
        synthesize_target: A random target with a known decomposition.
        fit: Damped least squares from a random or given start.
        canonicalize: Canonical gauge and order of the terms.
        cluster: Groups decompositions up to the cluster tolerance.
        nu_experiment: Multi-start count of decompositions.
    """
    @staticmethod
    def random_linform(rng: np.random.Generator, width: int) -> np.ndarray:
        return (rng.standard_normal(width) + 1j * rng.standard_normal(width)) \
            / np.sqrt(2.0)

    @staticmethod
    def expand(fmt: Format, terms: List[RankOneTerm]) -> np.ndarray:
        total = np.zeros(SegreFormat.ncoeff(fmt), dtype=np.complex128)
        for term in terms:
            total = total + MultiPoly.expand_rank_one(
                fmt, term["scalar"], term["linforms"]
                )["coeffs"]
        return total

    @staticmethod
    def relative_residual(target: Section, terms: List[RankOneTerm]) -> float:
        coeffs = np.asarray(target["coeffs"], dtype=np.complex128)
        scale = MultiPoly.coefficient_norm(target) or 1.0
        return float(
            np.linalg.norm(WaringDecomposer.expand(target["format"], terms) - coeffs)
            ) / scale

    @staticmethod
    def synthesize_target(
        fmt: Format, k: int, seed: int = 0
        ) -> Tuple[Section, Decomposition]:
        """
        Draws k + 1 random canonical terms and returns their sum with the
        witness decomposition.

        Parameters:
            fmt (Format): The format.
            k (int): The decomposition has k + 1 terms.
            seed (int): The seed.

        Returns:
            Tuple[Section, Decomposition]: The target and its witness, whose
                residual is 0.
        """
        if k < 0:
            raise PreconditionError(f"Failed to synthesize target: k={k} < 0.")
        rng = SeedStream.generator(seed, (0,))
        terms: List[RankOneTerm] = []
        for _ in range(k + 1):
            terms.append({
                "scalar": complex(WaringDecomposer.random_linform(rng, 1)[0]),
                "linforms": [
                    WaringDecomposer.random_linform(rng, r + 1) for r in fmt["r"]
                ],
            })
        witness = WaringDecomposer.canonicalize({
            "format": fmt,
            "terms": terms,
            "residual": 0.0,
            "converged": True,
            "iterations": 0,
            "history": [],
        })
        target = MultiPoly.section(
            fmt, WaringDecomposer.expand(fmt, witness["terms"]), SCALAR_COMPLEX
            )
        witness["residual"] = WaringDecomposer.relative_residual(
            target, witness["terms"]
            )
        return target, witness

    @staticmethod
    def fit(
        target: Section,
        k: int,
        init_seed: int = 0,
        init: Optional[Decomposition] = None,
        max_iterations: int = MAX_ITERATIONS
        ) -> Decomposition:
        """
        Fits k + 1 decomposable terms to a target by damped least squares on
        the coefficients.

        Parameters:
            target (Section): The complex target.
            k (int): The number of terms minus one.
            init_seed (int): Seed of the random start.
            init (Optional[Decomposition]): Start from these terms instead.
            max_iterations (int): Iteration budget.

        Returns:
            Decomposition: Canonical terms; converged is False when the
                budget runs out.

        Raises:
            PreconditionError: If k < 0.
        """
        if k < 0:
            raise PreconditionError(f"Failed to fit: k={k} < 0.")
        fmt = target["format"]
        model = RankOneModel(fmt, k + 1, target["coeffs"])
        scale = float(np.linalg.norm(model.target)) or 1.0
        if init is not None:
            start = [
                [
                    l * (complex(term["scalar"]) ** (1.0 / fmt["d"][0]) if i == 0 else 1.0)
                    for (i, l) in enumerate(term["linforms"])
                ]
                for term in init["terms"]
            ]
        else:
            rng = SeedStream.generator(init_seed)
            radius = (scale / (k + 1)) ** (1.0 / sum(fmt["d"]))
            start = [
                [
                    radius * WaringDecomposer.random_linform(rng, r + 1)
                    / np.sqrt(r + 1)
                    for r in fmt["r"]
                ]
                for _ in range(k + 1)
            ]
        result = DampedLeastSquares.minimize(
            model.residual, model.jacobian, RankOneModel.pack(start),
            scale=scale, tol=CONVERGENCE_TOL, max_iterations=max_iterations
            )
        terms: List[RankOneTerm] = [
            {"scalar": complex(1.0), "linforms": linforms}
            for linforms in model.unpack(result["x"])
        ]
        dec = WaringDecomposer.canonicalize({
            "format": fmt,
            "terms": terms,
            "residual": result["relative_residual"],
            "converged": result["converged"],
            "iterations": result["iterations"],
            "history": [h / scale for h in result["history"]],
        })
        dec["residual"] = WaringDecomposer.relative_residual(target, dec["terms"])
        dec["converged"] = dec["residual"] <= CONVERGENCE_TOL
        return dec

    @staticmethod
    def canonicalize(dec: Decomposition) -> Decomposition:
        """
        Moves all scale and phase of every linear form into the scalar,
        leaving unit linear forms whose first nonvanishing coordinate is real
        positive, and sorts the terms on their rounded coordinates.

        Raises:
            PreconditionError: If a linear form vanishes.
        """
        fmt = dec["format"]
        terms: List[RankOneTerm] = []
        for term in dec["terms"]:
            scalar = complex(term["scalar"])
            linforms = []
            for (i, linform) in enumerate(term["linforms"]):
                linform = np.asarray(linform, dtype=np.complex128)
                norm = float(np.linalg.norm(linform))
                if norm == 0.0 or not np.isfinite(norm):
                    raise PreconditionError(
                        "Failed to canonicalize: a linear form vanishes."
                        )
                unit = linform / norm
                lead = next(
                    (c for c in unit if abs(c) > CANONICAL_ZERO_TOL), unit[0]
                    )
                phase = lead / abs(lead)
                linforms.append(unit / phase)
                scalar *= (norm * phase) ** fmt["d"][i]
            terms.append({"scalar": scalar, "linforms": linforms})

        def key(term: RankOneTerm):
            coordinates = []
            for linform in term["linforms"]:
                for c in linform:
                    coordinates.append(round(c.real, CANONICAL_ROUNDING) + 0.0)
                    coordinates.append(round(c.imag, CANONICAL_ROUNDING) + 0.0)
            return tuple(coordinates)

        canonical: Decomposition = {
            "format": fmt,
            "terms": sorted(terms, key=key),
            "residual": dec["residual"],
            "converged": dec["converged"],
            "iterations": dec["iterations"],
            "history": list(dec["history"]),
        }
        return canonical

    @staticmethod
    def cluster(decs: List[Decomposition], tol: float = CLUSTER_TOL) -> ClusterResult:
        """
        Groups canonical decompositions by single linkage at tol on the
        optimal matching distance. That distance is the assignment cost
        divided by the number of terms, so tol bounds the mean per-term
        distance whatever k is.

        Parameters:
            decs (List[Decomposition]): Canonical decompositions with the
                same number of terms.
            tol (float): The linkage threshold.

        Returns:
            ClusterResult: The count, labels and representatives.
        """
        count = len(decs)
        if count == 0:
            return {"nu_est": 0, "labels": [], "sizes": [], "representatives": []}
        if count == 1:
            raw = np.array([1])
        else:
            condensed = np.array([
                DecompositionMatcher.distance(decs[a], decs[b])
                for a in range(count) for b in range(a + 1, count)
            ])
            tree = scipy.cluster.hierarchy.linkage(condensed, method="single")
            raw = scipy.cluster.hierarchy.fcluster(tree, t=tol, criterion="distance")
        members: Dict[int, List[int]] = {}
        for (index, label) in enumerate(raw):
            members.setdefault(int(label), []).append(index)
        groups = sorted(
            members.values(),
            key=lambda m: (-len(m), min(decs[i]["residual"] for i in m))
        )
        labels = [0] * count
        for (label, group) in enumerate(groups):
            for index in group:
                labels[index] = label
        result: ClusterResult = {
            "nu_est": len(groups),
            "labels": labels,
            "sizes": [len(group) for group in groups],
            "representatives": [
                decs[min(group, key=lambda i: decs[i]["residual"])]
                for group in groups
            ],
        }
        return result

    @staticmethod
    def nu_experiment(
        fmt: Format,
        k: int,
        nstarts: int = SEARCH_STARTS,
        seed: int = 0,
        tol: float = CLUSTER_TOL,
        jobs: int = 1,
        max_iterations: int = MAX_ITERATIONS,
        target: Optional[Section] = None
        ) -> NuReport:
        """
        Fits nstarts random starts to a general target, keeps the converged
        fits and counts their clusters.

        Parameters:
            fmt (Format): The format.
            k (int): The decompositions have k + 1 terms.
            nstarts (int): The number of starts.
            seed (int): The root seed.
            tol (float): The cluster tolerance.
            jobs (int): Worker processes.
            max_iterations (int): Iteration budget of every fit.
            target (Optional[Section]): Decompose this target instead of a
                synthesized one.

        Returns:
            NuReport: The report; nu_est is a lower bound.
        """
        witness = None
        if target is None:
            target, witness = WaringDecomposer.synthesize_target(fmt, k, seed)
        decs = JobRunner.map(
            fit_start,
            [(target, k, seed, index, max_iterations) for index in range(nstarts)],
            jobs
            )
        converged = [dec for dec in decs if dec["converged"]]
        clusters = WaringDecomposer.cluster(converged, tol)
        sweep = {
            str(value): WaringDecomposer.cluster(converged, value)["nu_est"]
            for value in CLUSTER_SWEEP
        }
        witness_cluster = None
        if witness is not None:
            for (label, representative) in enumerate(clusters["representatives"]):
                if DecompositionMatcher.distance(witness, representative) <= tol:
                    witness_cluster = label
                    break
        residuals = [dec["residual"] for dec in decs]
        inconclusive = len(converged) < MIN_CONVERGED
        if inconclusive:
            LOGGER.warning(
                "Only %d of %d starts converged on %s: inconclusive",
                len(converged), nstarts, SegreFormat.label(fmt)
                )
        report: NuReport = {
            "format": fmt,
            "label": SegreFormat.label(fmt),
            "k": k,
            "seed": seed,
            "nstarts": nstarts,
            "nconverged": len(converged),
            "convergence_rate": len(converged) / nstarts if nstarts else 0.0,
            "nu_est": clusters["nu_est"],
            "statement": f"nu >= {clusters['nu_est']}",
            "inconclusive": inconclusive,
            "residual_stats": {
                "min": float(np.min(residuals)) if residuals else 0.0,
                "median": float(np.median(residuals)) if residuals else 0.0,
                "max": float(np.max(residuals)) if residuals else 0.0,
            },
            "cluster_sizes": clusters["sizes"],
            "tol": tol,
            "sweep": sweep,
            "witness_cluster": witness_cluster,
            "representatives": clusters["representatives"],
        }
        return report

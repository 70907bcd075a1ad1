import logging
from typing import List, Optional, Tuple

import numpy as np
import numpy.polynomial.polynomial as P
import scipy.linalg
from scipy.stats import unitary_group
from typing_extensions import TypedDict

from constants import (
    CHART_CHANGES,
    CHART_RADIUS_SLACK,
    COMMON_FACTOR_TOL,
    CURVE_SAMPLES,
    SCALAR_COMPLEX,
    SEARCH_ITERATIONS,
    SINGULAR_POINT_TOL
)
from damped_least_squares import DampedLeastSquares
from job_runner import SeedStream
from multipoly import FactorEvaluator, MonomialBasis, MultiPoly, ScalarArithmetic
from segre_format import Format

LOGGER = logging.getLogger(__name__)

COMPONENT_ISOLATED = "isolated"
COMPONENT_CURVE = "curve"

# Relative size under which a polynomial coefficient counts as zero
COEFFICIENT_ZERO_TOL = 1e-10


class Chart(TypedDict):
    """
    An affine chart of a product of projective spaces: in factor i the
    homogeneous point is frame[i] @ y_i, where y_i has a 1 at position
    anchor[i] and the chart variables elsewhere.

    Attributes:
        frame (List[np.ndarray]): One unitary matrix per factor.
        anchor (List[int]): The coordinate set to 1 in every factor.
    """
    frame: List[np.ndarray]
    anchor: List[int]


class SingularPoint(TypedDict):
    """
    A located singular point of a section.

    Attributes:
        coordinates (List[List[complex]]): Unit-norm homogeneous
            coordinates per factor.
        residual (float): Normalized value and gradient residual.
        component (str): "isolated" or "curve".
    """
    coordinates: List[List[complex]]
    residual: float
    component: str


class ChartAtlas:
    """
    Provides static methods for the affine charts used to search singular
    points, including points at infinity of the standard chart: in every
    frame the max-coordinate charts cover each factor, and their unit
    polydiscs cover the product.

    Static Methods:
        frames: The identity frame and CHART_CHANGES random unitary frames.
        charts: All anchor choices for the given frames.
        random_chart: One random frame and anchor.
        lift: Homogeneous coordinates of chart variables.
        tangent_map: d x / d w, constant on a chart.
        normalize: Unit-norm homogeneous coordinates.
        normalized_residual: Scale-free value and gradient size.
    """
    @staticmethod
    def frames(fmt: Format, rng: np.random.Generator) -> List[List[np.ndarray]]:
        frames = [[np.eye(r + 1, dtype=np.complex128) for r in fmt["r"]]]
        for _ in range(CHART_CHANGES):
            frames.append([
                np.asarray(unitary_group.rvs(r + 1, random_state=rng))
                for r in fmt["r"]
            ])
        return frames

    @staticmethod
    def charts(fmt: Format, rng: np.random.Generator) -> List[Chart]:
        charts: List[Chart] = []
        anchors = [[]]
        for r in fmt["r"]:
            anchors = [a + [c] for a in anchors for c in range(r, -1, -1)]
        for frame in ChartAtlas.frames(fmt, rng):
            for anchor in anchors:
                charts.append({"frame": frame, "anchor": anchor})
        return charts

    @staticmethod
    def random_chart(fmt: Format, rng: np.random.Generator) -> Chart:
        chart: Chart = {
            "frame": [
                np.asarray(unitary_group.rvs(r + 1, random_state=rng))
                for r in fmt["r"]
            ],
            "anchor": [int(rng.integers(0, r + 1)) for r in fmt["r"]],
        }
        return chart

    @staticmethod
    def lift(fmt: Format, chart: Chart, w: np.ndarray) -> List[np.ndarray]:
        x = []
        offset = 0
        for (i, r) in enumerate(fmt["r"]):
            y = np.empty(r + 1, dtype=np.complex128)
            free = [j for j in range(r + 1) if j != chart["anchor"][i]]
            y[chart["anchor"][i]] = 1.0
            y[free] = w[offset:offset + r]
            x.append(chart["frame"][i] @ y)
            offset += r
        return x

    @staticmethod
    def tangent_map(fmt: Format, chart: Chart) -> np.ndarray:
        """
        Returns the (sum(r_i + 1), sum(r_i)) matrix of d x / d w.
        """
        height = sum(r + 1 for r in fmt["r"])
        tangent = np.zeros((height, sum(fmt["r"])), dtype=np.complex128)
        row = col = 0
        for (i, r) in enumerate(fmt["r"]):
            free = [j for j in range(r + 1) if j != chart["anchor"][i]]
            tangent[row:row + r + 1, col:col + r] = chart["frame"][i][:, free]
            row += r + 1
            col += r
        return tangent

    @staticmethod
    def normalize(x: List[np.ndarray]) -> List[np.ndarray]:
        return [np.asarray(xi, dtype=np.complex128) / np.linalg.norm(xi) for xi in x]

    @staticmethod
    def normalized_residual(
        basis: MonomialBasis, coeffs: np.ndarray, x: List[np.ndarray]
        ) -> float:
        """
        (|f| + ||grad f||) / ||coeffs|| at unit-norm homogeneous coordinates.
        Vanishing of the homogeneous gradient alone characterizes singular
        points of the divisor.
        """
        x = ChartAtlas.normalize(x)
        tables = FactorEvaluator.derivative_tables(
            basis["factor_exponents"], x, 1, SCALAR_COMPLEX
            )
        widths = [e.shape[1] for e in basis["factor_exponents"]]
        zero = [tuple([0] * w) for w in widths]
        value = complex(np.dot(
            ScalarArithmetic.kron([t[z] for (t, z) in zip(tables, zero)], SCALAR_COMPLEX),
            coeffs
            ))
        gradient = []
        for (i, w) in enumerate(widths):
            for j in range(w):
                alpha = tuple(1 if t == j else 0 for t in range(w))
                vectors = [
                    tables[f][alpha if f == i else zero[f]]
                    for f in range(len(widths))
                ]
                gradient.append(complex(np.dot(
                    ScalarArithmetic.kron(vectors, SCALAR_COMPLEX), coeffs
                    )))
        scale = float(np.linalg.norm(coeffs)) or 1.0
        return (abs(value) + float(np.linalg.norm(gradient))) / scale


class ResultantSolver:
    """
    Provides static methods locating all singular points of a section on a
    product with two affine variables (P^2 or P^1 x P^1). On every chart
    the section is a bivariate polynomial f(u, v); its critical points are
    the common roots of f_u and f_v, found from the roots in v of the
    Sylvester resultant in u, and kept when f vanishes too.

    Static Methods:
        chart_polynomial: Coefficients of the section on a chart.
        sylvester: Sylvester matrix of two univariate polynomials.
        resultant_roots: v-roots of Res_u(g1, g2), or None on a common
            factor.
        solve_chart: Singular points inside the unit polydisc of a chart.
        search: Singular points over all charts.
    """
    @staticmethod
    def chart_polynomial(
        basis: MonomialBasis, coeffs: np.ndarray, chart: Chart
        ) -> np.ndarray:
        """
        Returns c with f(u, v) = sum c[a, b] u^a v^b on the chart, read off
        an FFT of the values on a grid of roots of unity.
        """
        fmt = basis["format"]
        degrees = [
            fmt["d"][i] for (i, r) in enumerate(fmt["r"]) for _ in range(r)
        ]
        sizes = [degree + 1 for degree in degrees]
        grids = [np.exp(2j * np.pi * np.arange(s) / s) for s in sizes]
        values = np.empty(sizes, dtype=np.complex128)
        zero = [[0] * e.shape[1] for e in basis["factor_exponents"]]
        for a in range(sizes[0]):
            for b in range(sizes[1]):
                x = ChartAtlas.lift(fmt, chart, np.array([grids[0][a], grids[1][b]]))
                row = MultiPoly.derivative_row(basis, x, zero)
                values[a, b] = np.dot(row, coeffs)
        return np.fft.fft2(values) / (sizes[0] * sizes[1])

    @staticmethod
    def _trim(c: np.ndarray, axis: int, tol: float) -> np.ndarray:
        while c.shape[axis] > 1:
            last = np.take(c, -1, axis=axis)
            if np.max(np.abs(last)) > tol:
                break
            c = np.delete(c, -1, axis=axis)
        return c

    @staticmethod
    def sylvester(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """
        Sylvester matrix of a and b given low to high.
        """
        m = a.shape[0] - 1
        n = b.shape[0] - 1
        s = np.zeros((m + n, m + n), dtype=np.complex128)
        for i in range(n):
            s[i, i:i + m + 1] = a[::-1]
        for i in range(m):
            s[n + i, i:i + n + 1] = b[::-1]
        return s

    @staticmethod
    def _univariate_roots(c: np.ndarray, tol: float) -> np.ndarray:
        c = ResultantSolver._trim(np.asarray(c, dtype=np.complex128), 0, tol)
        if c.shape[0] <= 1:
            return np.zeros(0, dtype=np.complex128)
        return np.roots(c[::-1])

    @staticmethod
    def resultant_roots(
        g1: np.ndarray, g2: np.ndarray, tol: float
        ) -> Optional[np.ndarray]:
        """
        Returns the roots in v of Res_u(g1, g2), sampled on roots of unity,
        or None when g1 and g2 share a factor.
        """
        m = g1.shape[0] - 1
        n = g2.shape[0] - 1
        if m == 0:
            return ResultantSolver._univariate_roots(g1[0], tol)
        if n == 0:
            return ResultantSolver._univariate_roots(g2[0], tol)
        degree = m * (g2.shape[1] - 1) + n * (g1.shape[1] - 1)
        samples = degree + 1
        nodes = np.exp(2j * np.pi * np.arange(samples) / samples)
        values = np.empty(samples, dtype=np.complex128)
        singular = 0
        for (t, v) in enumerate(nodes):
            powers = v ** np.arange(max(g1.shape[1], g2.shape[1]))
            s = ResultantSolver.sylvester(
                g1 @ powers[:g1.shape[1]], g2 @ powers[:g2.shape[1]]
                )
            sigma = scipy.linalg.svd(s, compute_uv=False)
            if sigma[0] == 0.0 or sigma[-1] <= COMMON_FACTOR_TOL * sigma[0]:
                singular += 1
            values[t] = np.linalg.det(s)
        if singular == samples:
            return None
        coefficients = np.fft.fft(values) / samples
        scale = float(np.max(np.abs(coefficients)))
        return ResultantSolver._univariate_roots(
            coefficients, COEFFICIENT_ZERO_TOL * scale
            )

    @staticmethod
    def _newton(
        g1: np.ndarray, g2: np.ndarray, u: complex, v: complex
        ) -> Tuple[complex, complex]:
        d1u = P.polyder(g1, axis=0)
        d1v = P.polyder(g1, axis=1)
        d2u = P.polyder(g2, axis=0)
        d2v = P.polyder(g2, axis=1)
        for _ in range(SEARCH_ITERATIONS):
            r = np.array([P.polyval2d(u, v, g1), P.polyval2d(u, v, g2)])
            j = np.array([
                [P.polyval2d(u, v, d1u), P.polyval2d(u, v, d1v)],
                [P.polyval2d(u, v, d2u), P.polyval2d(u, v, d2v)],
            ])
            try:
                step = np.linalg.solve(j, -r)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(step)):
                break
            u, v = u + step[0], v + step[1]
            if np.max(np.abs(step)) <= 1e-15 * (1.0 + abs(u) + abs(v)):
                break
        return complex(u), complex(v)

    @staticmethod
    def _slice_roots(
        g1: np.ndarray, g2: np.ndarray, v: complex, tol: float
        ) -> np.ndarray:
        roots = []
        for g in (g1, g2):
            roots.extend(ResultantSolver._univariate_roots(
                g @ (v ** np.arange(g.shape[1])), tol
                ))
        return np.asarray(roots, dtype=np.complex128)

    @staticmethod
    def solve_chart(
        basis: MonomialBasis,
        coeffs: np.ndarray,
        chart: Chart,
        rng: np.random.Generator
        ) -> List[SingularPoint]:
        """
        Returns the singular points of the section whose chart variables lie
        in the unit polydisc, and points of a singular curve when the two
        partials share a factor.
        """
        fmt = basis["format"]
        c = ResultantSolver.chart_polynomial(basis, coeffs, chart)
        tol = COEFFICIENT_ZERO_TOL * (float(np.max(np.abs(c))) or 1.0)
        g1 = ResultantSolver._trim(ResultantSolver._trim(P.polyder(c, axis=0), 0, tol), 1, tol)
        g2 = ResultantSolver._trim(ResultantSolver._trim(P.polyder(c, axis=1), 0, tol), 1, tol)
        flat1 = np.max(np.abs(g1)) <= tol
        flat2 = np.max(np.abs(g2)) <= tol
        v_roots = None
        if not (flat1 or flat2):
            v_roots = ResultantSolver.resultant_roots(g1, g2, tol)
        found: List[SingularPoint] = []

        def accept(u: complex, v: complex, component: str) -> None:
            x = ChartAtlas.lift(fmt, chart, np.array([u, v]))
            if not all(np.all(np.isfinite(xi)) for xi in x):
                return
            residual = ChartAtlas.normalized_residual(basis, coeffs, x)
            if residual <= SINGULAR_POINT_TOL:
                found.append({
                    "coordinates": [list(xi) for xi in ChartAtlas.normalize(x)],
                    "residual": residual,
                    "component": component,
                })

        if v_roots is None:
            LOGGER.debug("Partials share a factor on a chart, sampling the curve")
            for _ in range(CURVE_SAMPLES):
                v = complex(np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))
                for u in ResultantSolver._slice_roots(g1, g2, v, tol):
                    accept(complex(u), v, COMPONENT_CURVE)
            return found
        radius = 1.0 + CHART_RADIUS_SLACK
        for v in v_roots:
            if abs(v) > radius + 1e-3:
                continue
            for u in ResultantSolver._slice_roots(g1, g2, complex(v), tol):
                if abs(u) > radius + 1e-3:
                    continue
                u_new, v_new = ResultantSolver._newton(g1, g2, complex(u), complex(v))
                if abs(u_new) <= radius and abs(v_new) <= radius:
                    accept(u_new, v_new, COMPONENT_ISOLATED)
        return found

    @staticmethod
    def search(
        basis: MonomialBasis, coeffs: np.ndarray, rng: np.random.Generator
        ) -> List[SingularPoint]:
        found: List[SingularPoint] = []
        for chart in ChartAtlas.charts(basis["format"], rng):
            found.extend(ResultantSolver.solve_chart(basis, coeffs, chart, rng))
        return found


def search_from_start(
    fmt: Format, coeffs: np.ndarray, root_seed: int, index: int
    ) -> Optional[Tuple[List[np.ndarray], float]]:
    """
    One start of the heuristic search: damped least squares on
    (f, grad_w f) in a random chart from a random point of its polydisc.
    Returns the homogeneous point and its normalized residual when the
    descent reaches a singular point.
    """
    rng = SeedStream.generator(root_seed, (1, index))
    basis = MultiPoly.basis(fmt)
    chart = ChartAtlas.random_chart(fmt, rng)
    tangent = ChartAtlas.tangent_map(fmt, chart)
    size = sum(fmt["r"])
    radius = np.sqrt(rng.random(size))
    w0 = radius * np.exp(2j * np.pi * rng.random(size))

    def evaluate(w: np.ndarray):
        x = ChartAtlas.lift(fmt, chart, w)
        value, gradient, hessian = MultiPoly.homogeneous_rows(basis, x)
        g = tangent.T @ (gradient @ coeffs)
        h = tangent.T @ (hessian @ coeffs) @ tangent
        return complex(value @ coeffs), g, h

    def residual(w: np.ndarray) -> np.ndarray:
        value, g, _ = evaluate(w)
        return np.concatenate([[value], g])

    def jacobian(w: np.ndarray) -> np.ndarray:
        _, g, h = evaluate(w)
        return np.vstack([g[None, :], h])

    result = DampedLeastSquares.minimize(
        residual, jacobian, w0,
        scale=float(np.linalg.norm(coeffs)),
        tol=SINGULAR_POINT_TOL * 1e-3,
        max_iterations=SEARCH_ITERATIONS
        )
    x = ChartAtlas.lift(fmt, chart, result["x"])
    if not all(np.all(np.isfinite(xi)) for xi in x):
        return None
    score = ChartAtlas.normalized_residual(basis, coeffs, x)
    if score > SINGULAR_POINT_TOL:
        return None
    return ChartAtlas.normalize(x), score

import itertools
from typing import List, Optional, Sequence, Tuple

import numpy as np
from typing_extensions import TypedDict

from constants import SCALAR_COMPLEX, SCALAR_PRIME
from exceptions import FormatError
from point_config import PointSampler, Scalar
from segre_format import Format, SegreFormat
from .helpers import FactorEvaluator, ScalarArithmetic


class MonomialBasis(TypedDict):
    """
    Canonical basis of the multihomogeneous forms of a format.

    Attributes:
        format (Format): The format.
        factor_exponents (List[np.ndarray]): Per factor, the exponent
            vectors in lexicographic descending order.
        size (int): ncoeff(format); the global index is mixed-radix with
            factor 1 most significant.
    """
    format: Format
    factor_exponents: List[np.ndarray]
    size: int


class Section(TypedDict):
    """
    A multihomogeneous form given by its coefficients in basis order.

    Attributes:
        format (Format): The format.
        kind (str): The scalar kind of the coefficients.
        prime (Optional[int]): The modulus for the prime kind.
        coeffs (np.ndarray): ncoeff(format) coefficients.
    """
    format: Format
    kind: str
    prime: Optional[int]
    coeffs: np.ndarray


class MultiPoly:
    """
    Provides static methods for evaluation, differentiation and rank-one
    expansion of multihomogeneous forms on a product of projective spaces.
    Rows are always in basis order, so that a row times a coefficient
    vector is the value of the corresponding derivative of the form.

    Static Methods:
        basis: The canonical monomial basis of a format.
        monomial: The exponent vectors of one global index.
        section: Builds a Section record.
        derivative_row: Row of one mixed derivative at a homogeneous point.
        eval_monomial_row: Row of monomial values at an affine point.
        eval_partial_rows: Rows of first affine partials.
        eval_second_partial_rows: Rows of second affine partials.
        homogeneous_rows: Value, gradient and Hessian rows with respect to
            all homogeneous coordinates.
        expand_rank_one: Coefficients of scalar * l_1^{d_1} ... l_n^{d_n}.
        evaluate: Value of a section at an affine point.
        evaluate_homogeneous: Value of a section at a homogeneous point.
        coefficient_norm: Norm of the coefficients of a complex section.
    """
    @staticmethod
    def basis(fmt: Format) -> MonomialBasis:
        """
        Returns the canonical monomial basis of the format.
        """
        factor_exponents = [
            FactorEvaluator.exponents(r, d) for (r, d) in zip(fmt["r"], fmt["d"])
        ]
        basis: MonomialBasis = {
            "format": fmt,
            "factor_exponents": factor_exponents,
            "size": SegreFormat.ncoeff(fmt),
        }
        return basis

    @staticmethod
    def monomial(basis: MonomialBasis, index: int) -> List[Tuple[int, ...]]:
        """
        Returns the per-factor exponent vectors of a global index.
        """
        sizes = [e.shape[0] for e in basis["factor_exponents"]]
        digits = []
        for size in reversed(sizes):
            index, digit = divmod(index, size)
            digits.append(digit)
        digits.reverse()
        return [
            tuple(int(v) for v in basis["factor_exponents"][i][digit])
            for (i, digit) in enumerate(digits)
        ]

    @staticmethod
    def section(
        fmt: Format, coeffs, kind: str = SCALAR_COMPLEX,
        prime: Optional[int] = None
        ) -> Section:
        """
        Builds a Section, checking the coefficient count.

        Raises:
            FormatError: If the number of coefficients is not ncoeff.
        """
        array = ScalarArithmetic.asarray(coeffs, kind, prime)
        if array.shape != (SegreFormat.ncoeff(fmt),):
            raise FormatError(
                f"Failed to build section: {array.shape[0]} coefficients for "
                f"{SegreFormat.label(fmt)}, expected {SegreFormat.ncoeff(fmt)}."
                )
        section: Section = {
            "format": fmt,
            "kind": kind,
            "prime": prime if kind == SCALAR_PRIME else None,
            "coeffs": array,
        }
        return section

    @staticmethod
    def derivative_row(
        basis: MonomialBasis,
        x: List[Sequence[Scalar]],
        alphas: List[Sequence[int]],
        kind: str = SCALAR_COMPLEX,
        prime: Optional[int] = None
        ) -> np.ndarray:
        """
        Row of the mixed derivative d^{alpha_1} ... d^{alpha_n} of every
        monomial at the homogeneous point x.
        """
        vectors = [
            FactorEvaluator.derivative(exponents, xi, alpha, kind, prime)
            for (exponents, xi, alpha) in zip(basis["factor_exponents"], x, alphas)
        ]
        return ScalarArithmetic.kron(vectors, kind, prime)

    @staticmethod
    def eval_monomial_row(
        basis: MonomialBasis,
        point: List[Sequence[Scalar]],
        kind: str = SCALAR_COMPLEX,
        prime: Optional[int] = None
        ) -> np.ndarray:
        """
        Returns the values of all monomials at an affine point.

        Parameters:
            basis (MonomialBasis): The basis.
            point (List[Sequence[Scalar]]): r_i affine coordinates per factor.
            kind (str): The scalar kind.
            prime (Optional[int]): The modulus for the prime kind.

        Returns:
            np.ndarray: ncoeff values.
        """
        x = PointSampler.homogeneous(point, kind)
        tables = FactorEvaluator.derivative_tables(
            basis["factor_exponents"], x, 0, kind, prime
            )
        return ScalarArithmetic.kron(
            [next(iter(t.values())) for t in tables], kind, prime
            )

    @staticmethod
    def _affine_rows(
        basis: MonomialBasis,
        point: List[Sequence[Scalar]],
        order: int,
        kind: str,
        prime: Optional[int]
        ) -> np.ndarray:
        x = PointSampler.homogeneous(point, kind)
        tables = FactorEvaluator.derivative_tables(
            basis["factor_exponents"], x, order, kind, prime
            )
        zero = [tuple([0] * e.shape[1]) for e in basis["factor_exponents"]]
        variables = [
            (i, j)
            for (i, r) in enumerate(basis["format"]["r"])
            for j in range(r)
        ]

        def row_for(derivatives: List[Tuple[int, int]]) -> np.ndarray:
            alphas = [list(z) for z in zero]
            for (i, j) in derivatives:
                alphas[i][j] += 1
            return ScalarArithmetic.kron(
                [tables[i][tuple(a)] for (i, a) in enumerate(alphas)],
                kind, prime
                )

        dtype = ScalarArithmetic.dtype(kind)
        if order == 1:
            rows = np.empty((len(variables), basis["size"]), dtype=dtype)
            for (v, variable) in enumerate(variables):
                rows[v] = row_for([variable])
            return rows
        rows = np.empty(
            (len(variables), len(variables), basis["size"]), dtype=dtype
            )
        for (a, b) in itertools.combinations_with_replacement(
            range(len(variables)), 2
            ):
            rows[a, b] = row_for([variables[a], variables[b]])
            rows[b, a] = rows[a, b]
        return rows

    @staticmethod
    def eval_partial_rows(
        basis: MonomialBasis,
        point: List[Sequence[Scalar]],
        kind: str = SCALAR_COMPLEX,
        prime: Optional[int] = None
        ) -> np.ndarray:
        """
        Returns the (sum(r), ncoeff) matrix whose row v holds the partial
        derivative of every monomial with respect to affine variable v,
        variables ordered factor by factor.
        """
        return MultiPoly._affine_rows(basis, point, 1, kind, prime)

    @staticmethod
    def eval_second_partial_rows(
        basis: MonomialBasis,
        point: List[Sequence[Scalar]],
        kind: str = SCALAR_COMPLEX,
        prime: Optional[int] = None
        ) -> np.ndarray:
        """
        Returns the (sum(r), sum(r), ncoeff) array of second affine partial
        derivatives of every monomial.
        """
        return MultiPoly._affine_rows(basis, point, 2, kind, prime)

    @staticmethod
    def homogeneous_rows(
        basis: MonomialBasis, x: List[np.ndarray]
        ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Complex value row, gradient rows and Hessian rows with respect to
        all homogeneous coordinates, factor by factor.

        Returns:
            Tuple[np.ndarray, np.ndarray, np.ndarray]: Shapes (ncoeff,),
                (H, ncoeff) and (H, H, ncoeff) with H = sum(r_i + 1).
        """
        tables = FactorEvaluator.derivative_tables(
            basis["factor_exponents"], x, 2, SCALAR_COMPLEX
            )
        widths = [e.shape[1] for e in basis["factor_exponents"]]
        variables = [(i, j) for (i, w) in enumerate(widths) for j in range(w)]

        def row_for(derivatives: List[Tuple[int, int]]) -> np.ndarray:
            alphas = [[0] * w for w in widths]
            for (i, j) in derivatives:
                alphas[i][j] += 1
            return ScalarArithmetic.kron(
                [tables[i][tuple(a)] for (i, a) in enumerate(alphas)],
                SCALAR_COMPLEX
                )

        value = row_for([])
        gradient = np.empty((len(variables), basis["size"]), dtype=np.complex128)
        hessian = np.empty(
            (len(variables), len(variables), basis["size"]), dtype=np.complex128
            )
        for (v, variable) in enumerate(variables):
            gradient[v] = row_for([variable])
        for (a, b) in itertools.combinations_with_replacement(
            range(len(variables)), 2
            ):
            hessian[a, b] = row_for([variables[a], variables[b]])
            hessian[b, a] = hessian[a, b]
        return value, gradient, hessian

    @staticmethod
    def expand_rank_one(
        fmt: Format,
        scalar: Scalar,
        linforms: List[Sequence[Scalar]],
        kind: str = SCALAR_COMPLEX,
        prime: Optional[int] = None
        ) -> Section:
        """
        Expands scalar * l_1^{d_1} (x) ... (x) l_n^{d_n}: the coefficient of
        the monomial (e_1, ..., e_n) is
        scalar * prod_i multinomial(d_i; e_i) prod_j l_ij^{e_ij}.

        Raises:
            FormatError: If a linear form has the wrong length.
        """
        basis = MultiPoly.basis(fmt)
        vectors = []
        for (i, (exponents, linform)) in enumerate(
            zip(basis["factor_exponents"], linforms)
            ):
            if len(linform) != fmt["r"][i] + 1:
                raise FormatError(
                    f"Failed to expand: linear form {i} has length "
                    f"{len(linform)}, expected {fmt['r'][i] + 1}."
                    )
            powers = FactorEvaluator.derivative(
                exponents, linform, [0] * exponents.shape[1], kind, prime
                )
            weights = ScalarArithmetic.asarray(
                FactorEvaluator.multinomials(exponents, fmt["d"][i]), kind, prime
                )
            vectors.append(ScalarArithmetic.reduce(weights * powers, kind, prime))
        coeffs = ScalarArithmetic.scale(
            scalar, ScalarArithmetic.kron(vectors, kind, prime), kind, prime
            )
        return MultiPoly.section(fmt, coeffs, kind, prime)

    @staticmethod
    def evaluate(section: Section, point: List[Sequence[Scalar]]):
        """
        Returns the value of a section at an affine point.
        """
        basis = MultiPoly.basis(section["format"])
        row = MultiPoly.eval_monomial_row(
            basis, point, section["kind"], section["prime"]
            )
        return ScalarArithmetic.dot(
            row, section["coeffs"], section["kind"], section["prime"]
            )

    @staticmethod
    def evaluate_homogeneous(section: Section, x: List[Sequence[complex]]) -> complex:
        """
        Returns the value of a complex section at a homogeneous point.
        """
        basis = MultiPoly.basis(section["format"])
        zero = [[0] * e.shape[1] for e in basis["factor_exponents"]]
        row = MultiPoly.derivative_row(basis, x, zero)
        return complex(np.dot(row, section["coeffs"]))

    @staticmethod
    def coefficient_norm(section: Section) -> float:
        """
        Euclidean norm of the coefficients of a complex section.
        """
        return float(np.linalg.norm(np.asarray(section["coeffs"], dtype=complex)))

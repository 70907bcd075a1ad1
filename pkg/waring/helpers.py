from typing import List

import numpy as np
from scipy.optimize import linear_sum_assignment

from constants import SCALAR_COMPLEX
from multipoly import FactorEvaluator, ScalarArithmetic
from segre_format import Format


class RankOneModel:
    """
    This class implements the residual map of a sum of nterms decomposable
    forms l_1^{d_1} ... l_n^{d_n} against a target, over complex
    parameters. The scalar of every term is absorbed in its linear forms,
    so the parameters are the stacked linear forms, term by term and
    factor by factor.

    Attributes:
        format (Format): The format.
        nterms (int): The number of terms.
        target (np.ndarray): The target coefficients.
        size (int): The number of complex parameters.

    Methods:
        unpack: Splits a parameter vector into linear forms.
        pack: Stacks linear forms into a parameter vector.
        expand: The coefficients of the sum.
        residual: expand(params) - target.
        jacobian: d residual / d params.
    """
    def __init__(self, fmt: Format, nterms: int, target: np.ndarray):
        self.format = fmt
        self.nterms = nterms
        self.target = np.asarray(target, dtype=np.complex128)
        self.widths = [r + 1 for r in fmt["r"]]
        self.exponents = [
            FactorEvaluator.exponents(r, d) for (r, d) in zip(fmt["r"], fmt["d"])
        ]
        self.weights = [
            np.asarray(FactorEvaluator.multinomials(e, d), dtype=np.complex128)
            for (e, d) in zip(self.exponents, fmt["d"])
        ]
        self.size = nterms * sum(self.widths)

    def unpack(self, params: np.ndarray) -> List[List[np.ndarray]]:
        terms = []
        offset = 0
        for _ in range(self.nterms):
            linforms = []
            for width in self.widths:
                linforms.append(np.asarray(params[offset:offset + width]))
                offset += width
            terms.append(linforms)
        return terms

    @staticmethod
    def pack(terms: List[List[np.ndarray]]) -> np.ndarray:
        return np.concatenate(
            [np.asarray(l, dtype=np.complex128) for linforms in terms for l in linforms]
            )

    def _powers(self, i: int, linform: np.ndarray) -> np.ndarray:
        zero = [0] * self.widths[i]
        return self.weights[i] * FactorEvaluator.derivative(
            self.exponents[i], linform, zero, SCALAR_COMPLEX
            )

    def _power_derivatives(self, i: int, linform: np.ndarray) -> np.ndarray:
        columns = []
        for j in range(self.widths[i]):
            alpha = [1 if t == j else 0 for t in range(self.widths[i])]
            columns.append(self.weights[i] * FactorEvaluator.derivative(
                self.exponents[i], linform, alpha, SCALAR_COMPLEX
                ))
        return np.stack(columns, axis=1)

    def expand(self, params: np.ndarray) -> np.ndarray:
        total = np.zeros_like(self.target)
        for linforms in self.unpack(params):
            total = total + ScalarArithmetic.kron(
                [self._powers(i, l) for (i, l) in enumerate(linforms)],
                SCALAR_COMPLEX
                )
        return total

    def residual(self, params: np.ndarray) -> np.ndarray:
        return self.expand(params) - self.target

    def jacobian(self, params: np.ndarray) -> np.ndarray:
        """
        The column of parameter j of factor i of a term is the Kronecker
        product of the power vectors of the other factors with the
        derivative of the i-th power vector.
        """
        blocks = []
        for linforms in self.unpack(params):
            powers = [self._powers(i, l) for (i, l) in enumerate(linforms)]
            for (i, l) in enumerate(linforms):
                derivative = self._power_derivatives(i, l)
                factors = [p[:, None] for p in powers]
                factors[i] = derivative
                block = factors[0]
                for f in factors[1:]:
                    block = np.kron(block, f)
                blocks.append(block)
        return np.concatenate(blocks, axis=1)


class DecompositionMatcher:
    """
    Provides static methods comparing canonical decompositions up to the
    order of their terms.

    Static Methods:
        term_distance: Linear form distances plus relative scalar distance.
        distance: Mean matched term distance under the optimal assignment.
    """
    @staticmethod
    def term_distance(a, b) -> float:
        linforms = sum(
            float(np.linalg.norm(np.asarray(x) - np.asarray(y)))
            for (x, y) in zip(a["linforms"], b["linforms"])
        )
        scale = max(abs(a["scalar"]), abs(b["scalar"])) or 1.0
        return linforms + abs(a["scalar"] - b["scalar"]) / scale

    @staticmethod
    def distance(a, b) -> float:
        """
        Returns the mean term distance of the optimal matching between the
        terms of two decompositions with the same number of terms.
        """
        cost = np.array([
            [DecompositionMatcher.term_distance(x, y) for y in b["terms"]]
            for x in a["terms"]
        ])
        rows, cols = linear_sum_assignment(cost)
        return float(cost[rows, cols].mean())

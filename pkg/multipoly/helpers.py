import math
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from constants import SCALAR_COMPLEX, SCALAR_PRIME, SCALAR_RATIONAL
from exceptions import PreconditionError


class ScalarArithmetic:
    """
    Provides static methods hiding the three scalar kinds behind one array
    interface: int64 residues modulo a prime below 2^31, object arrays of
    Fractions, and complex128 arrays.

    Static Methods:
        dtype: numpy dtype used for a kind.
        asarray: Converts scalars to an array of the kind.
        reduce: Normalizes an array of the kind (mod p for primes).
        kron: Kronecker product of 1-D vectors, first vector most
            significant.
        dot: Row times coefficient vector.
        matvec: Matrix times coefficient vector.
        scale: Scalar times vector.
    """
    @staticmethod
    def dtype(kind: str):
        if kind == SCALAR_PRIME:
            return np.int64
        if kind == SCALAR_RATIONAL:
            return object
        if kind == SCALAR_COMPLEX:
            return np.complex128
        raise PreconditionError(f"Failed to pick dtype: unknown kind {kind!r}")

    @staticmethod
    def asarray(values, kind: str, prime: Optional[int] = None) -> np.ndarray:
        if kind == SCALAR_PRIME:
            return np.array([int(v) % prime for v in np.ravel(values)],
                            dtype=np.int64).reshape(np.shape(values))
        if kind == SCALAR_RATIONAL:
            flat = [Fraction(v) for v in np.ravel(np.asarray(values, dtype=object))]
            out = np.empty(len(flat), dtype=object)
            out[:] = flat
            return out.reshape(np.shape(values))
        return np.asarray(values, dtype=np.complex128)

    @staticmethod
    def reduce(array: np.ndarray, kind: str, prime: Optional[int]) -> np.ndarray:
        if kind == SCALAR_PRIME:
            return np.mod(array, prime)
        return array

    @staticmethod
    def kron(
        vectors: Sequence[np.ndarray], kind: str, prime: Optional[int] = None
        ) -> np.ndarray:
        def step(a: np.ndarray, b: np.ndarray) -> np.ndarray:
            return ScalarArithmetic.reduce(np.outer(a, b).ravel(), kind, prime)
        return reduce(step, vectors)

    @staticmethod
    def dot(row: np.ndarray, coeffs: np.ndarray, kind: str,
            prime: Optional[int] = None):
        if kind == SCALAR_PRIME:
            return int(np.mod(np.mod(row * coeffs, prime).sum(), prime))
        if kind == SCALAR_RATIONAL:
            return sum((a * b for (a, b) in zip(row, coeffs)), Fraction(0))
        return complex(np.dot(row, coeffs))

    @staticmethod
    def matvec(matrix: np.ndarray, coeffs: np.ndarray, kind: str,
               prime: Optional[int] = None) -> np.ndarray:
        if kind == SCALAR_PRIME:
            products = np.mod(matrix * coeffs[None, :], prime)
            return np.mod(products.sum(axis=1), prime)
        if kind == SCALAR_RATIONAL:
            return np.array(
                [ScalarArithmetic.dot(row, coeffs, kind) for row in matrix],
                dtype=object
                )
        return matrix @ coeffs

    @staticmethod
    def scale(value, vector: np.ndarray, kind: str,
              prime: Optional[int] = None) -> np.ndarray:
        if kind == SCALAR_PRIME:
            return np.mod(vector * (int(value) % prime), prime)
        if kind == SCALAR_RATIONAL:
            return vector * Fraction(value)
        return complex(value) * vector


class FactorEvaluator:
    """
    Provides static methods evaluating the monomials of one factor, and
    their derivatives, at a homogeneous point.

    Static Methods:
        exponents: Exponent vectors of degree d in r+1 variables, in
            lexicographic descending order.
        falling: Falling factorials e (e-1) ... (e-a+1), vectorized in e.
        derivative: Values of d^alpha x^e for every exponent e.
        multinomials: Multinomial coefficients d! / prod e_j!.
        derivative_tables: All derivatives up to a given order.
    """
    @staticmethod
    def exponents(r: int, d: int) -> np.ndarray:
        """
        Returns the (C(r+d, r), r+1) array of exponent vectors of total
        degree d, lexicographically descending on (e_0, ..., e_r).
        """
        def compositions(total: int, parts: int):
            if parts == 1:
                yield (total,)
                return
            for first in range(total, -1, -1):
                for rest in compositions(total - first, parts - 1):
                    yield (first,) + rest
        return np.array(list(compositions(d, r + 1)), dtype=np.int64)

    @staticmethod
    def falling(e: np.ndarray, a: int) -> np.ndarray:
        out = np.ones_like(e)
        for t in range(a):
            out = out * (e - t)
        return out

    @staticmethod
    def derivative(
        exponents: np.ndarray,
        x: Sequence,
        alpha: Sequence[int],
        kind: str,
        prime: Optional[int] = None
        ) -> np.ndarray:
        """
        Values at x of the derivative d^alpha of every monomial x^e.

        Parameters:
            exponents (np.ndarray): Exponent vectors of the factor.
            x (Sequence): Homogeneous coordinates of the factor.
            alpha (Sequence[int]): Derivative multi-index (length r+1).
            kind (str): The scalar kind.
            prime (Optional[int]): The modulus for the prime kind.

        Returns:
            np.ndarray: One value per monomial.
        """
        alpha = np.asarray(alpha, dtype=np.int64)
        reduced = exponents - alpha[None, :]
        valid = np.all(reduced >= 0, axis=1)
        coefficient = np.ones(exponents.shape[0], dtype=np.int64)
        for (j, a) in enumerate(alpha):
            if a:
                coefficient = coefficient * FactorEvaluator.falling(
                    exponents[:, j], int(a)
                    )
        coefficient = np.where(valid, coefficient, 0)
        reduced = np.where(valid[:, None], reduced, 0)
        if kind == SCALAR_COMPLEX:
            x = np.asarray(x, dtype=np.complex128)
            values = np.prod(x[None, :] ** reduced, axis=1)
            return coefficient * values
        if kind == SCALAR_PRIME:
            out = np.zeros(exponents.shape[0], dtype=np.int64)
            for m in np.nonzero(coefficient)[0]:
                value = int(coefficient[m]) % prime
                for (xj, ej) in zip(x, reduced[m]):
                    value = value * pow(int(xj), int(ej), prime) % prime
                out[m] = value
            return out
        out = np.empty(exponents.shape[0], dtype=object)
        for m in range(exponents.shape[0]):
            value = Fraction(int(coefficient[m]))
            if value:
                for (xj, ej) in zip(x, reduced[m]):
                    value *= Fraction(xj) ** int(ej)
            out[m] = value
        return out

    @staticmethod
    def multinomials(exponents: np.ndarray, d: int) -> List[int]:
        return [
            math.factorial(d) // math.prod(math.factorial(int(e)) for e in row)
            for row in exponents
        ]

    @staticmethod
    def derivative_tables(
        factor_exponents: List[np.ndarray],
        x: List[Sequence],
        order: int,
        kind: str,
        prime: Optional[int] = None
        ) -> List[Dict[Tuple[int, ...], np.ndarray]]:
        """
        For every factor, maps each derivative multi-index of total order
        <= order to the vector of derivative values at x.
        """
        tables = []
        for (exponents, xi) in zip(factor_exponents, x):
            width = exponents.shape[1]
            table = {}
            alphas = [tuple([0] * width)]
            if order >= 1:
                alphas += [
                    tuple(1 if t == j else 0 for t in range(width))
                    for j in range(width)
                ]
            if order >= 2:
                for j in range(width):
                    for l in range(j, width):
                        alpha = [0] * width
                        alpha[j] += 1
                        alpha[l] += 1
                        alphas.append(tuple(alpha))
            for alpha in alphas:
                table[alpha] = FactorEvaluator.derivative(
                    exponents, xi, alpha, kind, prime
                    )
            tables.append(table)
        return tables

from fractions import Fraction
from typing import List, Tuple

import numpy as np
import scipy.linalg
import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from constants import NUMERICAL_RANK_TOL, RATIONAL_NCOEFF_LIMIT
from exceptions import PreconditionError


class ModularElimination:
    """
    Provides static methods for exact Gauss-Jordan elimination over F_p with
    p < 2^31, on int64 arrays: every product of two residues fits in 62 bits.

    Static Methods:
        row_reduce: Reduced row echelon form and pivot columns.
        rank: Rank over F_p.
        nullspace: Basis of the right kernel over F_p.
    """
    @staticmethod
    def row_reduce(matrix: np.ndarray, prime: int) -> Tuple[np.ndarray, List[int]]:
        """
        Returns the reduced row echelon form of matrix modulo prime.

        Parameters:
            matrix (np.ndarray): Integer matrix.
            prime (int): A prime below 2^31.

        Returns:
            Tuple[np.ndarray, List[int]]: The reduced matrix and the pivot
                column of each nonzero row.
        """
        a = np.mod(np.array(matrix, dtype=np.int64), prime)
        if a.ndim != 2:
            a = a.reshape(0, 0)
        m, n = a.shape
        pivots: List[int] = []
        row = 0
        for col in range(n):
            if row == m:
                break
            candidates = np.nonzero(a[row:, col])[0]
            if candidates.size == 0:
                continue
            pivot = row + int(candidates[0])
            if pivot != row:
                a[[row, pivot], :] = a[[pivot, row], :]
            inverse = pow(int(a[row, col]), -1, prime)
            a[row, :] = np.mod(a[row, :] * inverse, prime)
            factors = a[:, col].copy()
            factors[row] = 0
            targets = np.nonzero(factors)[0]
            if targets.size:
                a[targets, :] = np.mod(
                    a[targets, :] - np.outer(factors[targets], a[row, :]), prime
                    )
            pivots.append(col)
            row += 1
        return a, pivots

    @staticmethod
    def rank(matrix: np.ndarray, prime: int) -> int:
        """
        Returns the rank of matrix over F_prime.
        """
        if matrix.size == 0:
            return 0
        return len(ModularElimination.row_reduce(matrix, prime)[1])

    @staticmethod
    def nullspace(matrix: np.ndarray, ncols: int, prime: int) -> np.ndarray:
        """
        Returns a (dim, ncols) array whose rows span the kernel of matrix
        over F_prime.
        """
        if matrix.size == 0:
            return np.eye(ncols, dtype=np.int64)
        reduced, pivots = ModularElimination.row_reduce(matrix, prime)
        free = [c for c in range(ncols) if c not in set(pivots)]
        basis = np.zeros((len(free), ncols), dtype=np.int64)
        for (b, f) in enumerate(free):
            basis[b, f] = 1
            for (r, p) in enumerate(pivots):
                basis[b, p] = (-int(reduced[r, f])) % prime
        return basis


class RationalElimination:
    """
    Provides static methods for exact linear algebra over Q through sympy,
    limited to small systems.

    Static Methods:
        rank: Rank over Q.
        nullspace: Basis of the right kernel over Q.
    """
    @staticmethod
    def _check(ncols: int) -> None:
        if ncols > RATIONAL_NCOEFF_LIMIT:
            raise PreconditionError(
                f"Failed to eliminate over Q: {ncols} columns exceed the "
                f"limit {RATIONAL_NCOEFF_LIMIT}."
                )

    @staticmethod
    def rank(matrix: np.ndarray, ncols: int) -> int:
        RationalElimination._check(ncols)
        if matrix.size == 0:
            return 0
        rows = [
            [QQ(Fraction(v).numerator, Fraction(v).denominator) for v in row]
            for row in matrix
        ]
        return DomainMatrix(rows, (len(rows), ncols), QQ).rank()

    @staticmethod
    def nullspace(matrix: np.ndarray, ncols: int) -> np.ndarray:
        RationalElimination._check(ncols)
        if matrix.size == 0:
            basis = np.empty((ncols, ncols), dtype=object)
            for i in range(ncols):
                for j in range(ncols):
                    basis[i, j] = Fraction(int(i == j))
            return basis
        symbolic = sympy.Matrix(
            [[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator)
              for v in row] for row in matrix]
            )
        vectors = symbolic.nullspace()
        basis = np.empty((len(vectors), ncols), dtype=object)
        for (b, vector) in enumerate(vectors):
            for j in range(ncols):
                value = sympy.Rational(vector[j])
                basis[b, j] = Fraction(int(value.p), int(value.q))
        return basis


class NumericalRank:
    """
    Provides static methods for numerical rank and kernels of complex
    matrices, with a relative singular value threshold.

    Static Methods:
        singular_values: Singular values, largest first.
        rank: Number of singular values above tol * largest.
        nullspace: Orthonormal kernel basis as rows.
    """
    @staticmethod
    def singular_values(matrix: np.ndarray) -> np.ndarray:
        if matrix.size == 0:
            return np.zeros(0)
        return scipy.linalg.svd(matrix, compute_uv=False)

    @staticmethod
    def rank(matrix: np.ndarray, tol: float = NUMERICAL_RANK_TOL) -> int:
        values = NumericalRank.singular_values(matrix)
        if values.size == 0 or values[0] == 0.0:
            return 0
        return int(np.sum(values > tol * values[0]))

    @staticmethod
    def nullspace(
        matrix: np.ndarray, ncols: int, tol: float = NUMERICAL_RANK_TOL
        ) -> np.ndarray:
        if matrix.size == 0:
            return np.eye(ncols, dtype=np.complex128)
        return scipy.linalg.null_space(matrix, rcond=tol).T

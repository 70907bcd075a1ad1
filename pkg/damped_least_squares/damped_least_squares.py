import logging
from typing import Callable, List

import numpy as np
import scipy.linalg
from typing_extensions import TypedDict

from constants import (
    CONVERGENCE_TOL,
    DAMPING_DECREASE,
    DAMPING_INCREASE,
    DAMPING_INITIAL,
    DAMPING_MAX,
    MAX_ITERATIONS
)

LOGGER = logging.getLogger(__name__)

REASON_CONVERGED = "converged"
REASON_BUDGET = "iteration budget exhausted"
REASON_STALLED = "damping limit reached"


class LeastSquaresResult(TypedDict):
    """
    Outcome of a damped least-squares descent.

    Attributes:
        x (np.ndarray): The final parameters.
        residual_norm (float): ||R(x)||.
        relative_residual (float): ||R(x)|| / scale.
        iterations (int): Number of iterations run.
        converged (bool): Whether relative_residual <= tol.
        reason (str): Why the descent stopped.
        history (List[float]): ||R|| after every accepted step, starting
            with the initial value.
    """
    x: np.ndarray
    residual_norm: float
    relative_residual: float
    iterations: int
    converged: bool
    reason: str
    history: List[float]


class DampedLeastSquares:
    """
    Provides a static method minimizing ||R(x)||^2 for a holomorphic
    residual map R: C^m -> C^M with the Levenberg-Marquardt iteration.
    A step solves (J^H J + mu diag(J^H J)) delta = -J^H R and is accepted
    only when it lowers ||R||, so accepted residuals never increase.

    Static Methods:
        minimize: Runs the descent from a starting point.
    """
    @staticmethod
    def minimize(
        residual: Callable[[np.ndarray], np.ndarray],
        jacobian: Callable[[np.ndarray], np.ndarray],
        x0: np.ndarray,
        scale: float = 1.0,
        tol: float = CONVERGENCE_TOL,
        max_iterations: int = MAX_ITERATIONS
        ) -> LeastSquaresResult:
        """
        Runs the damped Gauss-Newton descent.

        Parameters:
            residual (Callable): x -> R(x), complex vector.
            jacobian (Callable): x -> dR/dx, complex (M, m) matrix.
            x0 (np.ndarray): The starting parameters.
            scale (float): Norm dividing ||R|| in the convergence test.
            tol (float): Relative residual accepted as converged.
            max_iterations (int): Iteration budget.

        Returns:
            LeastSquaresResult: The final state.
        """
        x = np.array(x0, dtype=np.complex128)
        r = residual(x)
        norm = float(np.linalg.norm(r))
        scale = scale if scale > 0 else 1.0
        history = [norm]
        mu = DAMPING_INITIAL
        reason = REASON_BUDGET
        iteration = 0
        while iteration < max_iterations:
            if norm / scale <= tol:
                reason = REASON_CONVERGED
                break
            iteration += 1
            j = jacobian(x)
            normal = j.conj().T @ j
            gradient = j.conj().T @ r
            diagonal = np.real(np.diag(normal)).copy()
            diagonal[diagonal <= 0.0] = 1.0
            while True:
                if mu > DAMPING_MAX:
                    break
                system = normal + mu * np.diag(diagonal)
                try:
                    step = scipy.linalg.solve(system, -gradient, assume_a="her")
                except (scipy.linalg.LinAlgError, ValueError):
                    mu *= DAMPING_INCREASE
                    continue
                candidate = x + step
                r_candidate = residual(candidate)
                norm_candidate = float(np.linalg.norm(r_candidate))
                if np.isfinite(norm_candidate) and norm_candidate < norm:
                    x, r, norm = candidate, r_candidate, norm_candidate
                    history.append(norm)
                    mu = max(mu * DAMPING_DECREASE, 1e-15)
                    break
                mu *= DAMPING_INCREASE
            if mu > DAMPING_MAX:
                reason = REASON_STALLED
                break
        if norm / scale <= tol:
            reason = REASON_CONVERGED
        LOGGER.debug(
            "Descent stopped after %d iterations (%s), relative residual %.3e",
            iteration, reason, norm / scale
            )
        result: LeastSquaresResult = {
            "x": x,
            "residual_norm": norm,
            "relative_residual": norm / scale,
            "iterations": iteration,
            "converged": reason == REASON_CONVERGED,
            "reason": reason,
            "history": history,
        }
        return result

from .damped_least_squares import (
    DampedLeastSquares,
    LeastSquaresResult
)

from .interpolation import (
    CONFIDENCE_CERTIFICATE,
    CONFIDENCE_PROBABILISTIC,
    MEASURE_SECANT,
    MEASURE_SECTIONS,
    STATUS_DEFICIENT,
    STATUS_EXCEEDS,
    STATUS_EXPECTED,
    DoubleScheme,
    InterpolationSystem,
    Verdict
)

from .helpers import (
    ModularElimination,
    NumericalRank,
    RationalElimination
)

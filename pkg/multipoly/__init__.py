from .helpers import (
    ScalarArithmetic,
    FactorEvaluator
)

from .multipoly import (
    MonomialBasis,
    Section,
    MultiPoly
)


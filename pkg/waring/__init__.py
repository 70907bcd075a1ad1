from .waring import (
    ClusterResult,
    Decomposition,
    NuReport,
    RankOneTerm,
    WaringDecomposer
)

from .helpers import (
    DecompositionMatcher,
    RankOneModel
)

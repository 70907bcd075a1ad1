from .tangency import (
    SingularityReport,
    TangencyAnalyzer
)

from .helpers import (
    Chart,
    ChartAtlas,
    ResultantSolver,
    SingularPoint
)

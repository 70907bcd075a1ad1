from .point_config import (
    PointConfig,
    Scalar
)

from .helpers import (
    PointSampler
)


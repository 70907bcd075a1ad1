from .exceptions import (
    WaringLabError,
    FormatError,
    PreconditionError,
    EmptySystemError,
    HoraceConsistencyError
)


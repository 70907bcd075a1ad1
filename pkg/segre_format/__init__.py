from .segre_format import (
    Format,
    PerfectCase,
    WeaklySchedule,
    SegreFormat,
    NU_UNIQUE,
    NU_MULTIPLE,
    NU_UNKNOWN
)


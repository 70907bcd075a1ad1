from .cli import (
    RunConfig,
    WaringLabCli,
    main
)

from .helpers import (
    CommandRunner
)

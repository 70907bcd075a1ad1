from .horace import (
    Certificate,
    CertificateNode,
    HoraceCertifier,
    HoraceStep
)

from .pipeline import (
    CorollaryPipeline,
    PipelineReport
)

from .job_runner import (
    JobRunner,
    SeedStream
)

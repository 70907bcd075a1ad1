import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Sequence, Tuple

import numpy as np

LOGGER = logging.getLogger(__name__)


class SeedStream:
    """
    Provides static methods splitting one root seed into independent
    streams. A stream is addressed by a path of counters, e.g.
    (job, trial), and does not depend on how jobs are scheduled.

    Static Methods:
        sequence: The SeedSequence of a path.
        generator: A numpy Generator on the stream of a path.
        child_seed: A 64-bit integer seed derived from a path.
    """
    @staticmethod
    def sequence(root: int, path: Sequence[int] = ()) -> np.random.SeedSequence:
        return np.random.SeedSequence(int(root), spawn_key=tuple(int(p) for p in path))

    @staticmethod
    def generator(root: int, path: Sequence[int] = ()) -> np.random.Generator:
        return np.random.default_rng(SeedStream.sequence(root, path))

    @staticmethod
    def child_seed(root: int, path: Sequence[int]) -> int:
        """
        Returns an integer seed for the path, for records that store seeds.
        """
        return int(SeedStream.sequence(root, path).generate_state(1, np.uint64)[0])


class JobRunner:
    """
    Provides a static method mapping a picklable function over jobs.

    Static Methods:
        map: Runs fn on every job and returns the results in job order.
    """
    @staticmethod
    def map(
        fn: Callable[..., Any],
        jobs: Sequence[Tuple],
        workers: int = 1
        ) -> List[Any]:
        """
        Runs fn(*job) for every job, inline when workers <= 1 and with a
        process pool otherwise.

        Parameters:
            fn (Callable): A module-level function.
            jobs (Sequence[Tuple]): The argument tuples.
            workers (int): The number of worker processes.

        Returns:
            List[Any]: fn(*jobs[i]) at index i.

        Raises:
            Exception: If a job fails, with the job index in the message.
        """
        if workers <= 1 or len(jobs) <= 1:
            return [fn(*job) for job in jobs]
        LOGGER.debug("Dispatching %d jobs to %d workers", len(jobs), workers)
        results: List[Any] = [None] * len(jobs)
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(fn, *job) for job in jobs]
            for (index, future) in enumerate(futures):
                try:
                    results[index] = future.result()
                except Exception as e:
                    raise Exception(
                        f"Failed to run job {index}: {e}"
                        ).with_traceback(e.__traceback__)
        return results

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional
import os

from src.core.config_manager import get_config
from src.utils.logger import Logger, LogCategory


@dataclass
class Job:
    job_type: str  # "point", "tile"
    index: int     # position in the ordered output
    payload: Any
    result: Any = None
    error: Optional[BaseException] = None


def resolve_threads(threads: Optional[int] = None) -> int:
    """0 or None falls back to cli.threads, and 0 there means all cores."""
    if not threads:
        threads = get_config().get("cli.threads", 0)
    if not threads:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


class JobSystem:
    """
    Queue of independent evaluations run on a thread pool. Results are
    reassembled in submission order regardless of completion order.
    """

    def __init__(self, threads: Optional[int] = None):
        self.threads = resolve_threads(threads)
        self.jobs: List[Job] = []

    def add_job(self, job: Job):
        self.jobs.append(job)

    def submit(self, job_type: str, payloads: List[Any]) -> List[Job]:
        start = len(self.jobs)
        created = [Job(job_type=job_type, index=start + k, payload=p) for k, p in enumerate(payloads)]
        for job in created:
            self.add_job(job)
        return created

    def get_pending_jobs(self) -> List[Job]:
        return [j for j in self.jobs if j.result is None and j.error is None]

    def run(self, worker: Callable[[Any], Any], fail_fast: bool = True) -> List[Any]:
        """Runs every pending job and returns results ordered by job index."""
        pending = self.get_pending_jobs()

        def execute(job: Job):
            try:
                job.result = worker(job.payload)
            except Exception as e:
                job.error = e
            return job

        if self.threads == 1 or len(pending) <= 1:
            done = [execute(j) for j in pending]
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                done = list(pool.map(execute, pending))

        failures = [j for j in done if j.error is not None]
        Logger.numerics(
            LogCategory.SYSTEM,
            f"{len(done)} jobs on {self.threads} threads, {len(failures)} failed",
        )
        if failures and fail_fast:
            raise min(failures, key=lambda j: j.index).error

        ordered = sorted(self.jobs, key=lambda j: j.index)
        self.jobs = []
        return [j.error if j.error is not None else j.result for j in ordered]

from itertools import product

import numpy as np

from lib.jobs.generate import generate_sample_specs
from lib.jobs.model.job import JobSpec, TaskSpec
from lib.jobs.model.resource_matrix import ResourceEntry, ResourceMatrix
from lib.jobs.model.schedule import EpisodeResult
from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.model.scheduler import Scheduler


def make_job(preds: dict[int, set[int]], name: str = "job", names: list[str] | None = None,
             earliest: dict[int, int] | None = None, deadline: int = 1000) -> JobSpec:
    """Job with consistent head/tail flags from a predecessor map over IDs 0..N-1."""
    n = len(preds)
    names = names or [f"T{i}" for i in range(n)]
    earliest = earliest or {}
    referenced = {p for ps in preds.values() for p in ps}
    return JobSpec(
        name=name,
        tasks=tuple(
            TaskSpec(
                name=names[i],
                id=i,
                predecessors=frozenset(preds[i]),
                is_head=not preds[i],
                is_tail=i not in referenced,
                earliest_start=earliest.get(i, 0),
                deadline=deadline,
            )
            for i in range(n)
        ),
    )


def make_rm(times: list[dict[str, int]]) -> ResourceMatrix:
    return ResourceMatrix(resources=tuple(ResourceEntry(pe, dict(perf)) for pe, perf in enumerate(times)))


def random_instance(rng: np.random.Generator, max_tasks: int = 6, max_pes: int = 3,
                    max_exec: int = 6, max_release: int = 0) -> tuple[JobSpec, ResourceMatrix]:
    n_tasks = int(rng.integers(1, max_tasks + 1))
    n_pes = int(rng.integers(1, max_pes + 1))
    job, rm = generate_sample_specs(n_tasks, n_pes, rng, min_exec=1, max_exec=max_exec)

    if max_release:
        earliest = {t.id: int(rng.integers(0, max_release + 1)) for t in job.tasks}
        job = make_job({t.id: set(t.predecessors) for t in job.tasks}, name=job.name, earliest=earliest)
    return job, rm


class ForcedScheduler(Scheduler):
    """Places every task on a fixed PE."""

    module = Schedulers.MET

    def __init__(self, assignment: tuple[int, ...]):
        self.assignment = assignment

    @property
    def name(self) -> str:
        return "forced"

    def decide(self, task, state) -> int:
        return self.assignment[task.id]


def oracle_makespan(job: JobSpec, rm: ResourceMatrix, assignment: tuple[int, ...], limit: int = 10_000) -> int:
    """
    Tick-by-tick evaluation of a fixed assignment: tasks join their PE's FIFO queue in
    ascending ID order when they become eligible, an idle PE starts the front of its queue.
    """
    n, p = job.task_count, rm.pe_count
    exec_time = [[rm.exec_time(job.task(i).name, pe) for pe in range(p)] for i in range(n)]
    preds = [job.task(i).predecessors for i in range(n)]
    earliest = [job.task(i).earliest_start for i in range(n)]

    released = [False] * n
    finish = [None] * n
    done = set()
    queues = [[] for _ in range(p)]
    running = [None] * p

    tick = 0
    while len(done) < n:
        assert tick <= limit, "oracle did not terminate"

        for pe in range(p):
            task = running[pe]
            if task is not None and finish[task] == tick:
                done.add(task)
                running[pe] = None

        for task in range(n):
            if not released[task] and preds[task] <= done and earliest[task] <= tick:
                released[task] = True
                queues[assignment[task]].append(task)

        for pe in range(p):
            if running[pe] is None and queues[pe]:
                task = queues[pe].pop(0)
                running[pe] = task
                finish[task] = tick + exec_time[task][pe]

        if len(done) < n:
            tick += 1

    return max(finish, default=0)


def brute_force_optimum(job: JobSpec, rm: ResourceMatrix) -> tuple[int, dict[tuple[int, ...], int]]:
    """Best makespan over every PE-assignment vector, plus the makespan of each vector."""
    results = {
        vector: oracle_makespan(job, rm, vector)
        for vector in product(range(rm.pe_count), repeat=job.task_count)
    }
    return min(results.values()), results


def schedule_violations(job: JobSpec, rm: ResourceMatrix, result: EpisodeResult) -> list[str]:
    """Dependency, exclusivity, non-preemption and duration checks on a finished schedule."""
    problems = []
    by_task = {}
    for a in result.schedule:
        if a.task_id in by_task:
            problems.append(f"task {a.task_id} started twice")
        by_task[a.task_id] = a

        if not a.assign_tick <= a.start_tick < a.finish_tick:
            problems.append(f"task {a.task_id} has ticks {a.assign_tick}/{a.start_tick}/{a.finish_tick}")
        if a.duration != rm.exec_time(job.task(a.task_id).name, a.pe_id):
            problems.append(f"task {a.task_id} ran {a.duration} ms on PE {a.pe_id}")

    if not result.terminated_by_timeout and set(by_task) != {t.id for t in job.tasks}:
        problems.append("not every task ran")

    for a in result.schedule:
        for pred in job.task(a.task_id).predecessors:
            if pred not in by_task or by_task[pred].finish_tick > a.start_tick:
                problems.append(f"task {a.task_id} started before predecessor {pred} finished")
        if a.start_tick < job.task(a.task_id).earliest_start:
            problems.append(f"task {a.task_id} started before its earliest start")

    for pe, lane in result.lanes().items():
        for prev, nxt in zip(lane, lane[1:]):
            if nxt.start_tick < prev.finish_tick:
                problems.append(f"PE {pe} runs {prev.task_id} and {nxt.task_id} at once")

    return problems

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from lib.jobs.model.job import JobSpec
from lib.jobs.model.resource_matrix import ResourceMatrix
from lib.jobs.model.schedule import Assignment


class TaskStatus(Enum):
    """Lists of the task state machine. QUEUED tasks are assigned to a PE but have not started."""

    OUTSTANDING = "outstanding"
    READY = "ready"
    QUEUED = "queued"
    RUNNING = "running"
    COMPLETED = "completed"


@dataclass(frozen=True)
class SchedulerDecision:
    task_id: int
    pe_id: int


@dataclass
class PeView:
    """
    Load of every PE as seen from a decision point.
    busy_until is never earlier than the decision tick.
    """

    busy_until: np.ndarray
    queued_work: np.ndarray

    @property
    def pe_count(self) -> int:
        return len(self.busy_until)

    def est_finish(self, exec_times: np.ndarray, now: int) -> np.ndarray:
        """Finish tick of a task on every PE if it were appended to that PE's queue now."""
        return np.maximum(now, self.busy_until) + self.queued_work + exec_times

    def enqueue(self, pe_id: int, exec_time: int):
        self.queued_work[pe_id] += exec_time

    def copy(self) -> PeView:
        return PeView(self.busy_until.copy(), self.queued_work.copy())


@dataclass
class SimState:
    """
    Mutable state of one simulated episode.
    Every task is in exactly one of outstanding, ready, the PE queues, running and completed.
    """

    job: JobSpec
    rm: ResourceMatrix
    exec_times: np.ndarray  # [task, pe] in ms

    now: int = 0
    outstanding: set[int] = field(default_factory=set)
    ready: list[int] = field(default_factory=list)
    running: set[int] = field(default_factory=set)
    completed: set[int] = field(default_factory=set)

    pe_queues: list[deque[int]] = field(default_factory=list)
    pe_busy_until: list[int] = field(default_factory=list)
    pe_running: list[int | None] = field(default_factory=list)

    assigned_pe: dict[int, int] = field(default_factory=dict)
    assign_ticks: dict[int, int] = field(default_factory=dict)
    finish_ticks: dict[int, int] = field(default_factory=dict)
    schedule: list[Assignment] = field(default_factory=list)
    deadline_misses: int = 0

    @classmethod
    def initial(cls, job: JobSpec, rm: ResourceMatrix) -> SimState:
        """All tasks start in the outstanding list, every PE is idle."""
        pe_count = rm.pe_count
        return cls(
            job=job,
            rm=rm,
            exec_times=rm.as_array(job),
            outstanding={t.id for t in job.tasks},
            pe_queues=[deque() for _ in range(pe_count)],
            pe_busy_until=[0] * pe_count,
            pe_running=[None] * pe_count,
        )

    @property
    def pe_count(self) -> int:
        return len(self.pe_queues)

    @property
    def queued(self) -> set[int]:
        return {t for q in self.pe_queues for t in q}

    @property
    def is_done(self) -> bool:
        return len(self.completed) == self.job.task_count

    def status(self, task_id: int) -> TaskStatus:
        if task_id in self.completed:
            return TaskStatus.COMPLETED
        if task_id in self.running:
            return TaskStatus.RUNNING
        if task_id in self.outstanding:
            return TaskStatus.OUTSTANDING
        if task_id in self.assigned_pe:
            return TaskStatus.QUEUED
        return TaskStatus.READY

    def pe_view(self) -> PeView:
        busy = np.maximum(self.now, np.array(self.pe_busy_until, dtype=np.int64))
        queued = np.array(
            [sum(int(self.exec_times[t, pe]) for t in q) for pe, q in enumerate(self.pe_queues)],
            dtype=np.int64,
        )
        return PeView(busy_until=busy, queued_work=queued)

    # EVENT HANDLING

    def complete_finished(self) -> list[int]:
        """Moves every task whose finish tick has arrived to the completed list."""
        finished = []
        for pe, task_id in enumerate(self.pe_running):
            if task_id is not None and self.finish_ticks[task_id] <= self.now:
                self.running.discard(task_id)
                self.completed.add(task_id)
                self.pe_running[pe] = None
                finished.append(task_id)

                if self.finish_ticks[task_id] > self.job.task(task_id).deadline:
                    self.deadline_misses += 1

        return finished

    def release_ready(self) -> list[int]:
        """Moves newly eligible outstanding tasks to the ready list in ascending ID order."""
        eligible = sorted(
            t for t in self.outstanding
            if self.job.task(t).predecessors <= self.completed
            and self.job.task(t).earliest_start <= self.now
        )
        for task_id in eligible:
            self.outstanding.remove(task_id)
            self.ready.append(task_id)

        return eligible

    def assign(self, decision: SchedulerDecision):
        """Moves a ready task to the back of its PE's queue."""
        self.ready.remove(decision.task_id)
        self.pe_queues[decision.pe_id].append(decision.task_id)
        self.assigned_pe[decision.task_id] = decision.pe_id
        self.assign_ticks[decision.task_id] = self.now

    def start_queued(self) -> list[int]:
        """Every idle PE starts the task at the front of its queue."""
        started = []
        for pe, queue in enumerate(self.pe_queues):
            if self.pe_running[pe] is not None or not queue:
                continue

            task_id = queue.popleft()
            finish = self.now + int(self.exec_times[task_id, pe])

            self.pe_running[pe] = task_id
            self.pe_busy_until[pe] = finish
            self.finish_ticks[task_id] = finish
            self.running.add(task_id)
            self.schedule.append(
                Assignment(
                    task_id=task_id,
                    pe_id=pe,
                    assign_tick=self.assign_ticks[task_id],
                    start_tick=self.now,
                    finish_tick=finish,
                )
            )
            started.append(task_id)

        return started

    def next_event_tick(self) -> int | None:
        """Earliest future finish or earliest-start tick, None if nothing is pending."""
        ticks = [self.finish_ticks[t] for t in self.running]
        ticks.extend(
            self.job.task(t).earliest_start
            for t in self.outstanding
            if self.job.task(t).earliest_start > self.now
        )
        return min(ticks) if ticks else None

    # DEBUGGING

    def check_invariants(self) -> list[str]:
        """Describes every broken state invariant, empty if the state is consistent."""
        problems = []

        union = set().union(self.outstanding, self.ready, self.queued, self.running, self.completed)
        total = (
            len(self.outstanding)
            + len(self.ready)
            + sum(len(q) for q in self.pe_queues)
            + len(self.running)
            + len(self.completed)
        )
        if union != {t.id for t in self.job.tasks} or total != self.job.task_count:
            problems.append("task lists do not partition the job")

        for task_id in self.ready:
            task = self.job.task(task_id)
            if not task.predecessors <= self.completed or task.earliest_start > self.now:
                problems.append(f"task {task_id} is ready before it is eligible")

        for pe, task_id in enumerate(self.pe_running):
            if task_id is not None and task_id not in self.running:
                problems.append(f"PE {pe} runs task {task_id} which is not in the running list")

        if len(self.running) != sum(t is not None for t in self.pe_running):
            problems.append("running list does not match the occupied PEs")

        return problems

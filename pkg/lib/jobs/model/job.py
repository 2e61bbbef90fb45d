from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import networkx as nx


class TaskFlag(Enum):
    """Structural flag of a task in the job file."""

    HEAD = "HEAD"  # No predecessors
    TAIL = "TAIL"  # No successors
    BODY = "BODY"  # Neither

    @classmethod
    def get_flag(cls, token: str) -> TaskFlag:
        return cls(token)


class ViolationKind(Enum):
    """Kinds of invariant violations reported by validate_job."""

    DUPLICATE_ID = "duplicate-id"
    DUPLICATE_NAME = "duplicate-name"
    ID_RANGE = "id-range"  # IDs must be exactly 0..N-1
    DANGLING_PREDECESSOR = "dangling-predecessor"
    SELF_PREDECESSOR = "self-predecessor"
    CYCLE = "cycle"
    HEAD_FLAG = "head-flag"
    TAIL_FLAG = "tail-flag"
    NO_HEAD = "no-head"
    NO_TAIL = "no-tail"
    TIMING = "timing"  # earliest_start > deadline or negative times


@dataclass(frozen=True)
class JobViolation:
    kind: ViolationKind
    task_id: int | None = None
    other_id: int | None = None
    detail: str = ""

    def __str__(self):
        ids = [str(i) for i in (self.task_id, self.other_id) if i is not None]
        text = f"{self.kind.value}({','.join(ids)})" if ids else self.kind.value
        return f"{text}: {self.detail}" if self.detail else text


class CycleError(ValueError):
    """The predecessor relation of a job is not acyclic."""

    def __init__(self, task_id: int, cycle: list[int] | None = None):
        self.task_id = task_id
        self.cycle = cycle or [task_id]
        super().__init__(f"Error: Cycle in task dependencies involving task {task_id}: {self.cycle}")


@dataclass(frozen=True)
class TaskSpec:
    """
    A single task of a job.
    Times are integer milliseconds, the deadline is metadata only.
    """

    name: str
    id: int
    predecessors: frozenset[int] = frozenset()
    is_head: bool = False
    is_tail: bool = False
    earliest_start: int = 0
    deadline: int = 0

    @property
    def flag(self) -> TaskFlag:
        """Flag token used when serializing. A head that is also a sink is written as HEAD."""
        if self.is_head:
            return TaskFlag.HEAD
        if self.is_tail:
            return TaskFlag.TAIL
        return TaskFlag.BODY


@dataclass(frozen=True)
class JobSpec:
    """A job is a DAG of tasks. Tasks are kept in the order they were declared."""

    name: str
    tasks: tuple[TaskSpec, ...] = ()

    @property
    def task_count(self) -> int:
        return len(self.tasks)

    @cached_property
    def by_id(self) -> dict[int, TaskSpec]:
        return {t.id: t for t in self.tasks}

    def task(self, task_id: int) -> TaskSpec:
        return self.by_id[task_id]

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Dependency graph with an edge pred -> task for each predecessor."""
        g = nx.DiGraph()
        g.add_nodes_from(t.id for t in self.tasks)
        for t in self.tasks:
            g.add_edges_from((p, t.id) for p in t.predecessors)
        return g

    @cached_property
    def successors(self) -> dict[int, frozenset[int]]:
        succ: dict[int, set[int]] = {t.id: set() for t in self.tasks}
        for t in self.tasks:
            for p in t.predecessors:
                if p in succ:
                    succ[p].add(t.id)
        return {k: frozenset(v) for k, v in succ.items()}


def validate_job(job: JobSpec) -> list[JobViolation]:
    """
    Checks every invariant of a job.

    Args:
        job: The job to check

    Returns:
        All violations found, an empty list iff the job is well-formed
    """
    violations: list[JobViolation] = []

    seen_ids: set[int] = set()
    seen_names: set[str] = set()
    for t in job.tasks:
        if t.id in seen_ids:
            violations.append(JobViolation(ViolationKind.DUPLICATE_ID, t.id))
        if t.name in seen_names:
            violations.append(
                JobViolation(ViolationKind.DUPLICATE_NAME, t.id, detail=f"name '{t.name}'")
            )
        seen_ids.add(t.id)
        seen_names.add(t.name)

    if seen_ids != set(range(len(job.tasks))):
        violations.append(
            JobViolation(
                ViolationKind.ID_RANGE,
                detail=f"task IDs must be 0..{len(job.tasks) - 1}, got {sorted(seen_ids)}",
            )
        )

    for t in job.tasks:
        if t.id in t.predecessors:
            violations.append(JobViolation(ViolationKind.SELF_PREDECESSOR, t.id, t.id))
        for p in sorted(t.predecessors - seen_ids):
            violations.append(JobViolation(ViolationKind.DANGLING_PREDECESSOR, t.id, p))

        if t.earliest_start < 0 or t.deadline < 0 or t.earliest_start > t.deadline:
            violations.append(
                JobViolation(
                    ViolationKind.TIMING,
                    t.id,
                    detail=f"earliest_start={t.earliest_start}, deadline={t.deadline}",
                )
            )

    # Self loops are reported above
    graph = job.graph.copy()
    graph.remove_edges_from(nx.selfloop_edges(graph))
    graph.remove_nodes_from([n for n in list(graph.nodes) if n not in seen_ids])
    try:
        cycle = nx.find_cycle(graph)
        members = [u for u, _ in cycle]
        violations.append(
            JobViolation(ViolationKind.CYCLE, min(members), detail=f"cycle detected through {members}")
        )
    except nx.NetworkXNoCycle:
        pass

    successors = job.successors
    for t in job.tasks:
        if t.is_head != (len(t.predecessors) == 0):
            violations.append(
                JobViolation(
                    ViolationKind.HEAD_FLAG,
                    t.id,
                    detail="HEAD flag must be set exactly on tasks without predecessors",
                )
            )
        if t.is_tail != (len(successors.get(t.id, ())) == 0):
            violations.append(
                JobViolation(
                    ViolationKind.TAIL_FLAG,
                    t.id,
                    detail="TAIL flag must be set exactly on tasks without successors",
                )
            )

    if job.tasks:
        if not any(t.is_head for t in job.tasks):
            violations.append(JobViolation(ViolationKind.NO_HEAD))
        if not any(t.is_tail for t in job.tasks):
            violations.append(JobViolation(ViolationKind.NO_TAIL))

    return violations


def topological_order(job: JobSpec) -> list[int]:
    """
    Orders the task IDs so that each task comes after all of its predecessors.
    Ties between simultaneously available tasks are broken by ascending task ID.

    Raises:
        CycleError: If the dependencies contain a cycle
        ValueError: If a predecessor does not belong to the job
    """
    for t in job.tasks:
        dangling = t.predecessors - job.by_id.keys()
        if dangling:
            raise ValueError(f"Error: Task {t.id} has unknown predecessors {sorted(dangling)}")

    try:
        return list(nx.lexicographical_topological_sort(job.graph))
    except nx.NetworkXUnfeasible:
        cycle = [u for u, _ in nx.find_cycle(job.graph)]
        raise CycleError(min(cycle), cycle)

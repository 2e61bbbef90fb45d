"""
State representation of the Deep Resource Manager.

For N tasks and P PEs the vector has N*(4 + P + 1) + N*N + N*P entries, all in [0, 1]:

- status:     per task, one-hot over (outstanding, ready, running, completed)
- assignment: per task, one-hot over (none, PE0, ..., PE(P-1))
- adjacency:  row i, column j is 1 if task j is a predecessor of task i
- exec-time:  execution time of task i on PE p divided by the largest time in the matrix

Tasks that are queued on a PE but have not started count as ready, their assignment
bit marks the PE. Decisions go through the ready list in order, so the task being
decided is the first ready task whose assignment is still `none`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from lib.simulation.model.state import SimState, TaskStatus

STATUS_LABELS = ("outstanding", "ready", "running", "completed")

_STATUS_INDEX = {
    TaskStatus.OUTSTANDING: 0,
    TaskStatus.READY: 1,
    TaskStatus.QUEUED: 1,
    TaskStatus.RUNNING: 2,
    TaskStatus.COMPLETED: 3,
}


@dataclass(frozen=True)
class EncodingBlock:
    name: str
    start: int
    stop: int

    @property
    def size(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class EncodingLayout:
    """Describes where each block of the state vector lives for N tasks and P PEs."""

    num_tasks: int
    num_pes: int

    @property
    def status_width(self) -> int:
        return len(STATUS_LABELS)

    @property
    def assignment_width(self) -> int:
        return self.num_pes + 1

    @property
    def dimension(self) -> int:
        n, p = self.num_tasks, self.num_pes
        return n * (self.status_width + self.assignment_width) + n * n + n * p

    @cached_property
    def blocks(self) -> tuple[EncodingBlock, ...]:
        n, p = self.num_tasks, self.num_pes
        sizes = [
            ("status", n * self.status_width),
            ("assignment", n * self.assignment_width),
            ("adjacency", n * n),
            ("exec-time", n * p),
        ]

        blocks = []
        start = 0
        for name, size in sizes:
            blocks.append(EncodingBlock(name, start, start + size))
            start += size
        return tuple(blocks)

    def feature_names(self) -> list[str]:
        """Column names for exported vectors, in vector order."""
        n, p = self.num_tasks, self.num_pes
        names = [f"status[T{i}].{s}" for i in range(n) for s in STATUS_LABELS]
        names += [f"assign[T{i}].{'none' if a == 0 else f'pe{a - 1}'}" for i in range(n) for a in range(p + 1)]
        names += [f"adj[T{i}<-T{j}]" for i in range(n) for j in range(n)]
        names += [f"exec[T{i}].pe{q}" for i in range(n) for q in range(p)]
        return names


def encode_state(state: SimState, focus_task: int, layout: EncodingLayout | None = None) -> np.ndarray:
    """
    Builds the state vector for the decision about one ready task.
    Covers all task lists, not just the ready list.

    Args:
        state: Current simulation state
        focus_task: The ready task being decided
        layout: Expected layout, checked against the job and matrix when given

    Returns:
        Vector of length layout.dimension with entries in [0, 1]
    """
    n = state.job.task_count
    p = state.pe_count
    if layout is None:
        layout = EncodingLayout(n, p)
    elif (layout.num_tasks, layout.num_pes) != (n, p):
        raise ValueError(
            f"Error: Encoding is laid out for {layout.num_tasks} tasks and {layout.num_pes} PEs, "
            f"the episode has {n} tasks and {p} PEs"
        )

    if focus_task not in state.ready:
        raise ValueError(f"Error: Task {focus_task} is not in the ready list {state.ready}")

    status = np.zeros((n, layout.status_width))
    assignment = np.zeros((n, layout.assignment_width))
    adjacency = np.zeros((n, n))

    for task in state.job.tasks:
        status[task.id, _STATUS_INDEX[state.status(task.id)]] = 1.0

        pe = state.assigned_pe.get(task.id)
        assignment[task.id, 0 if pe is None else pe + 1] = 1.0

        for pred in task.predecessors:
            adjacency[task.id, pred] = 1.0

    exec_times = state.exec_times.astype(np.float64)
    peak = exec_times.max() if exec_times.size else 1.0

    return np.concatenate(
        [status.ravel(), assignment.ravel(), adjacency.ravel(), (exec_times / peak).ravel()]
    )

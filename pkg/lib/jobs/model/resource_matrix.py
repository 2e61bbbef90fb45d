from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from lib.jobs.model.job import JobSpec


@dataclass(frozen=True)
class ResourceEntry:
    """Execution times (ms) of every task name on one processing element."""

    resource_id: int
    perf: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ResourceMatrix:
    """Per-PE execution times, ordered by resource ID."""

    resources: tuple[ResourceEntry, ...] = ()

    @property
    def pe_count(self) -> int:
        return len(self.resources)

    @property
    def task_names(self) -> list[str]:
        names: set[str] = set()
        for r in self.resources:
            names.update(r.perf.keys())
        return sorted(names)

    def exec_time(self, task_name: str, pe_id: int) -> int:
        return self.resources[pe_id].perf[task_name]

    def exec_times(self, task_name: str) -> np.ndarray:
        """Execution times of one task on every PE, indexed by PE ID."""
        return np.array([r.perf[task_name] for r in self.resources], dtype=np.int64)

    def as_array(self, job: JobSpec) -> np.ndarray:
        """
        Execution-time table for a job.

        Returns:
            Integer array of shape [task_count, pe_count], row i belongs to task ID i
        """
        table = np.zeros((job.task_count, self.pe_count), dtype=np.int64)
        for task in job.tasks:
            table[task.id] = self.exec_times(task.name)
        return table

    def missing_tasks(self, job: JobSpec) -> dict[int, list[str]]:
        """Maps each resource ID to the task names of the job it does not cover."""
        missing = {}
        for r in self.resources:
            absent = [t.name for t in job.tasks if t.name not in r.perf]
            if absent:
                missing[r.resource_id] = absent
        return missing

    def with_times(self, table: Mapping[int, Mapping[str, int]]) -> ResourceMatrix:
        """Copy of the matrix with new execution times, given per resource ID."""
        return ResourceMatrix(
            resources=tuple(
                ResourceEntry(r.resource_id, table[r.resource_id]) for r in self.resources
            )
        )

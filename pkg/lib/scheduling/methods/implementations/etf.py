from typing import Iterator, Sequence

import numpy as np

from lib.jobs.model.job import TaskSpec
from lib.jobs.model.resource_matrix import ResourceMatrix
from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.model.scheduler import Scheduler
from lib.simulation.model.state import PeView, SchedulerDecision, SimState


def etf_decide_batch(
    ready: Sequence[TaskSpec],
    view: PeView,
    rm: ResourceMatrix,
    now: int,
) -> list[SchedulerDecision]:
    """
    Repeatedly picks the (task, PE) pair with the earliest estimated finish over all
    remaining ready tasks, then books the task on that PE.
    Ties go to the lower task ID, then to the lower PE ID.

    Args:
        ready: The ready tasks of the decision point
        view: PE load at the decision point (not modified)
        rm: Resource matrix of the episode
        now: Tick of the decision point

    Returns:
        One decision per ready task, in the order they were picked
    """
    view = view.copy()
    remaining = sorted(ready, key=lambda t: t.id)
    decisions = []

    while remaining:
        best: tuple[int, TaskSpec, int] | None = None

        for task in remaining:
            finish = view.est_finish(rm.exec_times(task.name), now)
            pe = int(np.argmin(finish))
            if best is None or finish[pe] < best[0]:
                best = (int(finish[pe]), task, pe)

        _, task, pe = best
        decisions.append(SchedulerDecision(task.id, pe))
        view.enqueue(pe, rm.exec_time(task.name, pe))
        remaining.remove(task)

    return decisions


class EtfScheduler(Scheduler):
    """Earliest Task First: looks over all ready tasks of a decision point at once."""

    module = Schedulers.ETF

    def decide(self, task: TaskSpec, state: SimState) -> int:
        # A batch of one is plain EFT
        return etf_decide_batch([task], state.pe_view(), state.rm, state.now)[0].pe_id

    def decisions(self, ready: Sequence[int], state: SimState) -> Iterator[SchedulerDecision]:
        tasks = [state.job.task(t) for t in ready]
        yield from etf_decide_batch(tasks, state.pe_view(), state.rm, state.now)

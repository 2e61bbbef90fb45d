import numpy as np

from lib.jobs.model.job import TaskSpec
from lib.jobs.model.resource_matrix import ResourceMatrix
from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.model.scheduler import Scheduler
from lib.simulation.model.state import PeView, SimState


def eft_decide(task: TaskSpec, view: PeView, rm: ResourceMatrix, now: int) -> int:
    """
    PE on which the task would finish first when appended to its queue.
    The estimate is max(now, busy_until) + queued_work + exec, ties go to the lowest PE ID.
    """
    return int(np.argmin(view.est_finish(rm.exec_times(task.name), now)))


class EftScheduler(Scheduler):
    """
    Earliest Finish Time, first come first served.
    Ready tasks are placed one by one in ready-list order, each decision sees the
    queues updated by the previous ones.
    """

    module = Schedulers.EFT

    def decide(self, task: TaskSpec, state: SimState) -> int:
        return eft_decide(task, state.pe_view(), state.rm, state.now)

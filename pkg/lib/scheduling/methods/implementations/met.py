import numpy as np

from lib.jobs.model.job import TaskSpec
from lib.jobs.model.resource_matrix import ResourceMatrix
from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.model.scheduler import Scheduler
from lib.simulation.model.state import SimState


def met_decide(task: TaskSpec, rm: ResourceMatrix) -> int:
    """PE with the minimum execution time for the task, ties go to the lowest PE ID."""
    return int(np.argmin(rm.exec_times(task.name)))


class MetScheduler(Scheduler):
    """Minimum Execution Time: ignores the load of the PEs."""

    module = Schedulers.MET

    def decide(self, task: TaskSpec, state: SimState) -> int:
        return met_decide(task, state.rm)

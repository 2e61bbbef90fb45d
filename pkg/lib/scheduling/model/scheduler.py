from abc import ABC, abstractmethod
from typing import Iterator, Sequence

from lib.jobs.model.job import TaskSpec
from lib.jobs.model.schedule import EpisodeResult
from lib.scheduling.methods.schedulers import Schedulers
from lib.simulation.model.state import SchedulerDecision, SimState


class Scheduler(ABC):
    """
    Standard Interface for a Scheduler.
    Maps ready tasks to processing elements at the decision points of an episode.
    """

    # Has to be set by the implementation
    module: Schedulers

    @property
    def name(self) -> str:
        return self.module.value

    def start_episode(self, state: SimState):
        """Called once with the initial state before the first decision point."""

    @abstractmethod
    def decide(self, task: TaskSpec, state: SimState) -> int:
        """
        Chooses a processing element for one ready task.

        Args:
            task: The ready task
            state: Current simulation state, including the decisions already
                   taken at this decision point

        Returns:
            ID of the chosen processing element
        """

    def decisions(self, ready: Sequence[int], state: SimState) -> Iterator[SchedulerDecision]:
        """
        Decides every ready task of a decision point.
        The engine applies each yielded decision before asking for the next one.
        By default tasks are decided one by one in ready-list order.

        Args:
            ready: Ready task IDs in list order
            state: Current simulation state

        Yields:
            One decision per ready task
        """
        for task_id in ready:
            yield SchedulerDecision(task_id, self.decide(state.job.task(task_id), state))

    def learn(self, result: EpisodeResult) -> dict[str, float | None] | None:
        """
        Learns from a finished episode.
        Heuristics do not learn and return None.

        Returns:
            Training statistics of the update, if any
        """
        return None

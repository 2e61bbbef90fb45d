import logging
from typing import Callable

from lib.jobs.model.job import JobSpec
from lib.jobs.model.resource_matrix import ResourceMatrix
from lib.jobs.model.schedule import EpisodeResult
from lib.scheduling.model.scheduler import Scheduler
from lib.simulation.model.state import SimState

logger = logging.getLogger(__name__)

# Algorithm inputs name the limit without a value
DEFAULT_MAX_SIMULATION_LENGTH = 5000


class SimulationError(RuntimeError):
    """The scheduler produced an invalid decision or the episode cannot progress."""


def _decide(scheduler: Scheduler, state: SimState) -> int:
    """Runs one decision point. Returns the number of decisions taken."""
    ready = tuple(state.ready)
    count = 0

    for decision in scheduler.decisions(ready, state):
        if decision.task_id not in state.ready:
            raise SimulationError(
                f"Error: {scheduler.name} decided task {decision.task_id} at tick {state.now}, "
                f"which is not in the ready list {state.ready}"
            )
        if not 0 <= decision.pe_id < state.pe_count:
            raise SimulationError(
                f"Error: {scheduler.name} assigned task {decision.task_id} at tick {state.now} "
                f"to PE {decision.pe_id}, valid PEs are 0..{state.pe_count - 1}"
            )

        state.assign(decision)
        count += 1

    if state.ready:
        raise SimulationError(
            f"Error: {scheduler.name} left ready tasks {state.ready} unassigned at tick {state.now}"
        )

    return count


def run_episode(
    job: JobSpec,
    rm: ResourceMatrix,
    scheduler: Scheduler,
    max_simulation_length: int = DEFAULT_MAX_SIMULATION_LENGTH,
    on_event: Callable[[SimState], None] | None = None,
) -> EpisodeResult:
    """
    Simulates one job on the processing elements of a resource matrix.

    At every event tick finished tasks complete, newly eligible tasks become ready,
    the scheduler places every ready task into a PE queue and idle PEs start the
    front of their queue. Between decision points the scheduler is not consulted.

    Args:
        job: A valid job
        rm: Resource matrix covering every task of the job
        scheduler: Scheduler asked for each ready task
        max_simulation_length: Episode limit in ms (Default: 5000)
        on_event: Debug hook called with the state after every event

    Raises:
        ValueError: If the resource matrix does not cover the job
        SimulationError: If the scheduler returns an invalid decision

    Returns:
        EpisodeResult with the schedule of all started tasks
    """
    missing = rm.missing_tasks(job)
    if missing:
        raise ValueError(f"Error: Resource matrix does not cover the job: {missing}")

    state = SimState.initial(job, rm)
    scheduler.start_episode(state)

    decision_count = 0
    timeout = False

    while True:
        state.complete_finished()
        state.release_ready()
        if on_event:
            on_event(state)

        if state.is_done:
            break
        if state.now >= max_simulation_length:
            timeout = True
            break

        if state.ready:
            decision_count += _decide(scheduler, state)

        state.start_queued()
        if on_event:
            on_event(state)

        next_tick = state.next_event_tick()
        if next_tick is None:
            raise SimulationError(f"Error: No pending events at tick {state.now}, but the job is not done")

        state.now = min(next_tick, max_simulation_length)

    finished = [a.finish_tick for a in state.schedule if a.task_id in state.completed]
    result = EpisodeResult(
        makespan=max(finished, default=0),
        schedule=list(state.schedule),
        decision_count=decision_count,
        terminated_by_timeout=timeout,
        max_simulation_length=max_simulation_length,
        deadline_misses=state.deadline_misses,
        pe_count=rm.pe_count,
        scheduler=scheduler.name,
    )

    if timeout:
        logger.debug(
            f"Episode of {job.name} with {scheduler.name} hit the limit of {max_simulation_length} ms "
            f"with {len(state.completed)}/{job.task_count} tasks completed."
        )

    return result


def elapsed_ticks(result: EpisodeResult) -> int:
    """Execution time of an episode: the makespan, or the limit if the episode timed out."""
    if result.terminated_by_timeout:
        return result.max_simulation_length
    return result.makespan

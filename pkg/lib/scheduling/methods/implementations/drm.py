import logging

from lib.drm.agent import DrmAgent
from lib.drm.encoding import encode_state
from lib.drm.trajectory import Trajectory
from lib.jobs.model.job import TaskSpec
from lib.jobs.model.schedule import EpisodeResult
from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.model.scheduler import Scheduler
from lib.simulation.engine import elapsed_ticks
from lib.simulation.model.state import SimState

logger = logging.getLogger(__name__)


class DrmScheduler(Scheduler):
    """
    Deep Resource Manager.
    Samples a PE per ready task from the actor's temperature SoftMax and learns
    from the whole trajectory once the episode is over.
    """

    module = Schedulers.DRM

    agent: DrmAgent
    training: bool
    greedy: bool
    trajectory: Trajectory

    def __init__(self, agent: DrmAgent, training: bool = True, greedy: bool = False):
        self.agent = agent
        self.training = training
        self.greedy = greedy
        self.trajectory = Trajectory(tau=agent.tau)

    def start_episode(self, state: SimState):
        layout = self.agent.layout
        if (layout.num_tasks, layout.num_pes) != (state.job.task_count, state.pe_count):
            raise ValueError(
                f"Error: DRM agent is built for {layout.num_tasks} tasks on {layout.num_pes} PEs, "
                f"job {state.job.name} has {state.job.task_count} tasks on {state.pe_count} PEs"
            )
        self.trajectory = Trajectory(tau=self.agent.tau)

    def decide(self, task: TaskSpec, state: SimState) -> int:
        vector = encode_state(state, task.id, self.agent.layout)
        pe, log_prob = self.agent.act(vector, greedy=self.greedy)
        self.trajectory.add(vector, pe, state.now, log_prob, task.id)
        return pe

    def learn(self, result: EpisodeResult) -> dict[str, float | None] | None:
        """Trains on the finished episode. Evaluation runs only report the temperature."""
        tau = self.trajectory.tau
        self.trajectory.episode_length = elapsed_ticks(result)

        if not self.training:
            return {"temperature": tau, "loss_actor": None, "loss_critic": None}

        stats = self.agent.train_on(self.trajectory)
        logger.debug(
            f"DRM episode {self.agent.episode}: {stats.decisions} decisions, "
            f"loss_actor={stats.loss_actor:.4f}, loss_critic={stats.loss_critic:.4f}"
        )
        return {"temperature": tau, "loss_actor": stats.loss_actor, "loss_critic": stats.loss_critic}

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lib.drm.drm_config import DrmConfig
from lib.drm.encoding import EncodingLayout
from lib.drm.trajectory import Trajectory, compute_returns
from lib.neural.checkpoint import net_from_dict, net_to_dict
from lib.neural.dense_net import DenseNet, Gradients
from lib.neural.functional import log_softmax_temperature, softmax_temperature
from lib.neural.optimizers import SGD, Adam, Optimizer

logger = logging.getLogger(__name__)

AGENT_FORMAT = "hetsched.drm_agent"
AGENT_FORMAT_VERSION = 1


class TrainingError(RuntimeError):
    """An update produced a non-finite loss or gradient. The networks are left untouched."""


@dataclass
class UpdateStats:
    loss_actor: float
    loss_critic: float
    decisions: int = 0


def temperature(episode: int, cfg: DrmConfig) -> float:
    """SoftMax temperature of an episode: max(tau_min, tau0 * tau_decay^episode)."""
    if episode < 0:
        raise ValueError(f"Error: Episode index must be non-negative, got {episode}")
    return max(cfg.tau_min, cfg.tau0 * cfg.tau_decay ** episode)


def select_action(
    actor: DenseNet,
    state: np.ndarray,
    tau: float,
    rng: np.random.Generator,
    greedy: bool = False,
) -> tuple[int, float]:
    """
    Samples a PE from the temperature SoftMax over the actor's logits.

    Args:
        actor: Actor network
        state: Encoded state
        tau: Temperature (> 0)
        rng: Generator used for sampling
        greedy: Take the argmax instead of sampling

    Returns:
        The chosen PE and its natural-log probability under the distribution
    """
    log_probs = log_softmax_temperature(actor.predict(state), tau)

    if greedy:
        action = int(np.argmax(log_probs))
    else:
        action = int(rng.choice(len(log_probs), p=np.exp(log_probs)))

    return action, float(log_probs[action])


def actor_loss_and_gradient(
    actor: DenseNet,
    states: np.ndarray,
    actions: np.ndarray,
    advantages: np.ndarray,
    tau: float,
) -> tuple[float, Gradients]:
    """
    Policy-gradient loss -(1/M) sum_t log pi(a_t|s_t) * A_t, advantages held constant.

    Returns:
        The loss and its gradient with respect to the actor's parameters
    """
    m = len(actions)
    logits, cache = actor.forward(states)
    log_probs = log_softmax_temperature(logits, tau)
    chosen = log_probs[np.arange(m), actions]
    loss = float(-np.mean(chosen * advantages))

    # d log pi(a) / d logits = (onehot(a) - pi) / tau
    onehot = np.zeros_like(log_probs)
    onehot[np.arange(m), actions] = 1.0
    grad_logits = -(advantages[:, None] * (onehot - np.exp(log_probs))) / (tau * m)

    return loss, actor.backward(cache, grad_logits)


def critic_loss_and_gradient(
    critic: DenseNet,
    states: np.ndarray,
    returns: np.ndarray,
) -> tuple[float, Gradients, np.ndarray]:
    """
    Value loss (1/M) sum_t (G_t - V(s_t))^2.

    Returns:
        The loss, its gradient and the value estimates V(s_t)
    """
    m = len(returns)
    values, cache = critic.forward(states)
    values = values[:, 0]
    error = returns - values
    loss = float(np.mean(error ** 2))
    grads = critic.backward(cache, (-2.0 / m * error)[:, None])
    return loss, grads, values


def update(
    actor: DenseNet,
    critic: DenseNet,
    traj: Trajectory,
    returns: np.ndarray,
    cfg: DrmConfig,
    actor_optimizer: Optimizer,
    critic_optimizer: Optimizer,
) -> UpdateStats:
    """
    One on-policy actor-critic update from a finished episode.
    The advantage is A_t = G_t - V(s_t), taken before the critic is updated.

    Raises:
        TrainingError: If a loss or gradient is not finite, both networks stay unchanged
    """
    if len(returns) != len(traj):
        raise ValueError(f"Error: Got {len(returns)} returns for {len(traj)} decisions")
    if len(traj) == 0:
        return UpdateStats(0.0, 0.0, 0)

    states = traj.states()
    returns = np.asarray(returns, dtype=np.float64)

    loss_critic, critic_grads, values = critic_loss_and_gradient(critic, states, returns)

    advantages = returns - values
    if cfg.normalize_advantage and len(advantages) > 1:
        advantages = (advantages - advantages.mean()) / (advantages.std() + 1e-8)

    loss_actor, actor_grads = actor_loss_and_gradient(actor, states, traj.actions(), advantages, traj.tau)

    if not (np.isfinite([loss_actor, loss_critic]).all() and actor_grads.is_finite() and critic_grads.is_finite()):
        raise TrainingError(
            f"Error: Non-finite update (loss_actor={loss_actor}, loss_critic={loss_critic}), networks unchanged"
        )

    actor_optimizer.step(actor, actor_grads)
    critic_optimizer.step(critic, critic_grads)

    return UpdateStats(loss_actor, loss_critic, len(traj))


def input_saliency(actor: DenseNet, state: np.ndarray, action: int, tau: float = 1.0) -> np.ndarray:
    """|d log pi(action|state) / d state_i| for every entry of the state vector."""
    logits, cache = actor.forward(state)
    probs = softmax_temperature(logits, tau)

    onehot = np.zeros_like(probs)
    onehot[action] = 1.0
    grads = actor.backward(cache, (onehot - probs) / tau)

    return np.abs(grads.inputs)


def _make_optimizer(cfg: DrmConfig, lr: float) -> Optimizer:
    match cfg.optimizer:
        case "sgd":
            return SGD(lr)
        case _:
            return Adam(lr, cfg.beta1, cfg.beta2, cfg.epsilon)


class DrmAgent:
    """
    Deep Resource Manager: an actor and a critic network with separate parameters,
    both reading the encoded state. Trained once per episode on the full trajectory.
    """

    layout: EncodingLayout
    cfg: DrmConfig
    actor: DenseNet
    critic: DenseNet
    episode: int

    def __init__(
        self,
        layout: EncodingLayout,
        cfg: DrmConfig | None = None,
        actor: DenseNet | None = None,
        critic: DenseNet | None = None,
        episode: int = 0,
    ):
        self.layout = layout
        self.cfg = cfg or DrmConfig()
        hidden = list(self.cfg.hidden_sizes)

        self.actor = actor or DenseNet.create([layout.dimension, *hidden, layout.num_pes], seed=self.cfg.seed)
        self.critic = critic or DenseNet.create([layout.dimension, *hidden, 1], seed=self.cfg.seed + 1)

        if self.actor.input_size != layout.dimension or self.actor.output_size != layout.num_pes:
            raise ValueError(
                f"Error: Actor shape {self.actor.input_size}->{self.actor.output_size} does not fit "
                f"the layout ({layout.dimension} inputs, {layout.num_pes} PEs)"
            )
        if self.critic.input_size != layout.dimension or self.critic.output_size != 1:
            raise ValueError("Error: Critic must map the state vector to a single value")

        self.actor_optimizer = _make_optimizer(self.cfg, self.cfg.lr_actor)
        self.critic_optimizer = _make_optimizer(self.cfg, self.cfg.lr_critic)
        self.rng = np.random.default_rng([self.cfg.seed, 2])
        self.episode = episode

    @property
    def tau(self) -> float:
        return temperature(self.episode, self.cfg)

    def act(self, state: np.ndarray, greedy: bool = False, tau: float | None = None) -> tuple[int, float]:
        return select_action(self.actor, state, self.tau if tau is None else tau, self.rng, greedy)

    def train_on(self, traj: Trajectory) -> UpdateStats:
        """Updates both networks from one finished episode and advances the temperature schedule."""
        returns = compute_returns(traj, self.cfg.gamma)
        stats = update(
            self.actor, self.critic, traj, returns, self.cfg, self.actor_optimizer, self.critic_optimizer
        )
        self.episode += 1
        return stats

    def saliency(self, state: np.ndarray, action: int) -> np.ndarray:
        return input_saliency(self.actor, state, action, self.tau)

    def to_dict(self) -> dict:
        return {
            "format": AGENT_FORMAT,
            "version": AGENT_FORMAT_VERSION,
            "num_tasks": self.layout.num_tasks,
            "num_pes": self.layout.num_pes,
            "episode": self.episode,
            "config": self.cfg.to_dict(),
            "actor": net_to_dict(self.actor),
            "critic": net_to_dict(self.critic),
        }

    @classmethod
    def from_dict(cls, dictionary: dict) -> DrmAgent:
        """Deserialize from dict. Optimizer moments are not part of a checkpoint."""
        if dictionary.get("format") != AGENT_FORMAT:
            raise ValueError(f"Error: Not a DRM checkpoint (format '{dictionary.get('format')}')")

        try:
            return cls(
                layout=EncodingLayout(dictionary["num_tasks"], dictionary["num_pes"]),
                cfg=DrmConfig.from_dict(dictionary["config"]),
                actor=net_from_dict(dictionary["actor"]),
                critic=net_from_dict(dictionary["critic"]),
                episode=dictionary.get("episode", 0),
            )
        except KeyError as e:
            raise ValueError(f"Error: Missing key in DRM checkpoint: {e}")

    def save(self, file_path: Path):
        with open(file_path, "w") as f:
            json.dump(self.to_dict(), f)
            logger.info(f"DRM checkpoint saved at: {file_path}")

    @classmethod
    def load(cls, file_path: Path) -> DrmAgent:
        if not file_path.exists():
            raise FileNotFoundError(f"Error: DRM checkpoint not found: {file_path}")

        with open(file_path, "r") as f:
            return cls.from_dict(json.load(f))

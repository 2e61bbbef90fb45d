from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class DecisionRecord:
    state: np.ndarray
    action: int
    decision_tick: int
    log_prob: float
    task_id: int = -1


@dataclass
class Trajectory:
    """
    Decisions of one episode. Every ms tick from a decision to the end of the
    episode (episode_length) costs a reward of -1.
    `tau` is the temperature the actions were sampled with.
    """

    decisions: list[DecisionRecord] = field(default_factory=list)
    episode_length: int = 0
    tau: float = 1.0

    def __len__(self):
        return len(self.decisions)

    def add(self, state: np.ndarray, action: int, decision_tick: int, log_prob: float, task_id: int = -1):
        if self.decisions and decision_tick < self.decisions[-1].decision_tick:
            raise ValueError(
                f"Error: Decision ticks must not decrease ({self.decisions[-1].decision_tick} -> {decision_tick})"
            )
        self.decisions.append(DecisionRecord(state, action, decision_tick, log_prob, task_id))

    def states(self) -> np.ndarray:
        return np.stack([d.state for d in self.decisions])

    def actions(self) -> np.ndarray:
        return np.array([d.action for d in self.decisions], dtype=np.int64)

    def ticks(self) -> np.ndarray:
        return np.array([d.decision_tick for d in self.decisions], dtype=np.int64)


def compute_returns(traj: Trajectory, gamma: float) -> np.ndarray:
    """
    Discounted return of every decision under a reward of -1 per ms tick.

    With k = T - t remaining ticks: G_t = -(1 - gamma^k) / (1 - gamma), or -k when gamma = 1.

    Args:
        traj: A finished trajectory
        gamma: Discount per tick in [0, 1]

    Returns:
        One return per decision, in decision order
    """
    if not 0 <= gamma <= 1:
        raise ValueError(f"Error: gamma must be in [0, 1], got {gamma}")

    remaining = np.maximum(traj.episode_length - traj.ticks(), 0).astype(np.float64)
    if gamma == 1:
        return -remaining

    return -(1.0 - gamma ** remaining) / (1.0 - gamma)

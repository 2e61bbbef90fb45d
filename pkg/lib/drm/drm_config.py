from __future__ import annotations

from dataclasses import asdict, dataclass, fields


@dataclass
class DrmConfig:
    """
    Hyperparameters of the Deep Resource Manager.
    gamma discounts per ms tick, the temperature decays once per training episode.
    """

    gamma: float = 0.99
    tau0: float = 5.0
    tau_min: float = 0.5
    tau_decay: float = 0.995
    lr_actor: float = 1e-3
    lr_critic: float = 1e-3
    seed: int = 0

    normalize_advantage: bool = False
    hidden_sizes: tuple[int, ...] = (128, 64)
    optimizer: str = "adam"  # adam | sgd
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        self.hidden_sizes = tuple(int(h) for h in self.hidden_sizes)

        if not 0 <= self.gamma <= 1:
            raise ValueError(f"Error: gamma must be in [0, 1], got {self.gamma}")
        if not self.tau0 >= self.tau_min > 0:
            raise ValueError(f"Error: Need tau0 >= tau_min > 0, got tau0={self.tau0}, tau_min={self.tau_min}")
        if not 0 < self.tau_decay <= 1:
            raise ValueError(f"Error: tau_decay must be in (0, 1], got {self.tau_decay}")
        if self.lr_actor <= 0 or self.lr_critic <= 0:
            raise ValueError("Error: Learning rates must be positive")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"Error: Unknown optimizer '{self.optimizer}', expected 'adam' or 'sgd'")
        if any(h < 1 for h in self.hidden_sizes):
            raise ValueError(f"Error: Hidden layer sizes must be positive, got {self.hidden_sizes}")

    def to_dict(self) -> dict:
        res = asdict(self)
        res["hidden_sizes"] = list(self.hidden_sizes)
        return res

    @classmethod
    def from_dict(cls, dictionary: dict) -> DrmConfig:
        """Deserialize from dict, unknown keys are rejected."""
        known = {f.name for f in fields(cls)}
        unknown = set(dictionary) - known
        if unknown:
            raise ValueError(f"Error: Unknown DRM config keys: {sorted(unknown)}")
        return cls(**dictionary)

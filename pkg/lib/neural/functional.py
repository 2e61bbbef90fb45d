import numpy as np


def _scaled_logits(logits: np.ndarray, tau: float) -> np.ndarray:
    if not tau > 0:
        raise ValueError(f"Error: Temperature must be positive, got {tau}")

    z = np.asarray(logits, dtype=np.float64) / tau
    # Max-shift along the action axis keeps exp() in range
    return z - z.max(axis=-1, keepdims=True)


def softmax_temperature(logits: np.ndarray, tau: float) -> np.ndarray:
    """
    SoftMax of logits / tau along the last axis.
    Large tau flattens the distribution, tau -> 0 approaches argmax.
    """
    e = np.exp(_scaled_logits(logits, tau))
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax_temperature(logits: np.ndarray, tau: float) -> np.ndarray:
    """Natural log of softmax_temperature, computed without underflow."""
    z = _scaled_logits(logits, tau)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))

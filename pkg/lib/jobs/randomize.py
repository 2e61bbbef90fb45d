import math

import numpy as np

from lib.jobs.model.resource_matrix import ResourceMatrix

DEFAULT_RANDOMIZE_FRACTION = 0.3


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def jitter_bounds(exec_time: int, fraction: float) -> tuple[int, int]:
    """Inclusive range a jittered execution time is drawn from."""
    low = max(1, _round_half_up(exec_time * (1 - fraction)))
    high = _round_half_up(exec_time * (1 + fraction))
    return low, max(low, high)


def randomize_resource_matrix(
    rm: ResourceMatrix,
    fraction: float,
    rng: np.random.Generator,
) -> ResourceMatrix:
    """
    Applies uniform multiplicative jitter to every execution time.
    Each time e is replaced by an integer drawn uniformly from
    [max(1, r(e * (1 - fraction))), r(e * (1 + fraction))], r rounding half up.

    Args:
        rm: The original resource matrix
        fraction: Relative jitter in [0, 1)
        rng: Generator the draws are taken from

    Returns:
        A new ResourceMatrix covering the same tasks and resources
    """
    if not 0 <= fraction < 1:
        raise ValueError(f"Error: Randomization fraction must be in [0, 1), got {fraction}")

    table = {}
    for r in rm.resources:
        perf = {}
        for name, exec_time in r.perf.items():
            low, high = jitter_bounds(exec_time, fraction)
            perf[name] = int(rng.integers(low, high + 1))
        table[r.resource_id] = perf

    return rm.with_times(table)

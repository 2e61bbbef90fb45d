import logging
from pathlib import Path

import numpy as np

from lib.jobs.model.job import JobSpec, TaskSpec
from lib.jobs.model.resource_matrix import ResourceEntry, ResourceMatrix
from lib.jobs.spec_format import write_job, write_resource_matrix
from lib.utils.create_dir import create_directory

logger = logging.getLogger(__name__)

DEFAULT_TASKS = 10
DEFAULT_PES = 3
MIN_EXEC_MS = 2
MAX_EXEC_MS = 20

# Upper bound on the number of DAG layers and on extra (non-layer) predecessors
MAX_LAYERS = 5
MAX_EXTRA_PREDS = 2


def _layers(n_tasks: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Splits the task IDs 0..n-1 into consecutive, non-empty layers."""
    if n_tasks == 1:
        return [np.array([0])]

    n_layers = int(rng.integers(2, min(n_tasks, MAX_LAYERS) + 1))
    cuts = np.sort(rng.choice(np.arange(1, n_tasks), size=n_layers - 1, replace=False))
    return np.split(np.arange(n_tasks), cuts)


def generate_sample_specs(
    n_tasks: int = DEFAULT_TASKS,
    n_pes: int = DEFAULT_PES,
    rng: np.random.Generator | int | None = None,
    name: str = "sample",
    min_exec: int = MIN_EXEC_MS,
    max_exec: int = MAX_EXEC_MS,
) -> tuple[JobSpec, ResourceMatrix]:
    """
    Creates a random layered job and a matching resource matrix.

    Every task of a layer depends on one task of the previous layer and on up to
    MAX_EXTRA_PREDS further tasks of earlier layers. The first layer holds the heads,
    tasks nobody depends on are flagged as tails.

    Args:
        n_tasks: Number of tasks (>= 1)
        n_pes: Number of processing elements (>= 1)
        rng: Generator or seed, the output is deterministic per seed
        name: Name of the job
        min_exec: Smallest execution time in ms (Default: 2)
        max_exec: Largest execution time in ms (Default: 20)

    Returns:
        A valid JobSpec and a ResourceMatrix that covers it
    """
    if n_tasks < 1 or n_pes < 1:
        raise ValueError(f"Error: Need at least one task and one PE, got {n_tasks} tasks and {n_pes} PEs")
    if not 1 <= min_exec <= max_exec:
        raise ValueError(f"Error: Invalid execution time range [{min_exec}, {max_exec}]")

    rng = np.random.default_rng(rng)
    layers = _layers(n_tasks, rng)

    preds: dict[int, set[int]] = {int(i): set() for i in layers[0]}
    for k in range(1, len(layers)):
        earlier = np.arange(layers[k][0])
        for task_id in layers[k]:
            chosen = {int(rng.choice(layers[k - 1]))}

            extra_cnt = int(rng.integers(0, MAX_EXTRA_PREDS + 1))
            candidates = np.array([p for p in earlier if p not in chosen])
            if extra_cnt and len(candidates):
                extra = rng.choice(candidates, size=min(extra_cnt, len(candidates)), replace=False)
                chosen.update(int(p) for p in extra)

            preds[int(task_id)] = chosen

    exec_times = rng.integers(min_exec, max_exec + 1, size=(n_pes, n_tasks))
    referenced = {p for ps in preds.values() for p in ps}

    # The serial worst case is a deadline every schedule can meet
    deadline = int(exec_times.max(axis=0).sum())

    tasks = tuple(
        TaskSpec(
            name=f"T{i}",
            id=i,
            predecessors=frozenset(preds[i]),
            is_head=not preds[i],
            is_tail=i not in referenced,
            earliest_start=0,
            deadline=deadline,
        )
        for i in range(n_tasks)
    )
    job = JobSpec(name=name, tasks=tasks)

    rm = ResourceMatrix(
        resources=tuple(
            ResourceEntry(pe, {f"T{i}": int(exec_times[pe, i]) for i in range(n_tasks)})
            for pe in range(n_pes)
        )
    )

    return job, rm


def write_sample_specs(
    out_dir: Path,
    n_tasks: int = DEFAULT_TASKS,
    n_pes: int = DEFAULT_PES,
    seed: int = 0,
) -> tuple[Path, Path]:
    """
    Generates a sample job and resource matrix and saves them as text files.

    Files are named ``job_<tasks>t_<pes>p_s<seed>.txt`` and ``rm_<tasks>t_<pes>p_s<seed>.txt``.

    Returns:
        Paths of the job file and the resource matrix file
    """
    stem = f"{n_tasks}t_{n_pes}p_s{seed}"
    job, rm = generate_sample_specs(n_tasks, n_pes, np.random.default_rng(seed), name=f"sample_{stem}")

    output_dir = create_directory(out_dir)
    job_path = output_dir / f"job_{stem}.txt"
    rm_path = output_dir / f"rm_{stem}.txt"

    with open(job_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(write_job(job))
    with open(rm_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(write_resource_matrix(rm, job))

    logger.info(f"Saved sample job at: {job_path}")
    logger.info(f"Saved sample resource matrix at: {rm_path}")

    return job_path, rm_path

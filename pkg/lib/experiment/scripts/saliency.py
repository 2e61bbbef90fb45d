import logging
from pathlib import Path

import numpy as np
import pandas as pd

from lib.drm.agent import DrmAgent
from lib.jobs.model.job import JobSpec
from lib.jobs.model.resource_matrix import ResourceMatrix
from lib.scheduling.methods.implementations.drm import DrmScheduler
from lib.simulation.engine import DEFAULT_MAX_SIMULATION_LENGTH, elapsed_ticks, run_episode
from lib.utils.create_dir import create_directory
from lib.utils.export_table import export_table_to_csv
from lib.utils.open import open_job, open_resource_matrix
from lib.visualization.saliency_map import emit_saliency_map

logger = logging.getLogger(__name__)

_META_COLUMNS = ["decision", "tick", "task", "pe"]


def collect_saliency(
    agent: DrmAgent,
    job: JobSpec,
    rm: ResourceMatrix,
    max_simulation_length: int = DEFAULT_MAX_SIMULATION_LENGTH,
) -> tuple[pd.DataFrame, np.ndarray]:
    """
    Runs one greedy episode and computes the input saliency of every decision.

    Returns:
        One row per decision (decision, tick, task, pe, then one column per state entry)
        and the encoded state of the first decision
    """
    scheduler = DrmScheduler(agent, training=False, greedy=True)
    result = run_episode(job, rm, scheduler, max_simulation_length)
    logger.info(f"Greedy episode of {job.name}: {elapsed_ticks(result)} ms, {result.decision_count} decisions")

    columns = _META_COLUMNS + agent.layout.feature_names()
    rows = []
    for idx, d in enumerate(scheduler.trajectory.decisions):
        saliency = agent.saliency(d.state, d.action)
        rows.append([idx, d.decision_tick, d.task_id, d.action, *saliency.tolist()])

    decisions = scheduler.trajectory.decisions
    first_state = decisions[0].state if decisions else np.zeros(agent.layout.dimension)
    return pd.DataFrame(rows, columns=columns), first_state


def export_saliency(
    checkpoint_path: Path,
    job_path: Path,
    rm_path: Path,
    out_dir: Path | None = None,
    max_simulation_length: int = DEFAULT_MAX_SIMULATION_LENGTH,
) -> Path:
    """
    Writes saliency.csv, saliency.svg (mean saliency over all decisions) and
    state.svg (encoded state at the first decision) for a trained checkpoint.

    Returns:
        The output directory
    """
    agent = DrmAgent.load(checkpoint_path)
    job = open_job(job_path)
    rm = open_resource_matrix(rm_path, job)

    out_dir = create_directory(out_dir or checkpoint_path.parent / f"saliency_{checkpoint_path.stem}")
    table, first_state = collect_saliency(agent, job, rm, max_simulation_length)

    export_table_to_csv(table, out_dir / "saliency.csv")

    features = table.drop(columns=_META_COLUMNS).to_numpy(dtype=np.float64)
    mean_saliency = features.mean(axis=0) if len(features) else np.zeros(agent.layout.dimension)

    with open(out_dir / "saliency.svg", "w", encoding="utf-8") as f:
        f.write(emit_saliency_map(mean_saliency, agent.layout, title=f"Mean input saliency: {job.name}"))
    with open(out_dir / "state.svg", "w", encoding="utf-8") as f:
        f.write(emit_saliency_map(first_state, agent.layout, title=f"Encoded state at the first decision: {job.name}"))

    logger.info(f"Saved saliency maps at: {out_dir}")
    return out_dir

import json
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import pandas as pd
from tqdm import tqdm

from lib.drm.agent import DrmAgent
from lib.experiment.model.experiment_config import ExperimentConfig
from lib.experiment.model.metrics import CellOutcome, MetricsRow, MetricsWriter, rows_to_frame
from lib.experiment.summary import summary_table
from lib.jobs.model.job import JobSpec
from lib.jobs.model.resource_matrix import ResourceMatrix
from lib.jobs.model.schedule import EpisodeResult
from lib.jobs.randomize import randomize_resource_matrix
from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.model.scheduler import Scheduler
from lib.scheduling.scripts.get_scheduler import get_scheduler
from lib.simulation.engine import elapsed_ticks, run_episode
from lib.utils.create_dir import create_directory
from lib.utils.export_table import export_table_to_csv
from lib.utils.open import open_job, open_resource_matrix
from lib.visualization.chart_format import ChartFormat
from lib.visualization.curve import emit_curve
from lib.visualization.gantt import emit_gantt

logger = logging.getLogger(__name__)

Instance = tuple[JobSpec, ResourceMatrix]


@dataclass
class ExperimentReport:
    output_dir: Path
    rows: list[MetricsRow] = field(default_factory=list)
    summary: pd.DataFrame | None = None
    failed: list[tuple[int, str, str]] = field(default_factory=list)


def load_instances(cfg: ExperimentConfig) -> list[Instance]:
    """Parses every (job, resource matrix) pair of the config in cycling order."""
    instances = []
    for job_path, rm_path in cfg.file_pairs:
        job = open_job(job_path)
        instances.append((job, open_resource_matrix(rm_path, job)))
    return instances


def _check_fixed_shape(instances: list[Instance]):
    shapes = {(job.task_count, rm.pe_count) for job, rm in instances}
    if len(shapes) > 1:
        raise ValueError(
            f"Error: The DRM state size is fixed, but the inputs mix (tasks, PEs) shapes {sorted(shapes)}"
        )


def _write_gantt(result: EpisodeResult, job: JobSpec, rm: ResourceMatrix, path: Path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(emit_gantt(result, ChartFormat.SVG, job=job, pe_count=rm.pe_count))


def _greedy_evaluation(
    agent: DrmAgent,
    instance: Instance,
    cfg: ExperimentConfig,
    seed: int,
    gantt_dir: Path,
) -> float | None:
    """Runs argmax episodes with frozen parameters. Returns the mean elapsed time."""
    if cfg.eval_episodes < 1:
        return None

    job, rm = instance
    scheduler = get_scheduler(Schedulers.DRM, agent=agent, training=False, greedy=True)

    elapsed = []
    for episode in range(cfg.eval_episodes):
        result = run_episode(job, rm, scheduler, cfg.max_simulation_length)
        result.episode, result.seed = episode, seed
        elapsed.append(elapsed_ticks(result))

    _write_gantt(result, job, rm, gantt_dir / f"{Schedulers.DRM.value}_seed{seed}_greedy.svg")
    return float(np.mean(elapsed))


def run_cell(cfg: ExperimentConfig, seed: int, scheduler_type: Schedulers, show_progress: bool = True) -> CellOutcome:
    """
    Trains or runs one scheduler under one seed for all episodes of the experiment.

    The randomization stream depends only on the seed, so every scheduler of a seed
    sees the same sequence of resource matrices.

    Raises:
        ParseError: If an input file is malformed
        SimulationError: If the scheduler makes an invalid decision
    """
    instances = load_instances(cfg)
    rng = np.random.default_rng([seed, 1])

    kwargs = {}
    if scheduler_type.is_learning:
        _check_fixed_shape(instances)
        kwargs = {
            "job": instances[0][0],
            "rm": instances[0][1],
            "drm_config": replace(cfg.drm, seed=cfg.drm.seed + seed),
        }
    scheduler: Scheduler = get_scheduler(scheduler_type, **kwargs)

    gantt_dir = create_directory(cfg.output_dir, "gantt")
    stem = f"{scheduler.name}_seed{seed}"
    outcome = CellOutcome(seed=seed, scheduler=scheduler.name)

    episodes = tqdm(
        range(cfg.episodes),
        desc=f"{scheduler.name} seed {seed}",
        leave=False,
        disable=not show_progress,
    )
    for episode in episodes:
        job, rm = instances[episode % len(instances)]
        if cfg.randomize:
            rm = randomize_resource_matrix(rm, cfg.randomize_fraction, rng)

        result = run_episode(job, rm, scheduler, cfg.max_simulation_length)
        result.episode, result.seed = episode, seed
        stats = scheduler.learn(result) or {}

        outcome.rows.append(
            MetricsRow(
                seed=seed,
                scheduler=scheduler.name,
                episode=episode,
                makespan_ms=elapsed_ticks(result),
                timeout=result.terminated_by_timeout,
                temperature=stats.get("temperature"),
                loss_actor=stats.get("loss_actor"),
                loss_critic=stats.get("loss_critic"),
                deadline_misses=result.deadline_misses,
            )
        )
        if cfg.save_episodes:
            outcome.episodes.append(result.to_dict())

        if episode == 0:
            _write_gantt(result, job, rm, gantt_dir / f"{stem}_first.svg")
        if episode == cfg.episodes - 1:
            _write_gantt(result, job, rm, gantt_dir / f"{stem}_last.svg")

        logger.debug(f"{stem} episode {episode}: {elapsed_ticks(result)} ms")

    misses = sum(r.deadline_misses for r in outcome.rows)
    if misses:
        logger.warning(f"{stem}: {misses} tasks finished after their deadline")

    if scheduler_type.is_learning:
        agent = scheduler.agent
        agent.save(create_directory(cfg.output_dir, "checkpoints") / f"drm_seed{seed}.json")
        outcome.greedy_makespan = _greedy_evaluation(agent, instances[0], cfg, seed, gantt_dir)

    makespans = [r.makespan_ms for r in outcome.rows]
    logger.info(
        f"{stem}: mean {np.mean(makespans):.1f} ms, min {min(makespans)} ms, "
        f"last {min(cfg.summary_window, len(makespans))} mean {np.mean(makespans[-cfg.summary_window:]):.1f} ms"
    )
    return outcome


def _run_cell_safe(cfg: ExperimentConfig, seed: int, scheduler_type: Schedulers, show_progress: bool) -> CellOutcome:
    try:
        return run_cell(cfg, seed, scheduler_type, show_progress)
    # A failing cell must not stop the others
    except Exception as e:
        return CellOutcome(seed=seed, scheduler=scheduler_type.value, error=f"{type(e).__name__}: {e}")


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """
    Runs every (seed, scheduler) cell of an experiment and writes its artifacts:
    metrics.jsonl / metrics.csv, episodes.jsonl, summary.csv, curve.svg,
    GANTT charts of the first and last episode per cell and DRM checkpoints.

    Cells run in a process pool when `workers > 1`. Metrics are written by this
    process only, one cell at a time.

    Returns:
        ExperimentReport with all rows, the summary table and the failed cells
    """
    output_dir = create_directory(cfg.output_dir)
    with open(output_dir / "config.json", "w", encoding="utf-8") as f:
        json.dump(cfg.to_dict(), f, indent=2)

    cells = [(seed, s) for seed in cfg.seeds for s in cfg.schedulers]
    logger.info(f"Start experiment '{cfg.name}' with {len(cells)} cells in {output_dir}")

    writer = MetricsWriter(output_dir, cfg.save_episodes)
    report = ExperimentReport(output_dir=output_dir)
    greedy: dict[tuple[int, str], float] = {}

    def collect(outcome: CellOutcome):
        if outcome.failed:
            logger.warning(f"Cell seed {outcome.seed} / {outcome.scheduler} failed. Error: {outcome.error}")
            report.failed.append((outcome.seed, outcome.scheduler, outcome.error))
            return

        writer.write_cell(outcome)
        report.rows.extend(outcome.rows)
        if outcome.greedy_makespan is not None:
            greedy[(outcome.seed, outcome.scheduler)] = outcome.greedy_makespan

    if cfg.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_cell_safe, cfg, seed, s, False) for seed, s in cells]
            for future in tqdm(as_completed(futures), total=len(futures), desc=cfg.name):
                collect(future.result())
    else:
        for seed, s in tqdm(cells, desc=cfg.name):
            collect(_run_cell_safe(cfg, seed, s, True))

    if report.failed:
        logger.warning(f"Experiment '{cfg.name}' failed for cells: {[(s, n) for s, n, _ in report.failed]}")

    if report.rows:
        export_table_to_csv(rows_to_frame(report.rows), output_dir / "metrics.csv")

        report.summary = summary_table(report.rows, cfg.summary_window, greedy)
        export_table_to_csv(report.summary, output_dir / "summary.csv")

        with open(output_dir / "curve.svg", "w", encoding="utf-8") as f:
            f.write(emit_curve(report.rows, cfg.rolling_window, title=cfg.name))

    logger.info(
        f"Finished experiment '{cfg.name}': {len(cells) - len(report.failed)}/{len(cells)} cells, "
        f"{len(report.rows)} metrics rows"
    )
    return report

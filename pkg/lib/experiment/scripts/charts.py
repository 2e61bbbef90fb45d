import logging
from pathlib import Path

from lib.experiment.model.metrics import read_metrics
from lib.jobs.model.schedule import EpisodeResult
from lib.utils.create_dir import create_directory
from lib.utils.open import open_episode_results, open_job
from lib.visualization.chart_format import ChartFormat
from lib.visualization.curve import DEFAULT_ROLLING_WINDOW, emit_curve
from lib.visualization.gantt import emit_gantt

logger = logging.getLogger(__name__)


def _write(document: str, out_path: Path):
    create_directory(out_path.parent)
    with open(out_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(document)
    logger.info(f"Saved chart at: {out_path}")


def compare_metrics(metrics_path: Path, out_path: Path, window: int = DEFAULT_ROLLING_WINDOW) -> Path:
    """Renders the execution-time curves of a metrics file."""
    rows = read_metrics(metrics_path)
    _write(emit_curve(rows, window, title=metrics_path.parent.name), out_path)
    return out_path


def _select(
    results: list[EpisodeResult],
    episode: int | None,
    scheduler: str | None,
    seed: int | None,
) -> EpisodeResult:
    matches = [
        r for r in results
        if (scheduler is None or r.scheduler == scheduler)
        and (seed is None or r.seed == seed)
        and (episode is None or r.episode == episode)
    ]
    if not matches:
        raise ValueError(f"Error: No episode record with episode={episode}, scheduler={scheduler}, seed={seed}")
    return matches[-1]


def render_gantt(
    result_path: Path,
    chart_format: ChartFormat = ChartFormat.SVG,
    out_path: Path | None = None,
    job_path: Path | None = None,
    episode: int | None = None,
    scheduler: str | None = None,
    seed: int | None = None,
) -> Path:
    """
    Renders the GANTT chart of one episode record.
    Without filters the last record of the file is used.
    """
    result = _select(open_episode_results(result_path), episode, scheduler, seed)
    job = open_job(job_path) if job_path else None

    if out_path is None:
        out_path = result_path.with_name(f"{result_path.stem}_gantt{chart_format.suffix}")

    _write(emit_gantt(result, chart_format, job=job), out_path)
    return out_path

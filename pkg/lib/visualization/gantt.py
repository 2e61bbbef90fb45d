import math
import string
from html import escape

from lib.jobs.model.job import JobSpec
from lib.jobs.model.schedule import Assignment, EpisodeResult
from lib.visualization.chart_format import ChartFormat
from lib.visualization.colors import get_color

# Text lanes get at most this many columns, longer schedules are scaled down
MAX_TEXT_COLUMNS = 100
_SYMBOLS = string.digits + string.ascii_uppercase + string.ascii_lowercase
_IDLE = "."

SVG_MAX_WIDTH = 800.0
SVG_LEFT = 60
SVG_TOP = 40
SVG_ROW = 30


def _task_label(task_id: int, job: JobSpec | None) -> str:
    if job is not None and task_id in job.by_id:
        return job.task(task_id).name
    return f"T{task_id}"


def _pe_count(result: EpisodeResult, pe_count: int | None) -> int:
    used = max((a.pe_id for a in result.schedule), default=-1) + 1
    return max(used, pe_count or result.pe_count, 1)


def _header(result: EpisodeResult, job: JobSpec | None) -> str:
    parts = ["GANTT"]
    if job is not None:
        parts.append(f"job={job.name}")
    if result.scheduler:
        parts.append(f"scheduler={result.scheduler}")
    parts.append(f"makespan={result.makespan}ms")
    if result.terminated_by_timeout:
        parts.append("timeout")
    return " ".join(parts)


def _running_within(lane: list[Assignment], start: int, stop: int) -> Assignment | None:
    """
    Assignment shown in the column [start, stop): any overlap counts, tasks starting
    inside the column win over tasks running through it, shorter tasks first.
    """
    overlapping = [a for a in lane if a.start_tick < stop and start < a.finish_tick]
    if not overlapping:
        return None
    return min(overlapping, key=lambda a: (a.start_tick < start, a.duration, a.start_tick, a.task_id))


def _emit_text(result: EpisodeResult, job: JobSpec | None, pe_count: int) -> str:
    span = max(result.end_tick, 1)
    scale = math.ceil(span / MAX_TEXT_COLUMNS)
    columns = math.ceil(span / scale)
    lanes = result.lanes()

    lines = [_header(result, job), f"scale: 1 column = {scale} ms"]
    for pe in range(pe_count):
        lane = lanes.get(pe, [])
        cells = []
        for col in range(columns):
            a = _running_within(lane, col * scale, min((col + 1) * scale, span))
            cells.append(_IDLE if a is None else _SYMBOLS[a.task_id % len(_SYMBOLS)])
        lines.append(f"PE{pe:<3}|{''.join(cells)}|")

    lines.append("")
    lines.append(f"{'sym':<4}{'task':<6}{'name':<12}{'pe':<4}{'start':>7}{'finish':>8}")
    for a in sorted(result.schedule, key=lambda a: (a.start_tick, a.pe_id, a.task_id)):
        lines.append(
            f"{_SYMBOLS[a.task_id % len(_SYMBOLS)]:<4}{a.task_id:<6}{_task_label(a.task_id, job):<12}"
            f"{a.pe_id:<4}{a.start_tick:>7}{a.finish_tick:>8}"
        )

    return "\n".join(lines) + "\n"


def _emit_svg(result: EpisodeResult, job: JobSpec | None, pe_count: int) -> str:
    span = max(result.end_tick, 1)
    px_per_ms = min(20.0, SVG_MAX_WIDTH / span)
    width = SVG_LEFT + span * px_per_ms + 20
    height = SVG_TOP + pe_count * SVG_ROW + 30

    def x_of(tick: int) -> str:
        return f"{SVG_LEFT + tick * px_per_ms:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2f}" height="{height}" '
        f'viewBox="0 0 {width:.2f} {height}" font-family="Arial, sans-serif" font-size="11">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{SVG_LEFT}" y="20" font-size="13">{escape(_header(result, job))}</text>',
    ]

    for pe in range(pe_count):
        y = SVG_TOP + pe * SVG_ROW
        parts.append(f'<g class="lane" data-pe="{pe}">')
        parts.append(f'<text x="8" y="{y + SVG_ROW / 2 + 4:.0f}">PE{pe}</text>')
        parts.append(
            f'<line x1="{SVG_LEFT}" y1="{y + SVG_ROW}" x2="{width - 20:.2f}" y2="{y + SVG_ROW}" stroke="#dddddd"/>'
        )
        parts.append("</g>")

    for a in sorted(result.schedule, key=lambda a: (a.pe_id, a.start_tick, a.task_id)):
        y = SVG_TOP + a.pe_id * SVG_ROW + 4
        # tasks still running at a timeout are cut at the limit
        shown = min(a.finish_tick, span) - a.start_tick
        bar_width = shown * px_per_ms
        label = escape(_task_label(a.task_id, job))
        parts.append(
            f'<rect class="bar" x="{x_of(a.start_tick)}" y="{y}" width="{bar_width:.2f}" height="{SVG_ROW - 8}" '
            f'fill="{get_color(a.task_id)}" stroke="black" stroke-width="0.5" '
            f'data-task="{a.task_id}" data-pe="{a.pe_id}" data-start="{a.start_tick}" data-finish="{a.finish_tick}">'
            f"<title>{label} on PE{a.pe_id}: [{a.start_tick}, {a.finish_tick})</title></rect>"
        )
        parts.append(
            f'<text x="{SVG_LEFT + (a.start_tick + shown / 2) * px_per_ms:.2f}" y="{y + 15}" '
            f'text-anchor="middle">{label}</text>'
        )

    # Time axis
    axis_y = SVG_TOP + pe_count * SVG_ROW
    step = max(1, math.ceil(span / 10))
    for tick in range(0, span + 1, step):
        parts.append(f'<text x="{x_of(tick)}" y="{axis_y + 16}" text-anchor="middle">{tick}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_gantt(
    result: EpisodeResult,
    chart_format: ChartFormat = ChartFormat.SVG,
    job: JobSpec | None = None,
    pe_count: int | None = None,
) -> str:
    """
    Renders the schedule of an episode with one lane per PE and one bar per
    assignment spanning [start, finish).
    A timed-out episode spans up to its limit, bars of tasks still running are cut there.

    Args:
        result: Episode to render
        chart_format: Fixed-width text or SVG (Default: SVG)
        job: Job of the episode, used for task names in labels
        pe_count: Number of lanes, PEs without assignments still get a lane

    Returns:
        The document as a string, identical for identical inputs
    """
    pes = _pe_count(result, pe_count)

    match chart_format:
        case ChartFormat.TEXT:
            return _emit_text(result, job, pes)
        case ChartFormat.SVG:
            return _emit_svg(result, job, pes)
        case _:
            raise ValueError(f'No GANTT renderer for format "{chart_format}"')

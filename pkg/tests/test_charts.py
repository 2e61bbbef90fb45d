import json
import re

import numpy as np
import pytest

from helpers import make_job, make_rm, random_instance
from lib.drm.encoding import EncodingLayout
from lib.experiment.model.metrics import MetricsRow
from lib.experiment.scripts.charts import render_gantt
from lib.jobs.model.schedule import Assignment, EpisodeResult
from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.scripts.get_scheduler import get_scheduler
from lib.simulation.engine import run_episode
from lib.utils.display_names import get_scheduler_display_name
from lib.visualization.chart_format import ChartFormat
from lib.visualization.colors import heat_color
from lib.visualization.curve import emit_curve, rolling_mean
from lib.visualization.gantt import emit_gantt
from lib.visualization.saliency_map import emit_saliency_map

_BAR = re.compile(r'data-task="(\d+)" data-pe="(\d+)" data-start="(\d+)" data-finish="(\d+)"')


def _bars(svg: str) -> list[tuple[int, int, int, int]]:
    return [tuple(int(v) for v in m) for m in _BAR.findall(svg)]


# GANTT


def test_text_gantt(chain_job, chain_rm):
    result = run_episode(chain_job, chain_rm, get_scheduler(Schedulers.MET))
    result.scheduler = "met"

    text = emit_gantt(result, ChartFormat.TEXT, job=chain_job)
    lines = text.splitlines()

    assert lines[0] == "GANTT job=chain scheduler=met makespan=6ms"
    assert lines[1] == "scale: 1 column = 1 ms"
    assert lines[2] == "PE0  |00....|"
    assert lines[3] == "PE1  |..1122|"
    assert text == emit_gantt(result, ChartFormat.TEXT, job=chain_job)


def test_text_gantt_scales_long_schedules():
    result = EpisodeResult(makespan=450, schedule=[Assignment(0, 0, 0, 0, 450)])

    lines = emit_gantt(result, ChartFormat.TEXT).splitlines()

    assert lines[1] == "scale: 1 column = 5 ms"
    assert lines[2] == "PE0  |" + "0" * 90 + "|"


def test_single_task_bar():
    job = make_job({0: set()})
    result = run_episode(job, make_rm([{"T0": 7}, {"T0": 9}]), get_scheduler(Schedulers.MET))

    svg = emit_gantt(result, ChartFormat.SVG, job=job, pe_count=2)

    assert _bars(svg) == [(0, 0, 0, 7)]
    assert svg.count('class="lane"') == 2


def test_svg_gantt_recovers_a_valid_schedule():
    rng = np.random.default_rng(31)

    for _ in range(100):
        job, rm = random_instance(rng, max_tasks=8, max_release=4)
        result = run_episode(job, rm, get_scheduler(Schedulers.ETF))

        bars = _bars(emit_gantt(result, ChartFormat.SVG, job=job, pe_count=rm.pe_count))

        assert sorted(bars) == sorted((a.task_id, a.pe_id, a.start_tick, a.finish_tick) for a in result.schedule)
        finish = {task: f for task, _, _, f in bars}
        for task, pe, start, end in bars:
            assert end - start == rm.exec_time(job.task(task).name, pe)
            assert all(finish[p] <= start for p in job.task(task).predecessors)
            others = [(s, f) for t, q, s, f in bars if q == pe and t != task]
            assert all(end <= s or f <= start for s, f in others)


def test_text_gantt_keeps_short_tasks_when_scaled():
    result = EpisodeResult(
        makespan=500,
        schedule=[Assignment(0, 0, 0, 0, 498), Assignment(1, 0, 498, 498, 500), Assignment(2, 1, 0, 2, 3)],
    )

    lines = emit_gantt(result, ChartFormat.TEXT).splitlines()

    assert lines[1] == "scale: 1 column = 5 ms"
    assert lines[2] == "PE0  |" + "0" * 99 + "1|"
    assert lines[3] == "PE1  |2" + "." * 99 + "|"


def test_recorded_pe_count_gives_idle_pes_a_lane(tmp_path):
    job = make_job({0: set()})
    result = run_episode(job, make_rm([{"T0": 7}, {"T0": 9}, {"T0": 9}]), get_scheduler(Schedulers.MET))
    path = tmp_path / "episodes.jsonl"
    path.write_text(json.dumps(result.to_dict()) + "\n")

    out = render_gantt(path, ChartFormat.TEXT)
    lines = out.read_text().splitlines()

    assert result.pe_count == 3
    assert lines[2:5] == ["PE0  |0000000|", "PE1  |.......|", "PE2  |.......|"]


def test_timed_out_bars_are_cut_at_the_limit(chain_job, chain_rm):
    result = run_episode(chain_job, chain_rm, get_scheduler(Schedulers.MET), max_simulation_length=3)
    assert result.terminated_by_timeout and result.makespan == 2

    lines = emit_gantt(result, ChartFormat.TEXT, job=chain_job).splitlines()
    assert "timeout" in lines[0]
    assert lines[2:4] == ["PE0  |00.|", "PE1  |..1|"]

    svg = emit_gantt(result, ChartFormat.SVG, job=chain_job)
    assert (1, 1, 2, 4) in _bars(svg)
    limit_x = float(re.search(r'<text x="([\d.]+)"[^>]*>3</text>', svg).group(1))
    for x, width in re.findall(r'<rect class="bar" x="([\d.]+)" y="\d+" width="([\d.]+)"', svg):
        assert float(x) + float(width) <= limit_x + 1e-9


def test_empty_schedule_renders():
    svg = emit_gantt(EpisodeResult(makespan=0))

    assert _bars(svg) == []
    assert svg.count('class="lane"') == 1


# CURVES


def test_rolling_mean():
    assert rolling_mean([100, 90, 80], 2) == [100, 95, 85]
    assert rolling_mean([3, 5], 1) == [3, 5]
    with pytest.raises(ValueError):
        rolling_mean([1, 2], 0)


def _points(svg: str, scheduler: str) -> list[tuple[float, float]]:
    match = re.search(rf'<polyline class="series" data-scheduler="{scheduler}"[^>]* points="([^"]*)"', svg)
    return [tuple(float(v) for v in p.split(",")) for p in match.group(1).split()]


def test_constant_series_is_horizontal():
    rows = [MetricsRow(seed, "eft", e, 42) for seed in (0, 1) for e in range(30)]

    points = _points(emit_curve(rows, window=5), "eft")

    assert len(points) == 30
    assert len({y for _, y in points}) == 1
    assert [x for x, _ in points] == sorted(x for x, _ in points)


def test_one_line_and_legend_per_scheduler():
    rows = [MetricsRow(0, "drm", e, 100 - e) for e in range(40)]
    rows += [MetricsRow(0, "met", e, 80) for e in range(40)]

    svg = emit_curve(rows, window=10, title="two")

    assert svg.count('class="series"') == 2
    assert svg.count('class="legend"') == 2
    assert get_scheduler_display_name("drm") in svg
    drm = _points(svg, "drm")
    # SVG y grows downwards, falling makespans move down the chart
    assert drm[0][1] < drm[-1][1]


# SALIENCY MAPS


def _cells(svg: str) -> list[tuple[str, float]]:
    return [
        (fill, float(value))
        for fill, value in re.findall(r'<rect class="cell"[^>]* fill="([^"]+)"[^>]* data-value="([^"]+)"', svg)
    ]


def test_zero_vector_is_blank():
    layout = EncodingLayout(3, 2)

    cells = _cells(emit_saliency_map(np.zeros(layout.dimension), layout))

    assert len(cells) == layout.dimension
    assert {fill for fill, _ in cells} == {heat_color(0.0)}


def test_one_hot_has_a_single_peak():
    layout = EncodingLayout(4, 3)
    vector = np.zeros(layout.dimension)
    vector[17] = -0.3

    cells = _cells(emit_saliency_map(vector, layout))

    assert [i for i, (fill, _) in enumerate(cells) if fill == heat_color(1.0)] == [17]
    assert sum(value for _, value in cells) == 1.0


def test_block_labels():
    layout = EncodingLayout(3, 2)

    svg = emit_saliency_map(np.ones(layout.dimension), layout)

    assert re.findall(r'<text class="block-label"[^>]*>([^<]+)</text>', svg) == [
        "status", "assignment", "adjacency", "exec-time"
    ]


def test_saliency_map_dimension_mismatch():
    with pytest.raises(ValueError):
        emit_saliency_map(np.zeros(5), EncodingLayout(3, 2))

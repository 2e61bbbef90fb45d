from html import escape
from typing import Iterable, Sequence

import pandas as pd

from lib.experiment.model.metrics import MetricsRow, rows_to_frame
from lib.utils.display_names import get_scheduler_display_name
from lib.visualization.colors import get_color

DEFAULT_ROLLING_WINDOW = 20

WIDTH = 800
HEIGHT = 420
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 40, 50


def rolling_mean(values: Sequence[float], window: int = DEFAULT_ROLLING_WINDOW) -> list[float]:
    """Trailing mean over up to `window` values, shorter at the start of the series."""
    if window < 1:
        raise ValueError(f"Error: Rolling window must be >= 1, got {window}")
    return pd.Series(values, dtype="float64").rolling(window, min_periods=1).mean().tolist()


def curve_series(rows: Iterable[MetricsRow], window: int = DEFAULT_ROLLING_WINDOW) -> dict[str, pd.Series]:
    """Makespan per episode for every scheduler, averaged over seeds and smoothed."""
    df = rows_to_frame(list(rows))
    series = {}
    for scheduler, group in df.groupby("scheduler", sort=True):
        per_episode = group.groupby("episode")["makespan_ms"].mean().sort_index()
        series[str(scheduler)] = pd.Series(rolling_mean(per_episode.tolist(), window), index=per_episode.index)
    return series


def emit_curve(rows: Iterable[MetricsRow], window: int = DEFAULT_ROLLING_WINDOW, title: str = "") -> str:
    """
    Line chart of the execution time versus the episode, one polyline per scheduler.

    Args:
        rows: Metrics rows of any number of seeds and schedulers
        window: Rolling-mean window, 1 plots the raw means (Default: 20)
        title: Optional chart title

    Returns:
        SVG document
    """
    series = curve_series(rows, window)

    x_max = max((s.index.max() for s in series.values() if len(s)), default=1)
    x_max = max(int(x_max), 1)
    values = [v for s in series.values() for v in s.tolist()]
    y_min, y_max = (min(values), max(values)) if values else (0.0, 1.0)
    if y_max - y_min < 1e-9:
        y_min, y_max = y_min - 1, y_max + 1

    plot_w = WIDTH - LEFT - RIGHT
    plot_h = HEIGHT - TOP - BOTTOM

    def x_of(episode: float) -> float:
        return LEFT + episode / x_max * plot_w

    def y_of(value: float) -> float:
        return TOP + (y_max - value) / (y_max - y_min) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Arial, sans-serif" font-size="11">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{LEFT}" y="22" font-size="13">'
        f'{escape(title or "Execution time versus episode")} (rolling mean {window})</text>',
        f'<line x1="{LEFT}" y1="{TOP + plot_h}" x2="{LEFT + plot_w}" y2="{TOP + plot_h}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + plot_h}" stroke="black"/>',
        f'<text x="{LEFT + plot_w / 2:.0f}" y="{HEIGHT - 12}" text-anchor="middle">Episode</text>',
        f'<text x="16" y="{TOP + plot_h / 2:.0f}" transform="rotate(-90 16 {TOP + plot_h / 2:.0f})" '
        f'text-anchor="middle">Execution time [ms]</text>',
    ]

    for i in range(5):
        value = y_min + (y_max - y_min) * i / 4
        parts.append(
            f'<text x="{LEFT - 6}" y="{y_of(value) + 4:.2f}" text-anchor="end">{value:.1f}</text>'
        )
    for i in range(5):
        episode = x_max * i / 4
        parts.append(
            f'<text x="{x_of(episode):.2f}" y="{TOP + plot_h + 16}" text-anchor="middle">{episode:.0f}</text>'
        )

    for idx, (scheduler, s) in enumerate(series.items()):
        color = get_color(idx)
        points = " ".join(f"{x_of(ep):.2f},{y_of(v):.2f}" for ep, v in s.items())
        parts.append(
            f'<polyline class="series" data-scheduler="{escape(scheduler)}" fill="none" '
            f'stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )

        legend_y = TOP + 10 + idx * 18
        parts.append(
            f'<g class="legend" data-scheduler="{escape(scheduler)}">'
            f'<line x1="{WIDTH - RIGHT + 15}" y1="{legend_y}" x2="{WIDTH - RIGHT + 35}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="2"/>'
            f'<text x="{WIDTH - RIGHT + 40}" y="{legend_y + 4}">{escape(get_scheduler_display_name(scheduler))}</text>'
            "</g>"
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"

import numpy as np
import pandas as pd

from lib.experiment.model.metrics import MetricsRow, rows_to_frame

DEFAULT_SUMMARY_WINDOW = 50

SUMMARY_COLUMNS = [
    "episodes",
    "mean",
    "min",
    "first_window_mean",
    "last_window_mean",
    "timeouts",
    "deadline_misses",
    "greedy_makespan",
]


def summarize_cells(
    rows: list[MetricsRow],
    window: int = DEFAULT_SUMMARY_WINDOW,
    greedy: dict[tuple[int, str], float] | None = None,
) -> pd.DataFrame:
    """
    Makespan statistics per (seed, scheduler).

    Args:
        rows: Metrics rows of the experiment
        window: Episodes in the first- and last-window means (Default: 50)
        greedy: Greedy-evaluation makespan per (seed, scheduler), DRM only

    Returns:
        DataFrame indexed by (seed, scheduler) with the columns of SUMMARY_COLUMNS
    """
    keys = ["seed", "scheduler"]
    df = rows_to_frame(rows)
    if df.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS, index=pd.MultiIndex.from_tuples([], names=keys))

    grouped = df.groupby(keys, sort=True)
    makespan = grouped["makespan_ms"]

    cells = pd.DataFrame({
        "episodes": makespan.size(),
        "mean": makespan.mean(),
        "min": makespan.min(),
        "first_window_mean": df.groupby(keys).head(window).groupby(keys)["makespan_ms"].mean(),
        "last_window_mean": df.groupby(keys).tail(window).groupby(keys)["makespan_ms"].mean(),
        "timeouts": grouped["timeout"].sum().astype(int),
        "deadline_misses": grouped["deadline_misses"].sum().astype(int),
    })

    greedy = greedy or {}
    cells["greedy_makespan"] = [greedy.get((int(seed), str(s)), np.nan) for seed, s in cells.index]

    return cells[SUMMARY_COLUMNS]


def summarize_schedulers(cells: pd.DataFrame) -> pd.DataFrame:
    """Aggregates the per-cell statistics over all seeds of each scheduler."""
    return cells.groupby(level="scheduler", sort=True).agg({
        "episodes": "sum",
        "mean": "mean",
        "min": "min",
        "first_window_mean": "mean",
        "last_window_mean": "mean",
        "timeouts": "sum",
        "deadline_misses": "sum",
        "greedy_makespan": "mean",
    })


def summary_table(
    rows: list[MetricsRow],
    window: int = DEFAULT_SUMMARY_WINDOW,
    greedy: dict[tuple[int, str], float] | None = None,
) -> pd.DataFrame:
    """Per-cell rows followed by one aggregate row per scheduler with seed 'all'."""
    cells = summarize_cells(rows, window, greedy)
    overall = summarize_schedulers(cells)

    cells = cells.reset_index()
    cells["seed"] = cells["seed"].astype(str)
    overall = overall.reset_index()
    overall.insert(0, "seed", "all")

    return pd.concat([cells, overall], ignore_index=True)[["seed", "scheduler", *SUMMARY_COLUMNS]]

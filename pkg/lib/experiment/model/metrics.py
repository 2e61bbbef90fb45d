from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)


@dataclass
class MetricsRow:
    """One training episode of one scheduler under one seed. DRM-only columns are None otherwise."""

    seed: int
    scheduler: str
    episode: int
    makespan_ms: int
    timeout: bool = False
    temperature: float | None = None
    loss_actor: float | None = None
    loss_critic: float | None = None
    deadline_misses: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, dictionary: dict) -> MetricsRow:
        """Deserialize from dict. Empty or NaN optional values become None."""

        def optional(key: str) -> float | None:
            value = dictionary.get(key)
            if value is None or value == "" or (isinstance(value, float) and math.isnan(value)):
                return None
            return float(value)

        try:
            return cls(
                seed=int(dictionary["seed"]),
                scheduler=str(dictionary["scheduler"]),
                episode=int(dictionary["episode"]),
                makespan_ms=int(dictionary["makespan_ms"]),
                timeout=bool(dictionary.get("timeout", False)),
                temperature=optional("temperature"),
                loss_actor=optional("loss_actor"),
                loss_critic=optional("loss_critic"),
                deadline_misses=int(dictionary.get("deadline_misses", 0)),
            )
        except KeyError as e:
            raise ValueError(f"Error: Missing key in metrics row: {e}")
        except (TypeError, ValueError) as e:
            raise ValueError(f"Error: Invalid value in metrics row: {e}")


METRICS_COLUMNS = [f.name for f in fields(MetricsRow)]


def rows_to_frame(rows: list[MetricsRow]) -> pd.DataFrame:
    """Metrics as a DataFrame sorted by seed, scheduler and episode."""
    df = pd.DataFrame([r.to_dict() for r in rows], columns=METRICS_COLUMNS)
    return df.sort_values(["seed", "scheduler", "episode"], kind="stable").reset_index(drop=True)


def read_metrics(file_path: Path) -> list[MetricsRow]:
    """
    Reads metrics rows from a `.jsonl` or `.csv` file.

    Raises:
        FileNotFoundError: If there is no file at the path
        ValueError: If a row is malformed
    """
    if not file_path.is_file():
        raise FileNotFoundError(f"Error: Metrics file not found: {file_path}")

    if file_path.suffix == ".csv":
        df = pd.read_csv(file_path)
        # Booleans come back as text if any cell is empty
        if df["timeout"].dtype == object:
            df["timeout"] = df["timeout"].astype(str).str.lower() == "true"
        records = df.to_dict(orient="records")
    else:
        with open(file_path, "r", encoding="utf-8") as f:
            records = [json.loads(line) for line in f if line.strip()]

    return [MetricsRow.from_dict(r) for r in records]


@dataclass
class CellOutcome:
    """Everything a (seed, scheduler) cell produced."""

    seed: int
    scheduler: str
    rows: list[MetricsRow] = field(default_factory=list)
    episodes: list[dict] = field(default_factory=list)
    greedy_makespan: float | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


class MetricsWriter:
    """
    Single appender for the metrics and episode logs of an experiment.
    Cells finish in any order, each is written in one piece.
    """

    def __init__(self, output_dir: Path, save_episodes: bool = True):
        self.metrics_path = output_dir / "metrics.jsonl"
        self.episodes_path = output_dir / "episodes.jsonl" if save_episodes else None

        # Start every run from empty logs
        self.metrics_path.write_text("")
        if self.episodes_path:
            self.episodes_path.write_text("")

    def write_cell(self, cell: CellOutcome):
        with open(self.metrics_path, "a", encoding="utf-8") as f:
            for row in cell.rows:
                f.write(json.dumps(row.to_dict()) + "\n")

        if self.episodes_path and cell.episodes:
            with open(self.episodes_path, "a", encoding="utf-8") as f:
                for record in cell.episodes:
                    f.write(json.dumps(record) + "\n")

        logger.debug(f"Wrote {len(cell.rows)} metrics rows of seed {cell.seed} / {cell.scheduler}")

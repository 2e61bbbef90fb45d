from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Assignment:
    """Placement of one task on one PE. assign_tick <= start_tick < finish_tick."""

    task_id: int
    pe_id: int
    assign_tick: int
    start_tick: int
    finish_tick: int

    @property
    def duration(self) -> int:
        return self.finish_tick - self.start_tick

    def to_dict(self) -> dict[str, int]:
        return {
            "task": self.task_id,
            "pe": self.pe_id,
            "assign": self.assign_tick,
            "start": self.start_tick,
            "finish": self.finish_tick,
        }

    @classmethod
    def from_dict(cls, dictionary: dict) -> Assignment:
        """Deserialize from dict."""
        try:
            return cls(
                task_id=int(dictionary["task"]),
                pe_id=int(dictionary["pe"]),
                assign_tick=int(dictionary["assign"]),
                start_tick=int(dictionary["start"]),
                finish_tick=int(dictionary["finish"]),
            )
        except KeyError as e:
            raise ValueError(f"Error: Missing key in Assignment dictionary: {e}")
        except TypeError as e:
            raise ValueError(f"Error: Invalid type in Assignment dictionary: {e}")


@dataclass
class EpisodeResult:
    """
    Outcome of one simulated episode.
    `makespan` is the latest finish tick of the schedule, the "execution time" of the job.
    """

    makespan: int
    schedule: list[Assignment] = field(default_factory=list)
    decision_count: int = 0
    terminated_by_timeout: bool = False
    max_simulation_length: int = 0
    deadline_misses: int = 0
    pe_count: int = 0

    # Labels, only used for the JSON-lines record
    episode: int = 0
    scheduler: str = ""
    seed: int | None = None

    def assignment(self, task_id: int) -> Assignment | None:
        for a in self.schedule:
            if a.task_id == task_id:
                return a
        return None

    @property
    def end_tick(self) -> int:
        """Last tick the chart of the episode covers: the makespan, or the limit on timeout."""
        if self.terminated_by_timeout and self.max_simulation_length:
            return self.max_simulation_length
        return self.makespan

    def lanes(self) -> dict[int, list[Assignment]]:
        """Assignments grouped by PE and sorted by start tick."""
        lanes: dict[int, list[Assignment]] = {}
        for a in sorted(self.schedule, key=lambda a: (a.pe_id, a.start_tick, a.task_id)):
            lanes.setdefault(a.pe_id, []).append(a)
        return lanes

    def to_dict(self) -> dict:
        """Serialize to the JSON-lines record of an episode."""
        return {
            "episode": self.episode,
            "scheduler": self.scheduler,
            "seed": self.seed,
            "makespan": self.makespan,
            "timeout": self.terminated_by_timeout,
            "decisions": self.decision_count,
            "max_simulation_length": self.max_simulation_length,
            "deadline_misses": self.deadline_misses,
            "pes": self.pe_count,
            "schedule": [a.to_dict() for a in self.schedule],
        }

    @classmethod
    def from_dict(cls, dictionary: dict) -> EpisodeResult:
        """Deserialize from dict."""
        try:
            schedule = [Assignment.from_dict(a) for a in dictionary["schedule"]]
            return cls(
                makespan=int(dictionary["makespan"]),
                schedule=schedule,
                decision_count=int(dictionary["decisions"]),
                terminated_by_timeout=bool(dictionary["timeout"]),
                max_simulation_length=int(dictionary.get("max_simulation_length", 0)),
                deadline_misses=int(dictionary.get("deadline_misses", 0)),
                pe_count=int(dictionary.get("pes", 0)),
                episode=int(dictionary.get("episode", 0)),
                scheduler=str(dictionary.get("scheduler", "")),
                seed=dictionary.get("seed"),
            )
        except KeyError as e:
            raise ValueError(f"Error: Missing key in EpisodeResult dictionary: {e}")
        except TypeError as e:
            raise ValueError(f"Error: Invalid type in EpisodeResult dictionary: {e}")

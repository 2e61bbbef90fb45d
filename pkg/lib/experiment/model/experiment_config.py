from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from config import RESULTS_DIR
from lib.drm.drm_config import DrmConfig
from lib.jobs.randomize import DEFAULT_RANDOMIZE_FRACTION
from lib.scheduling.methods.schedulers import Schedulers
from lib.simulation.engine import DEFAULT_MAX_SIMULATION_LENGTH

logger = logging.getLogger(__name__)

_PATH_LIST_KEYS = ("job_files", "rm_files")
_DRM_PREFIX = "drm."


class ConfigError(ValueError):
    """The experiment config is malformed or describes an invalid experiment."""


def _split_list(value: Any) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    return [value]


def _scalar(value: Any) -> Any:
    """Coerces raw key=value text into ints, floats and booleans."""
    if not isinstance(value, str):
        return value

    coerced = yaml.safe_load(value) if value else None
    if isinstance(coerced, str):
        # yaml reads exponent floats without a dot (1e-3) as text
        try:
            return float(coerced)
        except ValueError:
            return coerced
    return coerced


def _as_kind(key: str, value: Any, kind: type) -> Any:
    value = _scalar(value)

    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"Error: '{key}' must be true or false, got '{value}'")
        return value

    if isinstance(value, bool) or value is None:
        raise ConfigError(f"Error: '{key}' expects a {kind.__name__}, got '{value}'")

    try:
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"Error: '{key}' expects a {kind.__name__}, got '{value}'")


def _parse_seeds(value: Any) -> list[int]:
    seeds = []
    for item in _split_list(value):
        text = str(item).strip()
        if ".." in text:
            low, high = text.split("..", 1)
            try:
                seeds.extend(range(int(low), int(high) + 1))
            except ValueError:
                raise ConfigError(f"Error: Invalid seed range '{text}'")
        else:
            seeds.append(_as_kind("seeds", text, int))
    return seeds


def _parse_key_value(text: str) -> dict[str, str]:
    """Reads `key=value` lines. `#` starts a comment, blank lines are skipped."""
    raw = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue

        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"Error: Line {line_no} is not a key=value pair: '{line}'")
        if key in raw:
            raise ConfigError(f"Error: Duplicate key '{key}' on line {line_no}")

        raw[key] = value.strip()

    return raw


def _flatten(document: dict) -> dict[str, Any]:
    """Turns a nested `drm:` mapping of a yaml config into `drm.` keys."""
    flat = {}
    for key, value in document.items():
        if key == "drm" and isinstance(value, dict):
            for drm_key, drm_value in value.items():
                flat[f"{_DRM_PREFIX}{drm_key}"] = drm_value
        else:
            flat[str(key)] = value
    return flat


def _drm_config(raw: dict[str, Any]) -> DrmConfig:
    defaults = DrmConfig()
    kinds = {f.name: type(getattr(defaults, f.name)) for f in fields(DrmConfig)}

    values = {}
    for key, value in raw.items():
        name = key.removeprefix(_DRM_PREFIX)
        if name not in kinds:
            raise ConfigError(f"Error: Unknown DRM config key '{key}'")

        if kinds[name] is tuple:
            values[name] = tuple(_as_kind(key, v, int) for v in _split_list(value))
        else:
            values[name] = _as_kind(key, value, kinds[name])

    try:
        return DrmConfig(**values)
    except ValueError as e:
        raise ConfigError(str(e))


@dataclass
class ExperimentConfig:
    """
    One experiment: every scheduler runs `episodes` episodes for every seed.
    Job and resource-matrix files are used in order and cycled when the episodes outlast them.
    A single resource matrix (or a single job) is shared by all entries of the other list.
    """

    job_files: list[Path]
    rm_files: list[Path]
    schedulers: list[Schedulers] = field(default_factory=lambda: list(Schedulers))
    episodes: int = 1000
    randomize: bool = False
    randomize_fraction: float = DEFAULT_RANDOMIZE_FRACTION
    seeds: list[int] = field(default_factory=lambda: [0])
    max_simulation_length: int = DEFAULT_MAX_SIMULATION_LENGTH
    drm: DrmConfig = field(default_factory=DrmConfig)

    name: str = "experiment"
    output_dir: Path | None = None
    rolling_window: int = 20
    summary_window: int = 50
    eval_episodes: int = 1
    save_episodes: bool = True
    workers: int = 1

    def __post_init__(self):
        self.job_files = [Path(p) for p in self.job_files]
        self.rm_files = [Path(p) for p in self.rm_files]
        if self.output_dir is None:
            self.output_dir = RESULTS_DIR / self.name
        self.output_dir = Path(self.output_dir)
        self.validate()

    def validate(self):
        """
        Raises:
            ConfigError: If a value is out of range or the file lists do not pair up
        """
        if not self.job_files or not self.rm_files:
            raise ConfigError("Error: job_files and rm_files must not be empty")

        n_jobs, n_rms = len(self.job_files), len(self.rm_files)
        if n_jobs != n_rms and 1 not in (n_jobs, n_rms):
            raise ConfigError(
                f"Error: {n_jobs} job files and {n_rms} resource matrices do not pair up "
                "(use equal lengths or a single file on one side)"
            )

        if not self.schedulers:
            raise ConfigError("Error: At least one scheduler is required")
        if len(set(self.schedulers)) != len(self.schedulers):
            raise ConfigError(f"Error: Duplicate schedulers in {[s.value for s in self.schedulers]}")

        if not self.seeds:
            raise ConfigError("Error: At least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError(f"Error: Duplicate seeds in {self.seeds}")

        if self.episodes < 1:
            raise ConfigError(f"Error: episodes must be >= 1, got {self.episodes}")
        if not 0 <= self.randomize_fraction < 1:
            raise ConfigError(f"Error: randomize_fraction must be in [0, 1), got {self.randomize_fraction}")
        if self.max_simulation_length < 1:
            raise ConfigError(f"Error: max_simulation_length must be >= 1, got {self.max_simulation_length}")
        if self.rolling_window < 1 or self.summary_window < 1:
            raise ConfigError("Error: rolling_window and summary_window must be >= 1")
        if self.eval_episodes < 0:
            raise ConfigError(f"Error: eval_episodes must be >= 0, got {self.eval_episodes}")
        if self.workers < 1:
            raise ConfigError(f"Error: workers must be >= 1, got {self.workers}")

    @property
    def file_pairs(self) -> list[tuple[Path, Path]]:
        """(job file, resource-matrix file) per instance, in cycling order."""
        count = max(len(self.job_files), len(self.rm_files))
        return [
            (self.job_files[i % len(self.job_files)], self.rm_files[i % len(self.rm_files)])
            for i in range(count)
        ]

    def check_files(self):
        missing = [str(p) for p in (*self.job_files, *self.rm_files) if not p.is_file()]
        if missing:
            raise ConfigError(f"Error: Input files not found: {missing}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "job_files": [str(p) for p in self.job_files],
            "rm_files": [str(p) for p in self.rm_files],
            "schedulers": [s.value for s in self.schedulers],
            "episodes": self.episodes,
            "randomize": self.randomize,
            "randomize_fraction": self.randomize_fraction,
            "seeds": list(self.seeds),
            "max_simulation_length": self.max_simulation_length,
            "drm": self.drm.to_dict(),
            "output_dir": str(self.output_dir),
            "rolling_window": self.rolling_window,
            "summary_window": self.summary_window,
            "eval_episodes": self.eval_episodes,
            "save_episodes": self.save_episodes,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, dictionary: dict[str, Any], base_dir: Path | None = None) -> ExperimentConfig:
        """
        Builds a config from raw values, either text from a key=value file or typed yaml values.

        Args:
            dictionary: Flat mapping, DRM keys may be prefixed with `drm.` or nested under `drm`
            base_dir: Directory that relative file paths resolve against (Default: cwd)

        Raises:
            ConfigError: For unknown keys, values of the wrong type or an invalid experiment
        """
        raw = _flatten(dictionary)
        base_dir = base_dir or Path.cwd()

        def resolve(p: Any) -> Path:
            path = Path(str(p)).expanduser()
            return path if path.is_absolute() else base_dir / path

        drm_raw = {k: v for k, v in raw.items() if k.startswith(_DRM_PREFIX)}
        kwargs: dict[str, Any] = {"drm": _drm_config(drm_raw)}

        for key, value in raw.items():
            if key.startswith(_DRM_PREFIX):
                continue

            match key:
                case "job_files" | "rm_files":
                    kwargs[key] = [resolve(p) for p in _split_list(value)]
                case "schedulers":
                    try:
                        kwargs[key] = [Schedulers.get_scheduler_type(str(s)) for s in _split_list(value)]
                    except ValueError:
                        raise ConfigError(
                            f"Error: Unknown scheduler in '{value}', available: {[s.value for s in Schedulers]}"
                        )
                case "seeds":
                    kwargs[key] = _parse_seeds(value)
                case "output_dir":
                    kwargs[key] = resolve(value)
                case "name":
                    kwargs[key] = str(value)
                case "randomize" | "save_episodes":
                    kwargs[key] = _as_kind(key, value, bool)
                case "randomize_fraction":
                    kwargs[key] = _as_kind(key, value, float)
                case (
                    "episodes" | "max_simulation_length" | "rolling_window"
                    | "summary_window" | "eval_episodes" | "workers"
                ):
                    kwargs[key] = _as_kind(key, value, int)
                case _:
                    raise ConfigError(f"Error: Unknown config key '{key}'")

        for key in _PATH_LIST_KEYS:
            if key not in kwargs:
                raise ConfigError(f"Error: Missing required config key '{key}'")

        return cls(**kwargs)

    @classmethod
    def from_file(cls, file_path: Path) -> ExperimentConfig:
        """
        Loads a flat key=value config, or a yaml file with the same keys.
        The experiment is named after the file unless it sets `name`.

        Raises:
            FileNotFoundError: If there is no file at the path
            ConfigError: If the config is invalid or names missing input files
        """
        if not file_path.is_file():
            raise FileNotFoundError(f"Error: Config file not found: {file_path}")

        with open(file_path, "r", encoding="utf-8") as f:
            text = f.read()

        if file_path.suffix in (".yaml", ".yml"):
            try:
                document = yaml.safe_load(text) or {}
            except yaml.YAMLError as e:
                raise ConfigError(f"Error: Invalid yaml in {file_path}: {e}")
            if not isinstance(document, dict):
                raise ConfigError(f"Error: Expected a mapping at the top of {file_path}")
        else:
            document = _parse_key_value(text)

        document.setdefault("name", file_path.stem)
        cfg = cls.from_dict(document, base_dir=file_path.parent.resolve())
        cfg.check_files()

        logger.info(
            f"Loaded experiment '{cfg.name}': {len(cfg.seeds)} seeds x "
            f"{[s.value for s in cfg.schedulers]} x {cfg.episodes} episodes"
        )
        return cfg

import json
from pathlib import Path

from lib.jobs.model.job import JobSpec
from lib.jobs.model.resource_matrix import ResourceMatrix
from lib.jobs.model.schedule import EpisodeResult
from lib.jobs.spec_format import parse_job, parse_resource_matrix


def _read_text(file_path: Path, what: str) -> str:
    if not (file_path.exists() and file_path.is_file()):
        raise FileNotFoundError(f"Error: {what} not found: {file_path}")

    with open(file_path, "r", encoding="utf-8") as f:
        return f.read()


def open_job(file_path: Path) -> JobSpec:
    """
    Opens a job file and parses it into a JobSpec.

    Raises:
        FileNotFoundError: If there is no file at the path
        ParseError: If the file is malformed
    """
    return parse_job(_read_text(file_path, "Job file"))


def open_resource_matrix(file_path: Path, job: JobSpec) -> ResourceMatrix:
    """
    Opens a resource_matrix file and parses it against its job.

    Raises:
        FileNotFoundError: If there is no file at the path
        ParseError: If the file is malformed or does not cover the job
    """
    return parse_resource_matrix(_read_text(file_path, "Resource matrix"), job)


def open_episode_results(file_path: Path) -> list[EpisodeResult]:
    """
    Opens episode records. Accepts a JSON-lines file with one record per line
    or a JSON file holding a single record or a list of records.

    Raises:
        FileNotFoundError: If there is no file at the path
        ValueError: If a record is malformed
    """
    text = _read_text(file_path, "Episode results")

    if file_path.suffix == ".jsonl":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
    else:
        document = json.loads(text)
        records = document if isinstance(document, list) else [document]

    if not all(isinstance(r, dict) for r in records):
        raise ValueError(f"Error: Not a valid episode record at {file_path}")

    return [EpisodeResult.from_dict(r) for r in records]

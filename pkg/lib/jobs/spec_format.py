"""
Reader and writer for the `job` and `resource_matrix` text files.

Job file::

    job_name <name>
    add_new_tasks <N>
    <task_name> <task_id> <pred_id>* <HEAD|TAIL|BODY>     (N structure lines)
    <task_name> <earliest_start_ms> <deadline_ms>          (N timing lines)

Resource matrix file, one block per processing element::

    add_new_resource <resource_id> <M>
    <task_name> <performance_ms>                           (M lines)

`#` starts a comment, blank lines are ignored, tokens are separated by whitespace.
"""

from __future__ import annotations

import logging
from enum import Enum

from lib.jobs.model.job import JobSpec, JobViolation, TaskFlag, TaskSpec, ViolationKind, validate_job
from lib.jobs.model.resource_matrix import ResourceEntry, ResourceMatrix

logger = logging.getLogger(__name__)

JOB_NAME = "job_name"
ADD_TASKS = "add_new_tasks"
ADD_RESOURCE = "add_new_resource"

_FLAG_TOKENS = {f.value for f in TaskFlag}


class ParseErrorKind(Enum):
    SYNTAX = "syntax"
    DUPLICATE = "duplicate"
    MISSING_FIELD = "missing-field"
    RANGE = "range"
    INCONSISTENT_COUNT = "inconsistent-count"
    INVALID = "invalid"  # Parsed fine, but the job breaks a structural invariant


class ParseError(ValueError):
    """Raised for malformed job or resource_matrix files."""

    def __init__(
        self,
        line: int,
        kind: ParseErrorKind,
        message: str,
        violations: list[JobViolation] | None = None,
    ):
        self.line = max(1, line)
        self.kind = kind
        self.message = message
        self.violations = violations or []
        super().__init__(f"Error: line {self.line} [{kind.value}]: {message}")


_VIOLATION_KINDS = {
    ViolationKind.DUPLICATE_ID: ParseErrorKind.DUPLICATE,
    ViolationKind.DUPLICATE_NAME: ParseErrorKind.DUPLICATE,
    ViolationKind.ID_RANGE: ParseErrorKind.RANGE,
    ViolationKind.DANGLING_PREDECESSOR: ParseErrorKind.RANGE,
    ViolationKind.TIMING: ParseErrorKind.RANGE,
}


def _lines(text: str) -> list[tuple[int, list[str]]]:
    """Tokenized non-empty lines with their 1-based line numbers. CRLF is accepted."""
    result = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            result.append((number, content.split()))
    return result


def _int(token: str, line: int, what: str, minimum: int = 0) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(line, ParseErrorKind.SYNTAX, f"{what} must be an integer, got '{token}'")

    if value < minimum:
        raise ParseError(line, ParseErrorKind.RANGE, f"{what} must be >= {minimum}, got {value}")

    return value


def _directive(entry: tuple[int, list[str]] | None, keyword: str, arg_count: int) -> list[str]:
    if entry is None:
        raise ParseError(1, ParseErrorKind.MISSING_FIELD, f"Missing '{keyword}' directive")

    line, tokens = entry
    if tokens[0] != keyword:
        raise ParseError(line, ParseErrorKind.SYNTAX, f"Expected '{keyword}', got '{tokens[0]}'")
    if len(tokens) != arg_count + 1:
        raise ParseError(
            line, ParseErrorKind.SYNTAX, f"'{keyword}' takes {arg_count} argument(s), got {len(tokens) - 1}"
        )

    return tokens[1:]


def parse_job(text: str) -> JobSpec:
    """
    Parses and validates the content of a job file.

    Args:
        text: Content of the job file

    Returns:
        The validated JobSpec, tasks ordered by ID

    Raises:
        ParseError: If the file is malformed or describes an invalid job
    """
    lines = _lines(text)

    (name,) = _directive(lines[0] if lines else None, JOB_NAME, 1)
    (count_token,) = _directive(lines[1] if len(lines) > 1 else None, ADD_TASKS, 1)
    header_line = lines[1][0]
    task_count = _int(count_token, header_line, "number of tasks")

    body = lines[2:]

    # Structure lines always end with a flag token, timing lines never do
    structure = []
    for line, tokens in body:
        last = tokens[-1]
        if last not in _FLAG_TOKENS:
            if len(structure) < task_count and not last.lstrip("-").isdigit():
                raise ParseError(
                    line, ParseErrorKind.SYNTAX, f"Unknown task flag '{last}', expected one of {sorted(_FLAG_TOKENS)}"
                )
            break
        structure.append((line, tokens))
    timing = body[len(structure):]

    if len(structure) != task_count:
        raise ParseError(
            header_line,
            ParseErrorKind.INCONSISTENT_COUNT,
            f"Expected {task_count} task structure lines, found {len(structure)}",
        )
    if len(timing) != task_count:
        raise ParseError(
            header_line,
            ParseErrorKind.INCONSISTENT_COUNT,
            f"Expected {task_count} task timing lines, found {len(timing)}",
        )

    parsed: dict[str, dict] = {}
    used_ids: dict[int, str] = {}

    for line, tokens in structure:
        if len(tokens) < 3:
            raise ParseError(line, ParseErrorKind.MISSING_FIELD, "Structure line needs <name> <id> [preds...] <flag>")

        task_name, id_token, *pred_tokens, flag_token = tokens
        task_id = _int(id_token, line, "task ID")
        preds = [_int(p, line, "predecessor ID") for p in pred_tokens]

        if task_name in parsed:
            raise ParseError(line, ParseErrorKind.DUPLICATE, f"Duplicate task name '{task_name}'")
        if task_id in used_ids:
            raise ParseError(
                line, ParseErrorKind.DUPLICATE, f"Task ID {task_id} already used by '{used_ids[task_id]}'"
            )
        if len(set(preds)) != len(preds):
            raise ParseError(line, ParseErrorKind.DUPLICATE, f"Repeated predecessor in {preds}")

        used_ids[task_id] = task_name
        parsed[task_name] = {
            "line": line,
            "id": task_id,
            "preds": frozenset(preds),
            "flag": TaskFlag.get_flag(flag_token),
        }

    timed: set[str] = set()
    for line, tokens in timing:
        if len(tokens) != 3:
            raise ParseError(
                line, ParseErrorKind.MISSING_FIELD, "Timing line needs <name> <earliest_start> <deadline>"
            )

        task_name, start_token, deadline_token = tokens
        if task_name not in parsed:
            raise ParseError(line, ParseErrorKind.MISSING_FIELD, f"Unknown task '{task_name}' in timing section")
        if task_name in timed:
            raise ParseError(line, ParseErrorKind.DUPLICATE, f"Duplicate timing line for '{task_name}'")

        timed.add(task_name)
        parsed[task_name]["earliest_start"] = _int(start_token, line, "earliest start")
        parsed[task_name]["deadline"] = _int(deadline_token, line, "deadline")

    # A task is a sink if nobody lists it as predecessor
    referenced = {p for info in parsed.values() for p in info["preds"]}

    tasks = []
    for task_name, info in parsed.items():
        flag = info["flag"]
        tasks.append(
            TaskSpec(
                name=task_name,
                id=info["id"],
                predecessors=info["preds"],
                is_head=flag == TaskFlag.HEAD,
                is_tail=flag == TaskFlag.TAIL or (flag == TaskFlag.HEAD and info["id"] not in referenced),
                earliest_start=info["earliest_start"],
                deadline=info["deadline"],
            )
        )

    job = JobSpec(name=name, tasks=tuple(sorted(tasks, key=lambda t: t.id)))

    violations = validate_job(job)
    if violations:
        first = violations[0]
        line = header_line
        if first.task_id is not None and first.task_id in used_ids:
            line = parsed[used_ids[first.task_id]]["line"]

        raise ParseError(
            line,
            _VIOLATION_KINDS.get(first.kind, ParseErrorKind.INVALID),
            "; ".join(str(v) for v in violations),
            violations,
        )

    logger.debug(f"Parsed job '{name}' with {job.task_count} tasks.")
    return job


def parse_resource_matrix(text: str, job: JobSpec) -> ResourceMatrix:
    """
    Parses the content of a resource_matrix file against the job it belongs to.
    Every task name of the job must have an execution time on every resource.
    Additional task names are kept.

    Args:
        text: Content of the resource_matrix file
        job: The (valid) job the matrix belongs to

    Returns:
        ResourceMatrix, resources ordered by ID

    Raises:
        ParseError: If the file is malformed, incomplete or has non-positive times
    """
    lines = _lines(text)

    blocks: list[tuple[int, int, dict[str, int]]] = []
    idx = 0
    while idx < len(lines):
        line, tokens = lines[idx]
        resource_token, count_token = _directive((line, tokens), ADD_RESOURCE, 2)
        resource_id = _int(resource_token, line, "resource ID")
        count = _int(count_token, line, "number of tasks")

        if any(resource_id == b[0] for b in blocks):
            raise ParseError(line, ParseErrorKind.DUPLICATE, f"Duplicate resource ID {resource_id}")

        perf: dict[str, int] = {}
        entries = lines[idx + 1: idx + 1 + count]
        if len(entries) < count or any(t[0] == ADD_RESOURCE for _, t in entries):
            found = len([e for e in entries if e[1][0] != ADD_RESOURCE])
            raise ParseError(
                line,
                ParseErrorKind.INCONSISTENT_COUNT,
                f"Resource {resource_id} announces {count} tasks, found fewer ({found})",
            )

        for entry_line, entry_tokens in entries:
            if len(entry_tokens) != 2:
                raise ParseError(entry_line, ParseErrorKind.SYNTAX, "Expected <task_name> <performance>")

            task_name, perf_token = entry_tokens
            if task_name in perf:
                raise ParseError(
                    entry_line, ParseErrorKind.DUPLICATE, f"Duplicate task '{task_name}' for resource {resource_id}"
                )
            perf[task_name] = _int(perf_token, entry_line, "performance", minimum=1)

        blocks.append((resource_id, line, perf))
        idx += 1 + count

        # Lines left over before the next block belong to an understated count
        if idx < len(lines) and lines[idx][1][0] != ADD_RESOURCE:
            raise ParseError(
                lines[idx][0],
                ParseErrorKind.INCONSISTENT_COUNT,
                f"Resource {resource_id} announces {count} tasks, found more",
            )

    if not blocks:
        raise ParseError(1, ParseErrorKind.MISSING_FIELD, "No resources defined")

    blocks.sort(key=lambda b: b[0])
    for expected, (resource_id, line, perf) in enumerate(blocks):
        if resource_id != expected:
            raise ParseError(
                line, ParseErrorKind.RANGE, f"Resource IDs must be 0..{len(blocks) - 1}, got {resource_id}"
            )

        missing = [t.name for t in job.tasks if t.name not in perf]
        if missing:
            raise ParseError(
                line, ParseErrorKind.MISSING_FIELD, f"Resource {resource_id} has no execution time for {missing}"
            )

    return ResourceMatrix(resources=tuple(ResourceEntry(rid, perf) for rid, _, perf in blocks))


def write_job(job: JobSpec) -> str:
    """Serializes a job in canonical form: single spaces, tasks in ID order, LF endings."""
    tasks = sorted(job.tasks, key=lambda t: t.id)

    out = [f"{JOB_NAME} {job.name}", f"{ADD_TASKS} {len(tasks)}"]
    for t in tasks:
        tokens = [t.name, str(t.id), *[str(p) for p in sorted(t.predecessors)], t.flag.value]
        out.append(" ".join(tokens))
    for t in tasks:
        out.append(f"{t.name} {t.earliest_start} {t.deadline}")

    return "\n".join(out) + "\n"


def write_resource_matrix(rm: ResourceMatrix, job: JobSpec | None = None) -> str:
    """
    Serializes a resource matrix in canonical form, resources in ID order.
    Task lines follow the task IDs of job when given, sorted task names otherwise,
    never the order the matrix was built in.
    """
    if job is not None:
        known = {t.name for t in job.tasks}
        names = [t.name for t in sorted(job.tasks, key=lambda t: t.id)]
        names += [n for n in rm.task_names if n not in known]
    else:
        names = rm.task_names

    out = []
    for r in sorted(rm.resources, key=lambda r: r.resource_id):
        out.append(f"{ADD_RESOURCE} {r.resource_id} {len(r.perf)}")
        out.extend(f"{name} {r.perf[name]}" for name in names if name in r.perf)

    return "\n".join(out) + "\n"

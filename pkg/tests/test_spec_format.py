import numpy as np
import pytest

from config import SPECS_DIR
from lib.jobs.generate import generate_sample_specs
from lib.jobs.randomize import randomize_resource_matrix
from lib.jobs.model.resource_matrix import ResourceEntry, ResourceMatrix
from lib.jobs.spec_format import (
    ParseError,
    ParseErrorKind,
    parse_job,
    parse_resource_matrix,
    write_job,
    write_resource_matrix,
)

THREE_TASKS = """job_name J
add_new_tasks 3
T0 0 HEAD
T1 1 0 BODY
T2 2 0 1 TAIL
T0 0 10
T1 0 10
T2 2 10
"""


def test_minimal_job():
    job = parse_job("job_name J\nadd_new_tasks 1\nT0 0 HEAD\nT0 0 10")

    assert job.name == "J"
    assert job.task_count == 1
    task = job.task(0)
    assert task.is_head and task.is_tail
    assert task.deadline == 10


def test_predecessors_and_flags():
    job = parse_job(THREE_TASKS)
    task = job.task(2)

    assert task.predecessors == frozenset({0, 1})
    assert task.is_tail and not task.is_head
    assert task.earliest_start == 2
    assert not job.task(1).is_head and not job.task(1).is_tail


def test_comments_blank_lines_and_crlf():
    text = "# sample\r\n\r\n" + THREE_TASKS.replace("\n", "  # note\r\n")

    assert parse_job(text) == parse_job(THREE_TASKS)


@pytest.mark.parametrize(
    "text, kind",
    [
        ("job_name J\nadd_new_tasks 2\nT0 0 HEAD\nT0 0 10\n", ParseErrorKind.INCONSISTENT_COUNT),
        ("job_name J\nadd_new_tasks 2\nT0 0 HEAD\nT0 1 0 TAIL\nT0 0 10\nT0 0 10\n", ParseErrorKind.DUPLICATE),
        ("job_name J\nadd_new_tasks 2\nT0 0 HEAD\nT1 0 0 TAIL\nT0 0 10\nT1 0 10\n", ParseErrorKind.DUPLICATE),
        ("job_name J\nadd_new_tasks 1\nT0 0 HEAD\nT9 0 10\n", ParseErrorKind.MISSING_FIELD),
        ("job_name J\nadd_new_tasks x\n", ParseErrorKind.SYNTAX),
        ("jobname J\nadd_new_tasks 1\nT0 0 HEAD\nT0 0 10\n", ParseErrorKind.SYNTAX),
        ("job_name J\nadd_new_tasks 2\nT0 0 HEAD\nT1 1 7 TAIL\nT0 0 10\nT1 0 10\n", ParseErrorKind.RANGE),
        ("job_name J\nadd_new_tasks 1\nT0 0 HEAD\nT0 20 10\n", ParseErrorKind.RANGE),
        ("", ParseErrorKind.MISSING_FIELD),
    ],
)
def test_job_errors(text, kind):
    with pytest.raises(ParseError) as info:
        parse_job(text)

    assert info.value.kind == kind
    assert info.value.line >= 1


def test_unknown_flag_is_reported_at_its_line():
    text = THREE_TASKS.replace("T2 2 0 1 TAIL", "T2 2 0 1 TIAL")

    with pytest.raises(ParseError) as info:
        parse_job(text)

    assert info.value.kind == ParseErrorKind.SYNTAX
    assert info.value.line == 5
    assert "TIAL" in str(info.value)


def test_cycle_is_rejected():
    text = "job_name J\nadd_new_tasks 3\nT0 0 HEAD\nT1 1 0 2 BODY\nT2 2 1 TAIL\nT0 0 9\nT1 0 9\nT2 0 9\n"

    with pytest.raises(ParseError) as info:
        parse_job(text)

    assert any(v.kind.value == "cycle" for v in info.value.violations)


def test_single_resource():
    job = parse_job("job_name J\nadd_new_tasks 1\nT0 0 HEAD\nT0 0 10")
    rm = parse_resource_matrix("add_new_resource 0 1\nT0 2", job)

    assert rm.pe_count == 1
    assert rm.exec_time("T0", 0) == 2


def test_two_resources():
    job = parse_job(THREE_TASKS)
    rm = parse_resource_matrix(
        "add_new_resource 1 3\nT0 4\nT1 5\nT2 6\nadd_new_resource 0 3\nT0 1\nT1 2\nT2 3\n", job
    )

    assert rm.pe_count == 2
    assert [r.resource_id for r in rm.resources] == [0, 1]
    np.testing.assert_array_equal(rm.as_array(job), [[1, 4], [2, 5], [3, 6]])


@pytest.mark.parametrize(
    "text, kind",
    [
        ("add_new_resource 0 2\nT0 2\nT1 3\n", ParseErrorKind.MISSING_FIELD),
        ("add_new_resource 0 3\nT0 2\nT1 3\nT2 4\nadd_new_resource 0 3\nT0 2\nT1 3\nT2 4\n", ParseErrorKind.DUPLICATE),
        ("add_new_resource 0 3\nT0 0\nT1 3\nT2 4\n", ParseErrorKind.RANGE),
        ("add_new_resource 0 3\nT0 -2\nT1 3\nT2 4\n", ParseErrorKind.RANGE),
        ("add_new_resource 1 3\nT0 2\nT1 3\nT2 4\n", ParseErrorKind.RANGE),
        ("add_new_resource 0 4\nT0 2\nT1 3\nT2 4\n", ParseErrorKind.INCONSISTENT_COUNT),
        ("add_new_resource 0 2\nT0 2\nT1 3\nT2 4\n", ParseErrorKind.INCONSISTENT_COUNT),
        ("", ParseErrorKind.MISSING_FIELD),
    ],
)
def test_resource_matrix_errors(text, kind):
    with pytest.raises(ParseError) as info:
        parse_resource_matrix(text, parse_job(THREE_TASKS))

    assert info.value.kind == kind


def test_canonical_sample_round_trip():
    with open(SPECS_DIR / "job_sample.txt") as f:
        job = parse_job(f.read())
    with open(SPECS_DIR / "rm_sample.txt") as f:
        rm = parse_resource_matrix(f.read(), job)

    assert job.task_count == 10 and rm.pe_count == 3
    assert parse_job(write_job(job)) == job
    assert parse_resource_matrix(write_resource_matrix(rm), job) == rm


def test_randomized_round_trip(sample_specs):
    job, rm = sample_specs
    jittered = randomize_resource_matrix(rm, 0.3, np.random.default_rng(1))

    assert parse_resource_matrix(write_resource_matrix(jittered), job) == jittered


def test_generated_specs_round_trip_byte_identical():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        job, rm = generate_sample_specs(int(rng.integers(1, 16)), int(rng.integers(1, 5)), rng)

        job_text = write_job(job)
        rm_text = write_resource_matrix(rm)
        parsed_job = parse_job(job_text)

        assert write_job(parsed_job) == job_text
        assert write_resource_matrix(parse_resource_matrix(rm_text, parsed_job)) == rm_text
        assert job_text.endswith("\n") and "\r" not in job_text


def test_resource_matrix_lines_follow_task_ids():
    job = parse_job(THREE_TASKS)
    shuffled = ResourceMatrix(
        resources=(ResourceEntry(1, {"T2": 6, "T0": 4, "T1": 5}), ResourceEntry(0, {"T1": 2, "T2": 3, "T0": 1}))
    )

    text = write_resource_matrix(shuffled, job)

    assert text == "add_new_resource 0 3\nT0 1\nT1 2\nT2 3\nadd_new_resource 1 3\nT0 4\nT1 5\nT2 6\n"
    assert parse_resource_matrix(text, job) == parse_resource_matrix(write_resource_matrix(shuffled), job)


def test_resource_matrix_output_ignores_build_order():
    forward = ResourceMatrix(resources=(ResourceEntry(0, {"A": 1, "B": 2}),))
    backward = ResourceMatrix(resources=(ResourceEntry(0, {"B": 2, "A": 1}),))

    assert write_resource_matrix(forward) == write_resource_matrix(backward) == "add_new_resource 0 2\nA 1\nB 2\n"

import pytest

from helpers import make_job
from lib.jobs.model.job import CycleError, JobSpec, TaskSpec, ViolationKind, topological_order, validate_job


def _kinds(job: JobSpec) -> set[ViolationKind]:
    return {v.kind for v in validate_job(job)}


def test_valid_chain():
    job = make_job({0: set(), 1: {0}, 2: {1}})

    assert job.task(0).is_head and job.task(2).is_tail
    assert validate_job(job) == []


def test_dangling_predecessor():
    job = make_job({0: set(), 1: {0}, 2: {1}})
    tasks = list(job.tasks)
    tasks[1] = TaskSpec("T1", 1, frozenset({0, 7}), is_head=False, is_tail=False)
    broken = JobSpec("broken", tuple(tasks))

    violations = validate_job(broken)

    assert [str(v) for v in violations] == ["dangling-predecessor(1,7)"]


def test_two_cycle():
    job = JobSpec(
        "cycle",
        (
            TaskSpec("T0", 0, frozenset({1}), is_tail=True),
            TaskSpec("T1", 1, frozenset({0}), is_tail=True),
        ),
    )

    assert ViolationKind.CYCLE in _kinds(job)
    with pytest.raises(CycleError) as info:
        topological_order(job)
    assert info.value.task_id in (0, 1)


@pytest.mark.parametrize(
    "tasks, kind",
    [
        ((TaskSpec("A", 0, is_head=True, is_tail=True), TaskSpec("B", 0, is_head=True, is_tail=True)),
         ViolationKind.DUPLICATE_ID),
        ((TaskSpec("A", 0, is_head=True, is_tail=True), TaskSpec("A", 1, is_head=True, is_tail=True)),
         ViolationKind.DUPLICATE_NAME),
        ((TaskSpec("A", 1, is_head=True, is_tail=True),), ViolationKind.ID_RANGE),
        ((TaskSpec("A", 0, frozenset({0}), is_tail=True),), ViolationKind.SELF_PREDECESSOR),
        ((TaskSpec("A", 0, is_head=False, is_tail=True),), ViolationKind.HEAD_FLAG),
        ((TaskSpec("A", 0, is_head=True, is_tail=False),), ViolationKind.TAIL_FLAG),
        ((TaskSpec("A", 0, is_head=True, is_tail=True, earliest_start=5, deadline=3),), ViolationKind.TIMING),
    ],
)
def test_violation_kinds(tasks, kind):
    assert kind in _kinds(JobSpec("bad", tasks))


def test_no_head_and_no_tail():
    job = JobSpec(
        "ring",
        (
            TaskSpec("T0", 0, frozenset({1})),
            TaskSpec("T1", 1, frozenset({0})),
        ),
    )

    assert {ViolationKind.NO_HEAD, ViolationKind.NO_TAIL} <= _kinds(job)


def test_topological_order_chain():
    assert topological_order(make_job({0: set(), 1: {0}, 2: {1}})) == [0, 1, 2]


def test_topological_order_diamond():
    assert topological_order(make_job({0: set(), 1: {0}, 2: {0}, 3: {1, 2}})) == [0, 1, 2, 3]


def test_topological_order_ties_by_id():
    # Both 2 and 0 are heads, 1 depends on 2
    job = make_job({0: set(), 1: {2}, 2: set()})

    assert topological_order(job) == [0, 2, 1]


def test_valid_job_has_order(sample_specs):
    job, _ = sample_specs
    order = topological_order(job)

    assert validate_job(job) == []
    assert sorted(order) == list(range(job.task_count))
    position = {t: i for i, t in enumerate(order)}
    for task in job.tasks:
        assert all(position[p] < position[task.id] for p in task.predecessors)


def test_single_task_is_head_and_tail():
    job = make_job({0: set()})

    assert job.task(0).is_head and job.task(0).is_tail
    assert validate_job(job) == []

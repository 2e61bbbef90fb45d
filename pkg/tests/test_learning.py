"""
Training-quality checks on the bundled 10-task, 3-PE sample.
Each experiment runs 1000 episodes for 5 seeds, run them with `pytest -m slow`.
"""

import pytest

from config import SPECS_DIR
from lib.experiment.model.experiment_config import ExperimentConfig
from lib.experiment.runner import ExperimentReport, run_experiment

SEEDS = [0, 1, 2, 3, 4]
HEURISTICS = ("met", "eft", "etf")

pytestmark = pytest.mark.slow


def _run(tmp_path_factory, name: str, randomize: bool) -> ExperimentReport:
    cfg = ExperimentConfig(
        job_files=[SPECS_DIR / "job_sample.txt"],
        rm_files=[SPECS_DIR / "rm_sample.txt"],
        episodes=1000,
        seeds=SEEDS,
        randomize=randomize,
        randomize_fraction=0.3,
        name=name,
        output_dir=tmp_path_factory.mktemp(name),
        save_episodes=False,
        workers=4,
    )
    report = run_experiment(cfg)
    assert report.failed == []
    return report


def _makespans(report: ExperimentReport, seed: int, scheduler: str) -> list[int]:
    rows = sorted((r for r in report.rows if r.seed == seed and r.scheduler == scheduler), key=lambda r: r.episode)
    return [r.makespan_ms for r in rows]


def _mean(values: list[int]) -> float:
    return sum(values) / len(values)


@pytest.fixture(scope="module")
def fixed_report(tmp_path_factory) -> ExperimentReport:
    return _run(tmp_path_factory, "fixed", randomize=False)


@pytest.fixture(scope="module")
def randomized_report(tmp_path_factory) -> ExperimentReport:
    return _run(tmp_path_factory, "randomized", randomize=True)


def test_metrics_are_complete(fixed_report):
    keys = [(r.seed, r.scheduler, r.episode) for r in fixed_report.rows]

    assert len(keys) == 1000 * 4 * len(SEEDS)
    assert len(set(keys)) == len(keys)


def test_drm_improves_during_training(fixed_report):
    improved = 0
    for seed in SEEDS:
        makespans = _makespans(fixed_report, seed, "drm")
        improved += _mean(makespans[-50:]) < _mean(makespans[:50])

    assert improved >= 4


def test_heuristics_are_constant_and_greedy_drm_is_close(fixed_report):
    summary = fixed_report.summary
    close = 0

    for seed in SEEDS:
        best = min(set(_makespans(fixed_report, seed, h)).pop() for h in HEURISTICS)
        for h in HEURISTICS:
            assert len(set(_makespans(fixed_report, seed, h))) == 1

        cell = summary[(summary["seed"] == str(seed)) & (summary["scheduler"] == "drm")].iloc[0]
        close += cell["greedy_makespan"] <= 1.15 * best

    assert close >= 3


def test_drm_is_robust_to_randomized_matrices(randomized_report):
    good = 0
    for seed in SEEDS:
        drm = _mean(_makespans(randomized_report, seed, "drm")[-100:])
        beaten = sum(drm <= _mean(_makespans(randomized_report, seed, h)[-100:]) for h in HEURISTICS)
        good += beaten >= 2

    assert good >= 3

import numpy as np

from helpers import ForcedScheduler, brute_force_optimum, make_job, make_rm, oracle_makespan, random_instance
from lib.drm.drm_config import DrmConfig
from lib.scheduling.methods.schedulers import Schedulers
from lib.scheduling.scripts.get_scheduler import get_scheduler
from lib.simulation.engine import run_episode


def test_oracle_on_chain(chain_job, chain_rm):
    assert oracle_makespan(chain_job, chain_rm, (0, 1, 1)) == 6
    assert oracle_makespan(chain_job, chain_rm, (0, 1, 0)) == 6
    assert oracle_makespan(chain_job, chain_rm, (0, 0, 0)) == 9


def test_oracle_respects_queue_order():
    # Both tasks wait on PE0, T1 only becomes eligible at tick 1
    job = make_job({0: set(), 1: set()}, earliest={1: 1})
    rm = make_rm([{"T0": 3, "T1": 1}])

    assert oracle_makespan(job, rm, (0, 0)) == 4


def test_engine_matches_brute_force():
    rng = np.random.default_rng(1234)

    for i in range(200):
        job, rm = random_instance(rng, max_tasks=6, max_pes=3, max_exec=6, max_release=3 if i % 2 else 0)
        optimum, per_vector = brute_force_optimum(job, rm)

        for vector, expected in per_vector.items():
            result = run_episode(job, rm, ForcedScheduler(vector))
            assert result.makespan == expected, f"instance {i}, assignment {vector}"

        for scheduler_type in Schedulers:
            scheduler = get_scheduler(
                scheduler_type, job=job, rm=rm, drm_config=DrmConfig(seed=i, hidden_sizes=(8,))
            )
            assert run_episode(job, rm, scheduler).makespan >= optimum

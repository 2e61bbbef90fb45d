import numpy as np
import pytest

from helpers import make_job, make_rm
from lib.jobs.generate import generate_sample_specs
from lib.jobs.spec_format import write_job, write_resource_matrix


@pytest.fixture
def chain_job():
    """A -> {B, C}"""
    return make_job({0: set(), 1: {0}, 2: {0}}, name="chain", names=["A", "B", "C"], deadline=100)


@pytest.fixture
def chain_rm():
    return make_rm([{"A": 2, "B": 3, "C": 4}, {"A": 3, "B": 2, "C": 2}])


@pytest.fixture
def sample_specs():
    return generate_sample_specs(10, 3, np.random.default_rng(7))


@pytest.fixture
def spec_files(tmp_path, sample_specs):
    job, rm = sample_specs
    job_path = tmp_path / "job_sample.txt"
    rm_path = tmp_path / "rm_sample.txt"
    job_path.write_text(write_job(job))
    rm_path.write_text(write_resource_matrix(rm))
    return job_path, rm_path

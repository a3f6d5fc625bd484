import pytest
from hypothesis import HealthCheck, settings

from milnor import corpus

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def cx():
    return corpus.complexes()


@pytest.fixture(scope="session")
def grp():
    return corpus.groups()

import pytest

from groupoid_ga.census import run_census


@pytest.fixture(scope="session")
def gen3_reps():
    """Canonical representatives of the order-3 genetic census."""
    return [rep for rep, _ in run_census(3).classes]

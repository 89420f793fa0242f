"""Shared helpers for the test suite."""

import pytest

from rbpebble import ProblemInstance, validate_strategy


def replay(instance: ProblemInstance, dag, strategy):
    """Validate a strategy and fail loudly with the first violation."""
    report = validate_strategy(instance, dag, strategy)
    assert report.ok, f"invalid strategy: {report.first_violation}"
    return report.cost


@pytest.fixture
def inst_1p():
    return ProblemInstance(k=1, r=3, g=1)


@pytest.fixture
def inst_2p():
    return ProblemInstance(k=2, r=3, g=1)

import os

import pytest
from hypothesis import HealthCheck, settings

from blowup_embed.generators import cluster_graph_from_spec
from blowup_embed.graph import ClusterGraph

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def triangle() -> ClusterGraph:
    return cluster_graph_from_spec("triangle")


@pytest.fixture
def single_edge() -> ClusterGraph:
    return cluster_graph_from_spec("edge")


ACCEPTANCE_LINES: list = []


@pytest.fixture
def verdict():
    """Record one pass/fail line for the acceptance summary."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

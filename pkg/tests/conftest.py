import hypothesis
import numpy as np
import pytest

from uavfbl.model import ScenarioParams, reference_scenario

hypothesis.settings.register_profile("ci", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("ci")


@pytest.fixture
def base():
    return reference_scenario()


@pytest.fixture
def symmetric():
    # equal powers, feasible interval centred on D/2
    return ScenarioParams(D=200.0, H=120.0, d1=50.0, d2=150.0, L=100, M=100,
                          P1=2.0, P2=2.0)


def random_scenarios(n, seed=0):
    """Draws from P1, P2 in [0.5, 5] W, H in [100, 150] m, L in [50, 200], M in [60, 200]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        out.append(ScenarioParams(
            P1=rng.uniform(0.5, 5.0), P2=rng.uniform(0.5, 5.0),
            H=rng.uniform(100.0, 150.0),
            L=int(rng.integers(50, 201)), M=int(rng.integers(60, 201)),
        ))
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import pytest

from stabgain.scoring import Observation
from stabgain.synth import generate_dataset, paper_spec


@pytest.fixture(scope="session")
def paper_data() -> list[Observation]:
    return generate_dataset(paper_spec())


def obs(model="m", scenario="s", u=0.9, s=0.1, i=0.8, c=0.9) -> Observation:
    return Observation(model, scenario, u, s, i, c)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

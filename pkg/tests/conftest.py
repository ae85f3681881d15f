import math
import random

import pytest

from rotapack.layout import CircleSpec, ProblemInstance

_acceptance_results: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    _acceptance_results[number] = (passed, detail)


def unit_instance(n: int) -> ProblemInstance:
    return ProblemInstance(tuple(CircleSpec(i, 1.0, 1.0) for i in range(1, n + 1)))


def random_instance(n: int, seed: int, rmin=1.0, rmax=10.0) -> ProblemInstance:
    rng = random.Random(seed)
    return ProblemInstance(
        tuple(CircleSpec(i, rng.uniform(rmin, rmax), rng.uniform(1.0, 20.0)) for i in range(1, n + 1))
    )


@pytest.fixture
def rhombus_instance():
    return unit_instance(4)


SQ3 = math.sqrt(3.0)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        passed, detail = _acceptance_results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")

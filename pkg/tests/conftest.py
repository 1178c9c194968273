import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


def random_sl2(rng, scale=1.0):
    from hyperfold.moebius_core import canonicalize

    return canonicalize(scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))))


ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> bool:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

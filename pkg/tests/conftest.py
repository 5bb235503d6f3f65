import numpy as np
import pytest

from vvixsv.model import REFERENCE_P, REFERENCE_Q, REFERENCE_SIGMA_P
from vvixsv.mcmc import Params

# acceptance results collected for the terminal summary
CRITERIA: dict[int, tuple[bool, str]] = {}


def record_criterion(k: int, passed: bool, detail: str) -> None:
    CRITERIA[k] = (bool(passed), detail)
    print(f"criterion {k}: {'PASS' if passed else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def true_params() -> Params:
    return Params(REFERENCE_P, REFERENCE_Q, REFERENCE_SIGMA_P)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

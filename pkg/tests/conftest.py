import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from prefpersist.logics import FinDomCirc, FinPredCirc, GroundS5Logic, MtelLogic  # noqa: E402
from prefpersist.syntax import Signature  # noqa: E402

PQ = ("p", "q")
SIG_PQ = Signature((), (("P", 1), ("Q", 1)))


@pytest.fixture(scope="session")
def gs5_pq():
    return GroundS5Logic(PQ)


@pytest.fixture(scope="session")
def mtel_p():
    return MtelLogic(("p",), depth=2)


@pytest.fixture(scope="session")
def mtel_pq():
    return MtelLogic(PQ, depth=2)


@pytest.fixture(scope="session")
def pred_circ():
    return FinPredCirc(SIG_PQ, "P", 3)


@pytest.fixture(scope="session")
def dom_circ():
    return FinDomCirc(SIG_PQ, 3)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

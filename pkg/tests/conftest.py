import pytest

from soergel.coxeter import preset

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def A1():
    return preset("A1")


@pytest.fixture(scope="session")
def A2():
    return preset("A2")


@pytest.fixture(scope="session")
def B2():
    return preset("B2")


@pytest.fixture(scope="session")
def U3():
    return preset("universal3")


@pytest.fixture(scope="session")
def AFF():
    return preset("affineA2")


@pytest.fixture(scope="session")
def RA3():
    return preset("rightangled3")


def record(n, ok, detail=""):
    prev = ACCEPTANCE.get(n)
    if prev is not None:
        ok = ok and prev[0]
        detail = f"{prev[1]}; {detail}" if detail else prev[1]
    ACCEPTANCE[n] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")

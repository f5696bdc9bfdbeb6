import pytest
from hypothesis import settings

from herbrand.frontend import compile_theory
from herbrand.theories import builtin_text

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def whitecrow():
    return compile_theory(builtin_text("whitecrow"))


@pytest.fixture(scope="session")
def pseudo():
    return compile_theory(builtin_text("pseudo"))


@pytest.fixture(scope="session")
def pc_theory():
    return compile_theory("const c; pred P/1; axiom t: P(c); axiom nt: ~P(c);")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {line}")

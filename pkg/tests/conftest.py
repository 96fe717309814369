import pytest

from ntlab.arith import build_prime_table


@pytest.fixture(scope="session")
def small_table():
    return build_prime_table(10**5)


@pytest.fixture(scope="session")
def big_table():
    return build_prime_table(10**6)


ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(name: str, ok: bool, detail: str, seconds: float, limit: float):
        timing_ok = seconds < limit
        verdict = "PASS" if ok and timing_ok else "FAIL"
        line = f"{name} {verdict}  {detail}  [{seconds:.1f}s / limit {limit:.0f}s]"
        ACCEPTANCE_LINES[name] = line
        print(line)
        return ok and timing_ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for name in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[1:])):
            terminalreporter.write_line(ACCEPTANCE_LINES[name])

import os

import pytest
from hypothesis import HealthCheck, settings

from fatpoints import geometry

SEED = 7

settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_collection_modifyitems(config, items):
    if os.environ.get("FATPOINTS_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="set FATPOINTS_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def star4():
    return geometry.gen_star(4, SEED)


@pytest.fixture(scope="session")
def quasi_star3():
    return geometry.gen_quasi_star(3, SEED)


@pytest.fixture(scope="session")
def prop42():
    return geometry.gen_prop42(SEED)


# -- acceptance summary -----------------------------------------------------

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    def _record(number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float):
        flag = "PASS" if ok and elapsed < limit else "FAIL"
        budget = f"limit {limit:g}s" if limit != float("inf") else "no time limit"
        line = f"[{flag}] criterion {number}: {title} | {detail} | {elapsed:.2f}s ({budget})"
        _ACCEPTANCE[number] = line
        print(line)
        return flag == "PASS"

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[n])

import pytest
from hypothesis import settings

# brute-force oracles inside property tests make per-example time uneven
settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")

# criterion number -> list of (label, ok, detail), filled by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False,
                     help="also run the multi-hour extended sweeps")


def pytest_configure(config):
    config.addinivalue_line("markers", "extended: multi-hour sweeps, run only with --extended")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="extended sweep; pass --extended to run")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        for label, ok, detail in ACCEPTANCE[num]:
            status = "PASS" if ok else "FAIL"
            terminalreporter.write_line(f"criterion {num:>2} {status}  {label}: {detail}")

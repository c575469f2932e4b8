from collections import defaultdict
from pathlib import Path

import pytest

from pastrami.metrics import RunObservation, aggregate_level

FIXTURES = Path(__file__).parent / "fixtures"
CAMPAIGNS = FIXTURES / "campaigns"
MALFORMED = FIXTURES / "malformed"
MPPS = 1_000_000

_criteria = defaultdict(list)  # number -> [(nodeid, passed)]
_titles = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    _titles[n] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[n].append((item.nodeid, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        ok = all(passed for _, passed in results)
        terminalreporter.write_line(
            f"criterion {n}: {'PASS' if ok else 'FAIL'}  {_titles[n]}  ({sum(p for _, p in results)}/{len(results)} checks)"
        )


def level_from_plrs(plrs, offered_count=10_000_000, load=MPPS, duration=10.0):
    """Aggregate runs whose per-run PLRs are exactly representable via counts."""
    runs = [
        RunObservation(load, duration, offered_count, offered_count - round(p * offered_count))
        for p in plrs
    ]
    return aggregate_level(runs)


def ideal_grid(step_mpps, stop_mpps, start_mpps=None):
    start = step_mpps if start_mpps is None else start_mpps
    n = round((stop_mpps - start) / step_mpps)
    return [round((start + i * step_mpps) * MPPS) for i in range(n + 1)]

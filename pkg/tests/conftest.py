import numpy as np
import pytest

WORKED = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
WORKED_II = [[1, 3, 6], [5, 12, 21], [12, 27, 45]]


def brute_integral(pixels):
    """Cell-by-cell double sum with plain Python ints."""
    rows = [[int(v) for v in row] for row in np.asarray(pixels)]
    h, w = len(rows), len(rows[0])
    return [[sum(rows[i][j] for i in range(r + 1) for j in range(c + 1)) for c in range(w)]
            for r in range(h)]


def brute_box(pixels, top, left, bottom, right):
    arr = np.asarray(pixels)
    return sum(int(arr[r, c]) for r in range(top, bottom + 1) for c in range(left, right + 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20150710)


@pytest.fixture
def worked():
    return np.array(WORKED, dtype=np.uint8)


_criteria = {}


@pytest.fixture
def criterion(request):
    """Record a one-line acceptance verdict, printed in the terminal summary."""

    def record(number, text):
        _criteria.setdefault(number, (text, []))[1].append(request.node)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        text, nodes = _criteria[number]
        failed = any(r.failed for node in nodes for r in getattr(node, "_reports", {}).values())
        terminalreporter.write_line(f"[{'FAIL' if failed else 'PASS'}] {number:>2}. {text}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if not hasattr(item, "_reports"):
        item._reports = {}
    item._reports[rep.when] = rep

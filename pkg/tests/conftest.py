import re
from pathlib import Path

import pytest

from ratcurves.exact import QQ, PrimeField

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"
FP = PrimeField(2147483647)

_criteria = {}


@pytest.fixture(params=[QQ, FP], ids=["Q", "Fp"])
def field(request):
    return request.param


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    if report.when == "call" or report.outcome != "passed":
        prev = _criteria.get(key, "PASS")
        _criteria[key] = "PASS" if prev == "PASS" and report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), outcome in sorted(_criteria.items()):
        terminalreporter.write_line(f"criterion {num}: {outcome}  {title}")

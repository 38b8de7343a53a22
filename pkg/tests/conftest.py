import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corrcancel.algebra.field import FieldSpec  # noqa: E402

QQ = FieldSpec(0)
F7 = FieldSpec(7)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=[QQ, F7], ids=["Q", "F7"])
def field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

MODELS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "models")

# criterion number -> list of (ok, detail); filled by the acceptance tests
CRITERIA: dict = {}


def record(n: int, ok: bool, detail: str = "") -> None:
    CRITERIA.setdefault(n, []).append((ok, detail))


@pytest.fixture
def models_dir():
    return MODELS


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        parts = CRITERIA[n]
        ok = all(p for p, _ in parts)
        details = "; ".join(d for p, d in parts if d)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {details}")

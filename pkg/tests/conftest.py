from __future__ import annotations

import sys
from pathlib import Path

import pytest

# Allow running the suite from a fresh checkout without an install.
_SRC = Path(__file__).resolve().parent.parent / "src"
if str(_SRC) not in sys.path:
    sys.path.insert(0, str(_SRC))

from histograph import build_network, parse_export  # noqa: E402

import corpus_util  # noqa: E402


@pytest.fixture(scope="session")
def big_export_text() -> str:
    return corpus_util.big_export()


@pytest.fixture(scope="session")
def big_net(big_export_text):
    warnings = []
    records = parse_export(big_export_text, on_warning=lambda l, m: warnings.append((l, m)))
    assert not warnings
    return build_network(records)


@pytest.fixture(scope="session")
def webster_net():
    records = parse_export(corpus_util.webster_export(), on_warning=lambda l, m: None)
    return build_network(records)


_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_results[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_acceptance_results):
        outcome = _acceptance_results[name]
        status = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{status}  {name}")

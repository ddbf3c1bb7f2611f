"""Shared fixtures plus the acceptance-criteria summary hook.

Acceptance tests register one PASS/FAIL line each via ``record_criterion``;
the lines are echoed immediately and repeated in a summary block at the end
of the run so the verdicts survive output capturing.
"""

from __future__ import annotations

import sys

_CRITERIA: list[tuple[int, bool, str]] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    _CRITERIA.append((number, passed, detail))
    verdict = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number}: {verdict} — {detail}", file=sys.stderr)
    assert passed, f"criterion {number}: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_CRITERIA):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {number}: {verdict} — {detail}")

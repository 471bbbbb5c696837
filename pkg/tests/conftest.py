from __future__ import annotations

import sys
import time
from pathlib import Path

# allow running the suite from a checkout without installing
SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

SUITE_LIMIT_SECONDS = 300
_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = sys.modules.get("_acceptance_log")
    if log is None or not log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(log.LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
    elapsed = time.perf_counter() - _START
    verdict = "PASS" if elapsed < SUITE_LIMIT_SECONDS else "FAIL"
    terminalreporter.write_line(f"whole suite: {verdict} ({elapsed:.1f} s, limit {SUITE_LIMIT_SECONDS} s)")


def pytest_sessionfinish(session, exitstatus):
    if time.perf_counter() - _START >= SUITE_LIMIT_SECONDS and exitstatus == 0:
        session.exitstatus = 1

"""Shared test plumbing: acceptance-criteria reporting at session end."""

_CRITERION_LINES: dict[int, str] = {}


def record_criterion(number: int, name: str, passed: bool, detail: str = ""):
    """Register one acceptance-criterion verdict for the final summary."""
    verdict = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    _CRITERION_LINES[number] = f"criterion {number:2d} {verdict}: {name}{suffix}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERION_LINES):
        terminalreporter.write_line(_CRITERION_LINES[number])

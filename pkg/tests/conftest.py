import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: list[tuple[str, bool]] = []


def record_criterion(name: str, passed: bool = True) -> None:
    """Collect one acceptance-criterion outcome for the terminal summary."""
    _criteria.append((name, passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in _criteria:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}")

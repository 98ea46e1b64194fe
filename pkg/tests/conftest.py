from __future__ import annotations

GATE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not GATE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(GATE_LINES):
        terminalreporter.write_line(GATE_LINES[number])
    passed = sum(line.startswith("[PASS]") for line in GATE_LINES.values())
    terminalreporter.write_line(f"{passed}/{len(GATE_LINES)} criteria passed")

"""Shared pytest hooks.

The acceptance tests record one status line per criterion; echoing them in a
terminal-summary section keeps every line visible in a plain ``pytest -v``
run, where stdout from passing tests is otherwise swallowed by capture.
"""

criterion_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in criterion_lines:
        terminalreporter.write_line(line)

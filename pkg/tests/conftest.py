import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    import suite

    if suite.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(suite.ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

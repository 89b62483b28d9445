SCOREBOARD: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if SCOREBOARD:
        terminalreporter.section("acceptance scoreboard")
        for line in SCOREBOARD:
            terminalreporter.write_line(line)

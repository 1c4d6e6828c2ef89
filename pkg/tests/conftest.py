def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import acceptance_lines
    except ImportError:
        return
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)

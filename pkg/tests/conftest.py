def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        r = RESULTS[k]
        terminalreporter.write_line(f"{r.line()}  ({r.seconds:.1f} s)")

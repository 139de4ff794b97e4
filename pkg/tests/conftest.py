_criteria = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria.append((props["criterion"], report.outcome, props.get("summary", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, summary in sorted(_criteria):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        line = f"{label}: {verdict}"
        if summary:
            line += f"  ({summary})"
        terminalreporter.write_line(line)

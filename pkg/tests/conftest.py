ACCEPTANCE_FILE = "test_acceptance.py"

_WORDS = (("passed", "PASS"), ("failed", "FAIL"),
          ("error", "ERROR"), ("skipped", "SKIP"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = []
    for outcome, word in _WORDS:
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if ACCEPTANCE_FILE in nodeid and "::" in nodeid:
                if getattr(rep, "when", "call") in ("call", "setup"):
                    rows.append((nodeid.split("::")[-1], word))
    if not rows:
        return
    seen = set()
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, word in sorted(rows):
        if name in seen:
            continue
        seen.add(name)
        terminalreporter.write_line(f"{word:5s} {name}")

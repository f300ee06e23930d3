import os
import re
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One scorecard line per acceptance criterion that ran."""
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _CRITERION.search(getattr(rep, "nodeid", "") or "")
            if m is None:
                continue
            n = int(m.group(1))
            ok = outcome == "passed"
            results[n] = results.get(n, True) and ok
    if not results:
        return
    terminalreporter.write_line("")
    for n in sorted(results):
        word = "PASS" if results[n] else "FAIL"
        terminalreporter.write_line("criterion %d: %s" % (n, word))

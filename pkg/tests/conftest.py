from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(RESULTS, key=lambda r: r.number):
        ok = r.ok and r.seconds < r.budget
        terminalreporter.write_line(f"[{r.number:2d}] {'PASS' if ok else 'FAIL'} {r.name} ({r.seconds:.2f}s / {r.budget:g}s)")

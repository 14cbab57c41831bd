_RESULTS: dict = {}


def record(key, ok: bool, detail: str):
    _RESULTS[str(key)] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    by_criterion: dict = {}
    for key, (ok, detail) in _RESULTS.items():
        by_criterion.setdefault(int(key[:-1] if key[-1].isalpha() else key), []).append((ok, detail))
    for k in sorted(by_criterion):
        parts = by_criterion[k]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {k}: " + " | ".join(d for _, d in parts))

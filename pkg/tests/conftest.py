CRITERIA = {
    1: "cyclotomic unit cohomology is cyclic of order 3^n, n = 1..3",
    2: "Lambda-model cohomology of T - u 3^e is Z_p/f(0), two routes",
    3: "L_p(1, chi): log formula and interpolation agree to >= 6 digits",
    4: "b0 order equals p^v(L_p(1, chi))",
    5: "v_p(h) equals v_p of the cyclotomic unit index",
    6: "cohomology property suites, >= 200 cases each, < 60 s",
    7: "norm coherence of cyclotomic units, exact",
    8: "L-value, Lambda-model and b0 orders agree",
    9: "default suite: byte-identical reports, cold < 15 min, warm < 1 min",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    k = report.user_properties and dict(report.user_properties).get("criterion")
    if k:
        _outcomes.setdefault(k, []).append(report.passed)


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark:
        item.user_properties.append(("criterion", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        results = _outcomes.get(k)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {status:7s} {CRITERIA[k]} ({len(results or [])} tests)")

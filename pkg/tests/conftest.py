import pytest

CRITERIA = {
    1: "random walk: 3D, 1e4 steps, 1e5 walkers, RMS within 2% of 100 in <= 30 s",
    2: "cosmic stretch: |log10(lambda sqrt(N)/R)| <= 1 for the pion",
    3: "diffusion identities: nu = lambda c and sqrt(nu tau) = lambda to 1e-12",
    4: "Nelson: harmonic L1 < 0.03; free variance within 3 SE; <= 2 min",
    5: "Dirac: checkerboard/spectral error ratio in [1.7, 2.3]; norm drift <= 1e-12",
    6: "Zitterbewegung: frequency within one bin, amplitude bounds",
    7: "Kerr-Newman: electron naked with ratio in [0.99, 1.01]; Schwarzschild exact",
    8: "rate law: RK4 vs closed form <= 1e-6; age ratio in [1.9, 2.0]; monotone",
    9: "large-number audit: all |residual| <= 1.5 dex, structural <= 1 dex",
    10: "reproducibility: byte-identical reruns; agreement across worker counts",
}

_outcomes: dict[int, list[bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes.setdefault(mark.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, text in CRITERIA.items():
        results = _outcomes.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        tr.write_line(f"[{status:>7}] {n:2d}. {text}")

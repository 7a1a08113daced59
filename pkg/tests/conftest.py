import pytest

from spectral_design.system import PhysicalParams

# parameter sets of the four worked examples
FIGURE_PARAMS = {
    "morse": PhysicalParams(mu=-3.7, a=2.5, nu=2.5),
    "radial": PhysicalParams(mu=-7.7, a=7.7, ell=1, alpha=0.5),
    "expgauss": PhysicalParams(mu=-4.3, a=4.3, alpha=0.2),
    "sinh": PhysicalParams(mu=-3.2, a=3.2, alpha=0.3, nu=3.2),
}


@pytest.fixture
def morse_params():
    return FIGURE_PARAMS["morse"]


@pytest.fixture(params=sorted(FIGURE_PARAMS))
def figure_case(request):
    return request.param, FIGURE_PARAMS[request.param]


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

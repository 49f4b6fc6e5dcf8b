import pytest

from frlim.freegrp import Presentation, cyclic, klein_four, symmetric3


def sample_groups():
    return {
        "Z/2": cyclic(2),
        "Z/3": cyclic(3),
        "Z/4": cyclic(4),
        "Z/2xZ/2": klein_four(),
        "S3": symmetric3(),
    }


@pytest.fixture(scope="session")
def groups():
    return sample_groups()


@pytest.fixture(scope="session")
def free_mod_square():
    """<x, y | x^2>: the reference presentation for containment checks."""
    return Presentation.from_strings(["x", "y"], ["x^2"], name="<x,y|x^2>")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

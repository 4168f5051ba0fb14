import cmath
import math

import numpy as np
import pytest

from threeterm.family import FamilySpec, chebyshev_spec, quintic_spec

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _ACCEPTANCE.get(number, (title, "PASS"))
        status = "PASS" if rep.outcome == "passed" and prev[1] == "PASS" else "FAIL"
        _ACCEPTANCE[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")


@pytest.fixture
def cheb():
    return chebyshev_spec()


@pytest.fixture
def quintic():
    return quintic_spec()


@pytest.fixture
def hexic():
    return FamilySpec.from_coeffs(6, [1.0, 0.5 + 0.25j], [0.1 - 0.05j, 1.0])


def random_unit(rng, lo=0.5, hi=2.0):
    return cmath.rect(rng.uniform(lo, hi), rng.uniform(0, 2 * math.pi))


def conditioned_spec(rng) -> tuple[FamilySpec, int]:
    """A random spec whose expanded H_m is well conditioned in the monomial basis.

    B = u (z + beta) with |beta| small, A constant or alpha (1 + gamma z) with
    |gamma| <= 0.2, and m <= 40 with m mod n in {0, 1} so B contributes at
    most simple roots.
    """
    n = int(rng.integers(3, 6))
    u = random_unit(rng)
    beta = 0.05 * complex(*rng.uniform(-1, 1, 2))
    if rng.integers(0, 2):
        alpha = random_unit(rng)
        A = [alpha, alpha * 0.2 * random_unit(rng, 0.5, 1.0)]
    else:
        A = [random_unit(rng)]
    spec = FamilySpec.from_coeffs(n, A, [beta * u, u])
    ms = [m for m in range(max(n, 10), 41) if m % n <= 1]
    return spec, int(rng.choice(ms))


def random_spec(rng, n: int, max_deg: int = 2) -> FamilySpec:
    a = int(rng.integers(0, max_deg + 1))
    b = int(rng.integers(1, max_deg + 1))
    A = list(rng.uniform(-1, 1, a + 1) + 1j * rng.uniform(-1, 1, a + 1))
    B = list(rng.uniform(-1, 1, b + 1) + 1j * rng.uniform(-1, 1, b + 1))
    if abs(A[-1]) < 0.3:
        A[-1] += 0.5
    if abs(B[-1]) < 0.3:
        B[-1] += 0.5
    return FamilySpec.from_coeffs(n, A, B)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

import os
import random

import pytest
from hypothesis import HealthCheck, settings

from arithdyn import fixtures
from arithdyn.algebra import ProjPointQ

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def ex1():
    return fixtures.example1()


@pytest.fixture
def ex2():
    return fixtures.example2()


@pytest.fixture
def ex3():
    return fixtures.example3()


@pytest.fixture
def psi():
    return fixtures.psi()


@pytest.fixture
def square():
    return fixtures.square()


def random_points(seed, count, bound=30):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a, b = rng.randint(-bound, bound), rng.randint(0, bound)
        if (a, b) == (0, 0):
            continue
        P = ProjPointQ(a, b)
        if P not in out:
            out.append(P)
    return out


# acceptance criteria append (number, title, passed, detail) here
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"[{num}] {'PASS' if ok else 'FAIL'}  {title}  ({detail})")

import pytest

from eulercalc import instances


@pytest.fixture(scope="session")
def classical2():
    return instances.load("classical2")


@pytest.fixture(scope="session")
def classical_p3():
    return instances.load("classical_p(3)")


@pytest.fixture(scope="session")
def classical_p5():
    return instances.load("classical_p(5)")


@pytest.fixture(scope="session")
def c2bundle():
    return instances.load("c2equivariant")

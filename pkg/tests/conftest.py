import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kcx.algebra import make_algebra
from kcx.fields import QQ


@pytest.fixture(scope="session")
def plane():
    return make_algebra(QQ, ("x1", "x2"))


@pytest.fixture(scope="session")
def circle():
    return make_algebra(QQ, ("x", "y"), ["x^2 + y^2 - 1"])


@pytest.fixture(scope="session")
def fat_point():
    return make_algebra(QQ, ("x",), ["x^2"])


@pytest.fixture(scope="session")
def elliptic():
    return make_algebra(QQ, ("x", "y"), ["y^2 - x^3 - 1"])


@pytest.fixture(scope="session")
def sphere2():
    return make_algebra(QQ, ("x1", "x2", "x3"), ["x1^2 + x2^2 + x3^2 - 1"])


@pytest.fixture(scope="session")
def affine3():
    return make_algebra(QQ, ("x1", "x2", "x3"))

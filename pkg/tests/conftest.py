import pathlib

import pytest

from twistlab import fixtures
from twistlab.groups import FreeGroup

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def s3():
    return fixtures.symmetric(3)


@pytest.fixture(scope="session")
def q8():
    return fixtures.quaternion()


@pytest.fixture(scope="session")
def d4():
    return fixtures.dihedral(4)


@pytest.fixture(scope="session")
def f2():
    return FreeGroup(2)

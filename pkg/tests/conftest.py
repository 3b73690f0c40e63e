import pytest
from hypothesis import settings

from infbraid.braiding2 import build_braiding
from infbraid.crossed_modules import StringModel, sl2_trivial_model
from infbraid.quasi_invariant import string_tensor, trivial_tensor
from infbraid.relative_tensor import un_space_for

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=40, print_blob=True)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def model():
    return StringModel()


@pytest.fixture(scope="session")
def space(model):
    return un_space_for(model)


@pytest.fixture(scope="session")
def engine(space):
    return space.engine


@pytest.fixture(scope="session")
def tensor(space):
    return string_tensor(space, -2)


@pytest.fixture(scope="session")
def braid(tensor):
    return build_braiding(tensor, check=False)


@pytest.fixture(scope="session")
def pq3(braid):
    return braid.pq(3)


@pytest.fixture(scope="session")
def pq4(braid):
    return braid.pq(4)


@pytest.fixture(scope="session")
def trivial_space():
    return un_space_for(sl2_trivial_model())


@pytest.fixture(scope="session")
def trivial_braid(trivial_space):
    return build_braiding(trivial_tensor(trivial_space))

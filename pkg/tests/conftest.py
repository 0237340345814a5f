import pytest

from oracles import TOY, TOY_PAGES, TOY_USERS
from webbicluster.usage_matrix import AccessMatrix


@pytest.fixture
def toy():
    return AccessMatrix(TOY, TOY_USERS, TOY_PAGES)

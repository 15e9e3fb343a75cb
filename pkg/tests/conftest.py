import pytest

from linefpp.environment import Constant, Environment
from linefpp.search import shortest_time


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the grid kernels once so timed tests measure work, not JIT."""
    env = Environment(1, Constant(1.0), 2)
    shortest_time(env, (0, 0), (3, 2))

import warnings

import pytest

warnings.filterwarnings("ignore", message=".*TBB.*")


@pytest.fixture(scope="session")
def rng():
    import random

    return random.Random(20240817)

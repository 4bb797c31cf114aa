import numpy as np
import pytest

from rectwave import filterbank

BANK_NAMES = ("haar", "d4", "crf137")


@pytest.fixture(scope="session")
def banks():
    return {name: filterbank.builtin(name) for name in BANK_NAMES}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

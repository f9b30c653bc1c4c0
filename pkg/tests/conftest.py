import numpy as np
import pytest

from temperedstable import Constant, ProcessSpec, Sinusoidal, constant_spec


@pytest.fixture
def brownian_spec():
    # H = 0.5, alpha = 2, untempered: the kernel is the indicator of [0, t)
    return constant_spec("LFSM", 0.5, 2.0, 0.0)


@pytest.fixture
def multistable_spec():
    return ProcessSpec("LTFmSM", Constant(0.7), Sinusoidal(1.5, 0.3, 2.0 * np.pi), 0.1)


@pytest.fixture
def multifractional_spec():
    return ProcessSpec("LTmFSM", Sinusoidal(0.6, 0.2, 2.0 * np.pi), Constant(1.5), 0.3)

import math
from functools import reduce

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def kron_feature(v):
    """Tensor product of local maps (1, e^{i v_j}) / sqrt(2), qubit 0 leftmost."""
    locals_ = [np.array([1, np.exp(1j * a)]) / math.sqrt(2) for a in v]
    return reduce(np.kron, locals_)


def cos2_oracle(theta, phi, tau=1.0, delta=0.0):
    d = tau * (np.asarray(theta) - np.asarray(phi)) + delta
    return float(np.prod(np.cos(d / 2) ** 2))

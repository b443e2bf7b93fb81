import numpy as np
import pytest

import potentia as pt
from potentia.potentials import potential_arrays, potential_treecode_arrays


@pytest.fixture(scope="session")
def warm_kernels():
    """Compile (or no-op) the summation kernels so timed tests measure
    steady-state work, not one-time JIT cost."""
    c = pt.discrete_charge(2, [[0.0, 0.0], [0.5, 0.25]], [1.0, 1.0])
    targets = np.array([[2.0, 0.0], [0.0, 3.0]])
    potential_arrays(c, targets)
    potential_treecode_arrays(c, targets, 0.5)
    return True

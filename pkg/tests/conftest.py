import numpy as np
import pytest

from qbanet import gf
from qbanet.rng import stream


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Touch every compiled path once so timed tests never see JIT cost."""
    rng = stream(0, "warmup")
    p = gf.sample_irreducible(8, rng, method="rejection")
    gf.is_irreducible(gf.FieldPoly((1, 0, 3)))
    gf.poly_mod(gf.FieldPoly((2, 0, 0, 1)) * p, p)
    gf.sample_irreducible(64, rng, method="minpoly")
    yield

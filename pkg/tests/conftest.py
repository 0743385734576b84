import math

import pytest

from fluxmol import consts
from fluxmol.datatypes import BasisTruncation, CircuitParams, FluxPoint, NoiseParams


@pytest.fixture
def fig2():
    return CircuitParams.from_preset("fig2")


@pytest.fixture
def device1():
    return CircuitParams.from_preset("device1")


@pytest.fixture
def small_trunc():
    """Cheap basis for structural tests (reduced: 144 states, full: 576)."""
    return BasisTruncation(12, 12, 4)


@pytest.fixture
def reduced_trunc():
    """Reduced-model basis converged well below 1e-6 GHz for the low-lying states."""
    return BasisTruncation(30, 30, 4)


@pytest.fixture
def noise():
    return NoiseParams()


@pytest.fixture
def sweet_spots():
    return dict((label, FluxPoint(*point)) for label, point in consts.SWEET_SPOTS)


@pytest.fixture
def spot_ii():
    return FluxPoint(math.pi, 0.0)

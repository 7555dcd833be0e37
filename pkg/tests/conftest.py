import pytest

from sts_toa import GaussianPacketSpec, TimeGrid, default_energy_grid


@pytest.fixture(scope="session")
def spec():
    """The reference scattering packet: x_i = -50, P_0 = 2, delta = 10."""
    return GaussianPacketSpec(x_i=-50.0, p_i=2.0, delta=10.0)


@pytest.fixture(scope="session")
def egrid(spec):
    return default_energy_grid(spec)


@pytest.fixture(scope="session")
def tgrid():
    return TimeGrid(0.0, 150.0, 4096)

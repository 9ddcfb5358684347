import pytest

from slabsim import ArrayGeometry, DataFormat, MemoryConfig
from slabsim.config import load_config


@pytest.fixture(scope="session")
def geometry():
    return ArrayGeometry()


@pytest.fixture(scope="session")
def desk_geometry():
    """Small enough to cross-check against by hand and against the microsim."""
    return ArrayGeometry(rows=4, cols=4, slab_height=2, num_slabs=2)


@pytest.fixture(scope="session")
def memory():
    return MemoryConfig()


@pytest.fixture(scope="session")
def fmt():
    return DataFormat()


@pytest.fixture(scope="session")
def setup():
    """The committed default configuration."""
    return load_config()

import numpy as np
import pytest

from app.schemas.schemas import HOModel, HydrogenModel, StaticFieldConfig
from app.services.units_service import electron_proton_pair

# Fields quoted for the hydrogen figures
CROSSED_FIELDS = StaticFieldConfig(E0=(1e5, 0.0, 0.0), B0=(0.0, 10.0, 0.0))

# Every tensor entry nonzero
GENERIC_FIELDS = StaticFieldConfig(E0=(1e5, 2e4, -3e4), B0=(1.0, 10.0, 2.0))

OMEGA0 = 1e16


@pytest.fixture
def pair():
    return electron_proton_pair()


@pytest.fixture
def generic_fields():
    return GENERIC_FIELDS


@pytest.fixture
def ho_model(pair):
    return HOModel(pair=pair, omega0=OMEGA0, fields=CROSSED_FIELDS)


@pytest.fixture
def generic_ho_model(pair):
    return HOModel(pair=pair, omega0=OMEGA0, fields=GENERIC_FIELDS)


def hydrogen_model(fields=GENERIC_FIELDS, n_max=4, gamma=1e8):
    return HydrogenModel(pair=electron_proton_pair(), fields=fields, gamma=gamma, n_max=n_max)


def assert_tensor_close(actual, expected, rel):
    """Max entry deviation relative to the largest expected entry."""
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    scale = np.max(np.abs(expected))
    assert scale > 0
    assert np.max(np.abs(actual - expected)) <= rel * scale

import numpy as np
import pytest

from padpkit import AntennaPattern, ArrayConfig, MpcTruth, SoundingConfig


@pytest.fixture(scope="session")
def pat10():
    """20 dB Gaussian beam with a 10 degree HPBW."""
    return AntennaPattern.gaussian(100.0, np.radians(10.0))


@pytest.fixture(scope="session")
def arr36():
    return ArrayConfig(m=36)


@pytest.fixture(scope="session")
def cfg_full():
    """Full-scale sounding setup: 37.5 GHz / 2 GHz / 1001 points."""
    return SoundingConfig(fc=37.5e9, bw=2e9, k=1001, pu=1.0, sigma2=0.0)


@pytest.fixture(scope="session")
def cfg_small():
    """Reduced frequency grid for fast unit tests."""
    return SoundingConfig(fc=37.5e9, bw=2e9, k=257, pu=1.0, sigma2=0.0)


@pytest.fixture()
def mpc_13deg():
    return MpcTruth(alpha=1.0, phase=np.pi / 3, tau=25e-9, phi=np.radians(13.0))

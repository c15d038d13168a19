import numpy as np
import pytest

import treerings as tr

STANDARD_RADII = (12.0, 35.0, 58.0, 81.0, 104.0, 127.0)


@pytest.fixture(scope="session")
def standard_disk():
    """Noiseless centered disk with six rings; truth center (200, 200)."""
    spec = tr.DiskSpec(width=400, height=400, center=(200.0, 200.0), radii=STANDARD_RADII)
    img, truth = tr.generate_disk(spec)
    return spec, img, truth


@pytest.fixture(scope="session")
def noisy_disk():
    """Same disk with 5% uniform noise, fixed seed."""
    spec = tr.DiskSpec(
        width=400,
        height=400,
        center=(200.0, 200.0),
        radii=STANDARD_RADII,
        noise_amplitude=0.05,
        seed=0,
    )
    img, truth = tr.generate_disk(spec)
    return spec, img, truth


@pytest.fixture(scope="session")
def standard_polar(standard_disk):
    _, img, truth = standard_disk
    pol = tr.to_polar(img, truth.center, angular_bins=720, pad_rows=16)
    return pol, truth


def rng(seed=0):
    return np.random.default_rng(seed)

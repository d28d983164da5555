import numpy as np
import pytest

from vizpipe import Engine


def ellipsoid_field(n=30, extent=10.0):
    """The quadric 0.5*x^2 + y^2 + 2*z^2 sampled on [-extent, extent]^3."""
    x, y, z = np.ogrid[-extent:extent:n * 1j,
                       -extent:extent:n * 1j,
                       -extent:extent:n * 1j]
    return 0.5 * x ** 2 + y ** 2 + 2 * z ** 2


def grid_geometry(n=30, extent=10.0):
    origin = (-extent, -extent, -extent)
    h = 2 * extent / (n - 1)
    return origin, (h, h, h)


def field_grid(field, origin=(0.0, 0.0, 0.0), spacing=(1.0, 1.0, 1.0)):
    """ImageData from a 3-D array indexed [i, j, k] (x-fastest storage)."""
    from vizpipe import image_data_new

    field = np.asarray(field, dtype=np.float64)
    return image_data_new(field.shape, origin=origin, spacing=spacing,
                          scalars=field.ravel(order="F"))


@pytest.fixture
def engine():
    return Engine()


@pytest.fixture
def small_field():
    return ellipsoid_field(12)

"""Scalar-to-RGBA lookup tables shared by the modules under one manager."""

import numpy as np

from .errors import RangeError

__all__ = ["LookupTable", "lut_map", "build_table", "COLORMAP_NAMES"]

TABLE_SIZE = 256
COLORMAP_NAMES = ("blue_red", "gray")


def build_table(colormap_name):
    """The 256x4 RGBA table for a named colormap, rows in [0, 1]."""
    t = np.linspace(0.0, 1.0, TABLE_SIZE)
    table = np.ones((TABLE_SIZE, 4))
    if colormap_name == "blue_red":
        table[:, 0] = t
        table[:, 1] = 0.0
        table[:, 2] = 1.0 - t
    elif colormap_name == "gray":
        table[:, 0] = t
        table[:, 1] = t
        table[:, 2] = t
    else:
        raise RangeError("unknown colormap %r" % (colormap_name,))
    table.setflags(write=False)
    return table


class LookupTable:
    """A 256-row RGBA map over a scalar range."""

    def __init__(self, colormap_name="blue_red", range=(0.0, 1.0)):
        self.colormap_name = colormap_name
        self.range = (float(range[0]), float(range[1]))
        if self.range[0] > self.range[1]:
            raise RangeError("lut range lo > hi: %r" % (self.range,))

    @property
    def table(self):
        return build_table(self.colormap_name)

    def map(self, scalars):
        return lut_map(self, scalars)


def lut_map(lut, scalars):
    """Map scalars to RGBA rows: clamp outside the range, degenerate -> row 0."""
    s = np.asarray(scalars, dtype=np.float64)
    lo, hi = lut.range
    if hi == lo:
        rows = np.zeros(s.shape, dtype=np.intp)
    else:
        rows = np.floor((TABLE_SIZE - 1) * (s - lo) / (hi - lo)).astype(np.intp)
        rows = np.clip(rows, 0, TABLE_SIZE - 1)
    return lut.table[rows]

"""Value types for the data flowing between pipeline nodes.

Two dataset kinds are supported: regular 3-D scalar grids (:class:`ImageData`)
and polygonal geometry with point attributes (:class:`PolyData`).  Datasets
are immutable values: every numpy array handed in is copied, cast to the
canonical dtype (float64 for geometry and scalars, int32 for connectivity)
and frozen, so a dataset emitted by a pipeline node can be shared freely.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DatasetAttributeError, DatasetParamError, DatasetShapeError

__all__ = [
    "ImageData",
    "PolyData",
    "DatasetInfo",
    "image_data_new",
    "dataset_info",
    "point_position",
]


def _frozen(values, dtype, shape=None, name="array"):
    arr = np.array(values, dtype=dtype)
    if shape is not None:
        if arr.shape != tuple(shape):
            raise DatasetShapeError(
                "%s has shape %s, expected %s" % (name, arr.shape, tuple(shape))
            )
    arr.setflags(write=False)
    return arr


class ImageData:
    """A regular 3-D grid of points with optional point scalars.

    Points are ordered x-fastest: linear index = i + nx*(j + ny*k).
    """

    dataset_kind = "image_data"

    def __init__(self, dims, origin=(0.0, 0.0, 0.0), spacing=(1.0, 1.0, 1.0),
                 point_scalars=None, scalars_name="scalars"):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or any(d < 1 for d in dims):
            raise DatasetParamError("dims must be three extents >= 1, got %r" % (dims,))
        origin = tuple(float(v) for v in origin)
        spacing = tuple(float(v) for v in spacing)
        if len(origin) != 3 or len(spacing) != 3:
            raise DatasetParamError("origin and spacing must have three components")
        if any(s <= 0.0 for s in spacing):
            raise DatasetParamError("spacing must be strictly positive, got %r" % (spacing,))
        self.dims = dims
        self.origin = origin
        self.spacing = spacing
        self.scalars_name = str(scalars_name)
        if point_scalars is None:
            self.point_scalars = None
        else:
            n = dims[0] * dims[1] * dims[2]
            arr = np.asarray(point_scalars, dtype=np.float64).ravel()
            if arr.size != n:
                raise DatasetShapeError(
                    "point_scalars has %d values, grid has %d points" % (arr.size, n)
                )
            self.point_scalars = _frozen(arr, np.float64)

    @property
    def n_points(self):
        nx, ny, nz = self.dims
        return nx * ny * nz

    @property
    def bounds(self):
        """((xmin, xmax), (ymin, ymax), (zmin, zmax)) of the grid lattice."""
        return tuple(
            (o, o + (d - 1) * s)
            for o, s, d in zip(self.origin, self.spacing, self.dims)
        )

    def __eq__(self, other):
        if not isinstance(other, ImageData):
            return NotImplemented
        if (self.dims, self.origin, self.spacing, self.scalars_name) != (
            other.dims, other.origin, other.spacing, other.scalars_name
        ):
            return False
        if (self.point_scalars is None) != (other.point_scalars is None):
            return False
        return self.point_scalars is None or np.array_equal(
            self.point_scalars, other.point_scalars
        )

    def __repr__(self):
        return "ImageData(dims=%r, scalars=%s)" % (
            self.dims, "yes" if self.point_scalars is not None else "no"
        )


class PolyData:
    """Polygonal geometry: points plus triangles and/or polylines."""

    dataset_kind = "poly_data"

    def __init__(self, points=None, triangles=None, lines=None,
                 point_scalars=None, point_normals=None, scalars_name="scalars"):
        if points is None:
            points = np.zeros((0, 3))
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise DatasetShapeError("points must have shape (N, 3), got %r" % (pts.shape,))
        self.points = _frozen(pts, np.float64)
        n = len(pts)

        if triangles is None:
            triangles = np.zeros((0, 3), dtype=np.int32)
        tris = np.asarray(triangles, dtype=np.int32)
        if tris.size and (tris.ndim != 2 or tris.shape[1] != 3):
            raise DatasetShapeError("triangles must have shape (M, 3)")
        tris = tris.reshape(-1, 3)
        if tris.size and (tris.min() < 0 or tris.max() >= n):
            raise DatasetShapeError("triangle index out of range")
        self.triangles = _frozen(tris, np.int32)

        self.lines = []
        for poly in (lines or []):
            arr = np.asarray(poly, dtype=np.int32).ravel()
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise DatasetShapeError("line index out of range")
            self.lines.append(_frozen(arr, np.int32))
        self.lines = tuple(self.lines)

        self.scalars_name = str(scalars_name)
        if point_scalars is None:
            self.point_scalars = None
        else:
            self.point_scalars = _frozen(
                np.asarray(point_scalars, dtype=np.float64).ravel(),
                np.float64, (n,), "point_scalars",
            )
        if point_normals is None:
            self.point_normals = None
        else:
            nrm = np.asarray(point_normals, dtype=np.float64)
            self.point_normals = _frozen(nrm, np.float64, (n, 3), "point_normals")
            if n:
                lengths = np.linalg.norm(self.point_normals, axis=1)
                if not np.allclose(lengths, 1.0, atol=1e-6):
                    raise DatasetAttributeError("point normals must be unit length")

    @property
    def n_points(self):
        return len(self.points)

    @property
    def bounds(self):
        if not len(self.points):
            raise DatasetShapeError("empty PolyData has no bounds")
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return tuple((float(a), float(b)) for a, b in zip(lo, hi))

    def __eq__(self, other):
        if not isinstance(other, PolyData):
            return NotImplemented
        if not (np.array_equal(self.points, other.points)
                and np.array_equal(self.triangles, other.triangles)
                and len(self.lines) == len(other.lines)
                and all(np.array_equal(a, b) for a, b in zip(self.lines, other.lines))
                and self.scalars_name == other.scalars_name):
            return False
        for attr in ("point_scalars", "point_normals"):
            a, b = getattr(self, attr), getattr(other, attr)
            if (a is None) != (b is None):
                return False
            if a is not None and not np.array_equal(a, b):
                return False
        return True

    def __repr__(self):
        return "PolyData(%d points, %d triangles, %d lines)" % (
            self.n_points, len(self.triangles), len(self.lines)
        )


@dataclass(frozen=True)
class DatasetInfo:
    """Descriptor of a dataset's kind and present point attributes.

    Used by the registry to match producers against filter/module input
    constraints.
    """

    dataset_kind: str
    attribute_types: frozenset = field(default_factory=frozenset)
    attributes: frozenset = field(default_factory=frozenset)

    def to_json(self):
        return {
            "dataset_kind": self.dataset_kind,
            "attribute_types": sorted(self.attribute_types),
            "attributes": sorted(self.attributes),
        }


def image_data_new(dims, origin=(0.0, 0.0, 0.0), spacing=(1.0, 1.0, 1.0),
                   scalars=None, scalars_name="scalars"):
    """Construct a validated :class:`ImageData`."""
    return ImageData(dims, origin, spacing, scalars, scalars_name)


def dataset_info(d):
    """Compute the :class:`DatasetInfo` descriptor of a dataset."""
    attrs = set()
    if d.point_scalars is not None:
        attrs.add("scalars")
    if isinstance(d, PolyData) and d.point_normals is not None:
        attrs.add("normals")
    types = frozenset({"point"}) if attrs else frozenset()
    return DatasetInfo(d.dataset_kind, types, frozenset(attrs))


def point_position(d, linear_index):
    """World position of a grid point given its x-fastest linear index."""
    nx, ny, nz = d.dims
    n = nx * ny * nz
    idx = int(linear_index)
    if not 0 <= idx < n:
        raise IndexError("point index %d out of range [0, %d)" % (idx, n))
    i = idx % nx
    j = (idx // nx) % ny
    k = idx // (nx * ny)
    ox, oy, oz = d.origin
    sx, sy, sz = d.spacing
    return (ox + i * sx, oy + j * sy, oz + k * sz)

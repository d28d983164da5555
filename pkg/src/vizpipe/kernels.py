"""Concrete sources, filters, and modules: the numerical payload.

The geometry routines (`marching_cubes`, `compute_normals`, `curve`,
`outline_bounds`) are pure functions; the node classes wrap them with
observable properties and the pipeline update protocol.
"""

import numpy as np

from . import vtkio
from ._mc import CORNERS, EDGES, TRI_ARRAY, TRI_COUNTS
from .dataset import ImageData, PolyData
from .errors import (
    DatasetAttributeError,
    DatasetEmptyError,
    RangeError,
    ShapeError,
)
from .lut import LookupTable, lut_map  # noqa: F401  (re-exported)
from .observable import PropertyDescriptor
from .pipeline import PipelineNode

__all__ = [
    "marching_cubes", "auto_levels", "compute_normals", "curve",
    "outline_bounds", "lut_map", "LookupTable",
    "ArraySource", "ParametricCurveSource", "LineSource",
    "TextArraySource", "VtkFileSource",
    "PolyDataNormals", "IsoSurface", "Surface", "Outline",
]


# ---------------------------------------------------------------------------
# geometry kernels
# ---------------------------------------------------------------------------

_CORNER_OFFSETS = np.array(CORNERS, dtype=np.int64)          # (8, 3) as (dx,dy,dz)
_EDGE_CORNERS = np.array(EDGES, dtype=np.int64)              # (12, 2)


def marching_cubes(grid, level):
    """Extract the iso-surface of `grid`'s point scalars at `level`.

    Vertices lie on cell edges at the linear-interpolation crossing and are
    shared between all incident triangles (edge-indexed deduplication), so
    the mesh is manifold rather than triangle soup.  A corner counts as
    inside when its value is strictly greater than the level.
    """
    if grid.point_scalars is None:
        raise DatasetAttributeError("marching_cubes needs point scalars")
    nx, ny, nz = grid.dims
    if min(nx, ny, nz) < 2:
        raise DatasetAttributeError("marching_cubes needs dims >= 2 per axis")
    level = float(level)
    ps = np.asarray(grid.point_scalars, dtype=np.float64)
    field = ps.reshape(nz, ny, nx)  # index [k, j, i], x-fastest storage

    # corner values for every cell, cells in x-fastest order
    shape = (nz - 1, ny - 1, nx - 1)
    config = np.zeros(shape, dtype=np.uint16)
    for c, (dx, dy, dz) in enumerate(CORNERS):
        vals = field[dz:dz + nz - 1, dy:dy + ny - 1, dx:dx + nx - 1]
        config |= (vals > level).astype(np.uint16) << c

    active = np.nonzero(TRI_COUNTS[config.ravel()] > 0)[0]
    if active.size == 0:
        return PolyData(points=np.zeros((0, 3)),
                        point_scalars=np.zeros(0),
                        scalars_name=grid.scalars_name)

    kk, jj, ii = np.unravel_index(active, shape)
    cell_config = config.ravel()[active]

    rows = TRI_ARRAY[cell_config]                   # (A, 15) edge ids, -1 pad
    valid = rows >= 0
    cell_of = np.broadcast_to(active[:, None], rows.shape)[valid]
    edge_ids = rows[valid].astype(np.int64)

    # global endpoint indices of each referenced cell edge
    kc, jc, ic = np.unravel_index(cell_of, shape)
    cell_origin = np.stack([ic, jc, kc], axis=1)    # (T, 3)
    ca = _EDGE_CORNERS[edge_ids, 0]
    cb = _EDGE_CORNERS[edge_ids, 1]
    pa_ijk = cell_origin + _CORNER_OFFSETS[ca]
    pb_ijk = cell_origin + _CORNER_OFFSETS[cb]

    def linear(ijk):
        return ijk[:, 0] + nx * (ijk[:, 1] + ny * ijk[:, 2])

    pa = linear(pa_ijk)
    pb = linear(pb_ijk)
    lo = np.minimum(pa, pb)
    hi = np.maximum(pa, pb)
    keys = lo * np.int64(nx * ny * nz) + hi

    unique_keys, tri_vertex = np.unique(keys, return_inverse=True)
    ua = unique_keys // (nx * ny * nz)
    ub = unique_keys % (nx * ny * nz)

    va = ps[ua]
    vb = ps[ub]
    denom = vb - va
    t = np.where(denom == 0.0, 0.5, (level - va) / np.where(denom == 0.0, 1.0, denom))

    def position(lin):
        i = lin % nx
        j = (lin // nx) % ny
        k = lin // (nx * ny)
        return (np.asarray(grid.origin)
                + np.stack([i, j, k], axis=1) * np.asarray(grid.spacing))

    points = position(ua) + t[:, None] * (position(ub) - position(ua))
    triangles = tri_vertex.reshape(-1, 3)
    scalars = np.full(len(points), level)
    return PolyData(points=points, triangles=triangles,
                    point_scalars=scalars, scalars_name=grid.scalars_name)


def auto_levels(lo, hi, n):
    """`n` levels evenly spaced strictly inside (lo, hi)."""
    if n < 1:
        raise RangeError("need at least one level")
    if lo > hi:
        raise RangeError("lo > hi: (%r, %r)" % (lo, hi))
    return [lo + k * (hi - lo) / (n + 1) for k in range(1, n + 1)]


def compute_normals(mesh):
    """Per-point normals as the normalized area-weighted sum of incident
    triangle normals; isolated points get (0, 0, 1).  Input is untouched."""
    pts = mesh.points
    tris = mesh.triangles
    accum = np.zeros((len(pts), 3))
    if len(tris):
        p0 = pts[tris[:, 0]]
        p1 = pts[tris[:, 1]]
        p2 = pts[tris[:, 2]]
        face = np.cross(p1 - p0, p2 - p0)  # length = 2 * area: area weighting
        for col in range(3):
            np.add.at(accum, tris[:, col], face)
    lengths = np.linalg.norm(accum, axis=1)
    zero = lengths == 0.0
    accum[zero] = (0.0, 0.0, 1.0)
    lengths[zero] = 1.0
    normals = accum / lengths[:, None]
    return PolyData(points=pts, triangles=tris, lines=mesh.lines,
                    point_scalars=mesh.point_scalars,
                    point_normals=normals, scalars_name=mesh.scalars_name)


def curve(n_turns, sample_count=2000):
    """The looped parametric curve: a circle of radius 1 modulated by
    `n_turns` transverse rotations of amplitude 0.5."""
    if sample_count < 2:
        raise RangeError("sample_count must be >= 2")
    phi = np.linspace(0.0, 2.0 * np.pi, sample_count)
    r = 1.0 + 0.5 * np.cos(n_turns * phi)
    points = np.stack(
        [np.cos(phi) * r, np.sin(phi) * r, 0.5 * np.sin(n_turns * phi)], axis=1
    )
    return PolyData(points=points, lines=[np.arange(sample_count)])


def outline_bounds(d):
    """Wireframe box of `d`'s axis-aligned bounds: 8 corners, 12 edges."""
    if isinstance(d, PolyData) and d.n_points == 0:
        raise DatasetEmptyError("cannot outline an empty dataset")
    (x0, x1), (y0, y1), (z0, z1) = d.bounds
    lo = (x0, y0, z0)
    hi = (x1, y1, z1)
    corners = [
        tuple(hi[a] if (c >> a) & 1 else lo[a] for a in range(3)) for c in range(8)
    ]
    edges = [(a, b) for a in range(8) for b in range(a + 1, 8)
             if bin(a ^ b).count("1") == 1]
    return PolyData(points=corners, lines=[np.array(e) for e in edges])


# ---------------------------------------------------------------------------
# sources
# ---------------------------------------------------------------------------

class ArraySource(PipelineNode):
    """Regular-grid scalar source wrapping a 3-D numpy array.

    The array is indexed [i, j, k] along (x, y, z), matching ogrid-style
    sampling.
    """

    KIND = "source"
    FACTORY_ID = "array_source"
    PROPERTIES = (
        PropertyDescriptor("origin", "float_triplet", (0.0, 0.0, 0.0)),
        PropertyDescriptor("spacing", "float_triplet", (1.0, 1.0, 1.0)),
    )
    DATA_PROPERTIES = frozenset(("origin", "spacing"))
    MLAB_SLOTS = ("scalars",)

    def __init__(self, scalar_data=None, name=None):
        super().__init__(name)
        self._scalar_data = None
        if scalar_data is not None:
            self.set_scalar_data(scalar_data, _propagate=False)

    @property
    def scalar_data(self):
        return self._scalar_data

    def set_scalar_data(self, array, _propagate=True):
        arr = np.asarray(array, dtype=np.float64)
        if arr.ndim != 3:
            raise ShapeError("scalar_data must be 3-D, got shape %r" % (arr.shape,))
        if self._scalar_data is not None and arr.shape != self._scalar_data.shape:
            raise ShapeError(
                "scalar_data shape %r does not match current %r"
                % (arr.shape, self._scalar_data.shape)
            )
        arr = arr.copy()
        arr.setflags(write=False)
        self._scalar_data = arr
        if _propagate:
            self.record_data_change()
            self.notify_data_changed()

    def set_slots(self, scalars):
        self.set_scalar_data(scalars, _propagate=False)

    def get_slot(self, name):
        return self._scalar_data

    def compute(self, input_dataset):
        if self._scalar_data is None:
            return []
        return [ImageData(
            self._scalar_data.shape,
            origin=self.get_property("origin"),
            spacing=self.get_property("spacing"),
            point_scalars=self._scalar_data.ravel(order="F"),
        )]

    def get_data_payload(self):
        if self._scalar_data is None:
            return None
        return {
            "shape": list(self._scalar_data.shape),
            "values": self._scalar_data.ravel(order="C").tolist(),
        }

    def set_data_payload(self, payload):
        arr = np.array(payload["values"], dtype=np.float64).reshape(payload["shape"])
        self.set_scalar_data(arr, _propagate=False)


class ParametricCurveSource(PipelineNode):
    """Source emitting the looped parametric curve as one polyline."""

    KIND = "source"
    FACTORY_ID = "parametric_curve_source"
    PROPERTIES = (
        PropertyDescriptor("n_turns", "int", 11, bounds=(0, 30)),
        PropertyDescriptor("sample_count", "int", 2000, bounds=(2, 1000000)),
    )
    DATA_PROPERTIES = frozenset(("n_turns", "sample_count"))

    def compute(self, input_dataset):
        return [curve(self.get_property("n_turns"),
                      self.get_property("sample_count"))]


class LineSource(PipelineNode):
    """Polyline source over explicit x, y, z coordinate arrays."""

    KIND = "source"
    FACTORY_ID = "line_source"
    MLAB_SLOTS = ("x", "y", "z")

    def __init__(self, x=None, y=None, z=None, name=None):
        super().__init__(name)
        self._coords = None
        if x is not None:
            self.set_slots(x=x, y=y, z=z)

    def set_slots(self, **arrays):
        current = dict(zip("xyz", self._coords)) if self._coords is not None else {}
        for slot, arr in arrays.items():
            current[slot] = np.asarray(arr, dtype=np.float64).ravel()
        missing = [s for s in "xyz" if s not in current]
        if missing:
            raise ShapeError("missing coordinate slots %r" % (missing,))
        n = len(current["x"])
        if any(len(current[s]) != n for s in "yz"):
            raise ShapeError("x, y, z must have equal lengths")
        if self._coords is not None and n != len(self._coords[0]):
            raise ShapeError("cannot change the number of points in place")
        if n < 2:
            raise ShapeError("need at least two points")
        self._coords = tuple(current[s].copy() for s in "xyz")

    def get_slot(self, name):
        if self._coords is None:
            return None
        return self._coords["xyz".index(name)]

    def compute(self, input_dataset):
        if self._coords is None:
            return []
        points = np.stack(self._coords, axis=1)
        return [PolyData(points=points, lines=[np.arange(len(points))])]

    def get_data_payload(self):
        if self._coords is None:
            return None
        return {s: c.tolist() for s, c in zip("xyz", self._coords)}

    def set_data_payload(self, payload):
        self.set_slots(**payload)


class TextArraySource(PipelineNode):
    """Reader for whitespace-separated text arrays (one z-slice of rows)."""

    KIND = "source"
    FACTORY_ID = "text_array_source"
    PROPERTIES = (PropertyDescriptor("file_name", "text", ""),)
    DATA_PROPERTIES = frozenset(("file_name",))

    def compute(self, input_dataset):
        path = self.get_property("file_name")
        if not path:
            return []
        arr = np.atleast_2d(np.loadtxt(path))
        nrows, ncols = arr.shape
        return [ImageData((ncols, nrows, 1), point_scalars=arr.ravel(order="C"))]


class VtkFileSource(PipelineNode):
    """Reader for legacy-format VTK dataset files."""

    KIND = "source"
    FACTORY_ID = "vtk_file_source"
    PROPERTIES = (PropertyDescriptor("file_name", "text", ""),)
    DATA_PROPERTIES = frozenset(("file_name",))

    def compute(self, input_dataset):
        path = self.get_property("file_name")
        if not path:
            return []
        with open(path, "r", encoding="ascii") as fh:
            return [vtkio.read_legacy(fh.read())]


# ---------------------------------------------------------------------------
# filters and modules
# ---------------------------------------------------------------------------

class PolyDataNormals(PipelineNode):
    """Filter adding smooth per-point normals to polygonal data."""

    KIND = "filter"
    FACTORY_ID = "poly_data_normals"

    def compute(self, input_dataset):
        if input_dataset is None:
            return []
        if not isinstance(input_dataset, PolyData):
            raise DatasetAttributeError("poly_data_normals needs polygonal input")
        return [compute_normals(input_dataset)]


class IsoSurface(PipelineNode):
    """Module extracting level surfaces of gridded scalars."""

    KIND = "module"
    FACTORY_ID = "iso_surface"
    PROPERTIES = (
        PropertyDescriptor("contours", "float_list", ()),
        PropertyDescriptor("auto_contours", "bool", True),
        PropertyDescriptor("n_auto", "int", 3, bounds=(1, 64)),
    )
    DATA_PROPERTIES = frozenset(("contours", "auto_contours", "n_auto"))

    def compute(self, input_dataset):
        if input_dataset is None:
            return []
        if not isinstance(input_dataset, ImageData):
            raise DatasetAttributeError("iso_surface needs image data input")
        if input_dataset.point_scalars is None:
            raise DatasetAttributeError("iso_surface needs point scalars")
        if self.get_property("auto_contours"):
            s = input_dataset.point_scalars
            levels = auto_levels(float(np.min(s)), float(np.max(s)),
                                 self.get_property("n_auto"))
        else:
            levels = list(self.get_property("contours"))
        meshes = [marching_cubes(input_dataset, lv) for lv in levels]
        return [_concat_meshes(meshes, input_dataset.scalars_name)]


def _concat_meshes(meshes, scalars_name):
    meshes = [m for m in meshes if m.n_points]
    if not meshes:
        return PolyData(point_scalars=np.zeros(0), scalars_name=scalars_name)
    points = np.concatenate([m.points for m in meshes])
    scalars = np.concatenate([m.point_scalars for m in meshes])
    tris = []
    offset = 0
    for m in meshes:
        tris.append(np.asarray(m.triangles) + offset)
        offset += m.n_points
    return PolyData(points=points, triangles=np.concatenate(tris),
                    point_scalars=scalars, scalars_name=scalars_name)


class Surface(PipelineNode):
    """Module presenting polygonal data as shaded surface or wireframe."""

    KIND = "module"
    FACTORY_ID = "surface"
    PROPERTIES = (
        PropertyDescriptor("representation", "enum", "surface",
                           choices=("surface", "wireframe")),
    )

    def compute(self, input_dataset):
        if input_dataset is None:
            return []
        if not isinstance(input_dataset, PolyData):
            raise DatasetAttributeError("surface needs polygonal input")
        return [input_dataset]


class Outline(PipelineNode):
    """Module drawing the wireframe bounding box of its input."""

    KIND = "module"
    FACTORY_ID = "outline"

    def compute(self, input_dataset):
        if input_dataset is None:
            return []
        return [outline_bounds(input_dataset)]

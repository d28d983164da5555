import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vizpipe import ImageData, PolyData
from vizpipe.errors import (
    ParseError,
    UnsupportedCellError,
    UnsupportedDatasetError,
    UnsupportedFormatError,
)
from vizpipe.vtkio import read_legacy, write_legacy

from conftest import ellipsoid_field, field_grid


STRUCTURED = """\
# vtk DataFile Version 2.0
sample volume
ASCII
DATASET STRUCTURED_POINTS
DIMENSIONS 3 2 2
ORIGIN -1.0 0.0 0.5
SPACING 0.5 1.0 2.0
POINT_DATA 12
SCALARS density float
LOOKUP_TABLE default
0 1 2 3 4 5
6 7 8 9 10 11
"""


def test_read_structured_points():
    d = read_legacy(STRUCTURED)
    assert isinstance(d, ImageData)
    assert d.dims == (3, 2, 2)
    assert d.origin == (-1.0, 0.0, 0.5)
    assert d.spacing == (0.5, 1.0, 2.0)
    assert d.scalars_name == "density"
    assert np.array_equal(d.point_scalars, np.arange(12.0))


def test_read_aspect_ratio_synonym():
    text = STRUCTURED.replace("SPACING", "ASPECT_RATIO")
    assert read_legacy(text).spacing == (0.5, 1.0, 2.0)


POLY = """\
# vtk DataFile Version 2.0
mesh
ASCII
DATASET POLYDATA
POINTS 4 float
0 0 0
1 0 0
0 1 0
0 0 1
POLYGONS 2 8
3 0 1 2
3 0 1 3
LINES 1 3
2 2 3
POINT_DATA 4
SCALARS temp float 1
LOOKUP_TABLE default
1.5 2.5 3.5 4.5
NORMALS n float
0 0 1
0 0 1
0 0 1
0 0 1
"""


def test_read_polydata():
    d = read_legacy(POLY)
    assert isinstance(d, PolyData)
    assert d.n_points == 4
    assert np.array_equal(d.triangles, [[0, 1, 2], [0, 1, 3]])
    assert len(d.lines) == 1 and np.array_equal(d.lines[0], [2, 3])
    assert np.array_equal(d.point_scalars, [1.5, 2.5, 3.5, 4.5])
    assert np.allclose(d.point_normals, [0, 0, 1])
    assert d.scalars_name == "temp"


def test_binary_refused():
    with pytest.raises(UnsupportedFormatError):
        read_legacy(STRUCTURED.replace("ASCII", "BINARY"))


def test_non_triangle_polygons_refused():
    text = POLY.replace("POLYGONS 2 8\n3 0 1 2\n3 0 1 3",
                        "POLYGONS 1 5\n4 0 1 2 3")
    with pytest.raises(UnsupportedCellError):
        read_legacy(text)


def test_parse_errors_carry_line_numbers():
    bad = STRUCTURED.replace("DIMENSIONS 3 2 2", "DIMENSIONS 3 x 2")
    with pytest.raises(ParseError) as exc:
        read_legacy(bad)
    assert exc.value.line == 5

    with pytest.raises(UnsupportedDatasetError):
        read_legacy("# vtk DataFile Version 2.0\nt\nASCII\nDATASET CUBES\n")


def test_missing_header_rejected():
    with pytest.raises(ParseError) as exc:
        read_legacy("hello\nworld\n")
    assert exc.value.line == 1


def test_truncated_file_rejected():
    truncated = "\n".join(STRUCTURED.splitlines()[:9]) + "\n"
    with pytest.raises(ParseError):
        read_legacy(truncated)


def test_write_read_image_data_exact():
    field = ellipsoid_field(7)
    d = field_grid(field, origin=(-10.0, -10.0, -10.0),
                   spacing=(0.3, 0.3, 0.3))
    rt = read_legacy(write_legacy(d))
    assert rt.dims == d.dims
    assert rt.origin == d.origin
    assert rt.spacing == d.spacing
    assert np.array_equal(rt.point_scalars, d.point_scalars)


def test_write_read_polydata_exact():
    d = read_legacy(POLY)
    rt = read_legacy(write_legacy(d))
    assert rt == d


def test_write_is_deterministic():
    d = read_legacy(POLY)
    assert write_legacy(d) == write_legacy(d)


# --- property-based round trips ---------------------------------------------

finite = st.floats(allow_nan=False, allow_infinity=False,
                   min_value=-1e12, max_value=1e12, width=64)
dims = st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))


@st.composite
def image_datasets(draw):
    nx, ny, nz = draw(dims)
    n = nx * ny * nz
    values = draw(st.lists(finite, min_size=n, max_size=n))
    origin = draw(st.tuples(finite, finite, finite))
    spacing = draw(st.tuples(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6),
                             st.floats(1e-6, 1e6)))
    return ImageData(dims=(nx, ny, nz), origin=origin, spacing=spacing,
                     point_scalars=np.array(values))


@st.composite
def poly_datasets(draw):
    n = draw(st.integers(3, 12))
    pts = draw(st.lists(st.tuples(finite, finite, finite),
                        min_size=n, max_size=n))
    n_tris = draw(st.integers(0, 8))
    tris = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1),
                                   st.integers(0, n - 1)),
                         min_size=n_tris, max_size=n_tris))
    with_scalars = draw(st.booleans())
    scalars = None
    if with_scalars:
        scalars = np.array(draw(st.lists(finite, min_size=n, max_size=n)))
    return PolyData(points=np.array(pts, dtype=np.float64).reshape(n, 3),
                    triangles=np.array(tris, dtype=np.int32).reshape(-1, 3),
                    point_scalars=scalars)


@given(image_datasets())
@settings(max_examples=60, deadline=None)
def test_image_round_trip_bit_exact(d):
    rt = read_legacy(write_legacy(d))
    assert rt.dims == d.dims
    assert rt.origin == d.origin and rt.spacing == d.spacing
    if d.point_scalars is None:
        assert rt.point_scalars is None
    else:
        assert np.array_equal(rt.point_scalars, d.point_scalars)


@given(poly_datasets())
@settings(max_examples=60, deadline=None)
def test_poly_round_trip_bit_exact(d):
    rt = read_legacy(write_legacy(d))
    assert rt == d


@given(st.text(max_size=400))
@settings(max_examples=300, deadline=None)
def test_fuzz_never_crashes_outside_parse_errors(text):
    try:
        read_legacy(text)
    except (ParseError, UnsupportedFormatError, UnsupportedCellError,
            UnsupportedDatasetError) as exc:
        if isinstance(exc, ParseError):
            assert isinstance(exc.line, int) and exc.line >= 1


@given(st.integers(0, 10**6), st.binary(max_size=200))
@settings(max_examples=120, deadline=None)
def test_fuzz_mutated_valid_files(seed, junk):
    rng = np.random.default_rng(seed)
    text = list(STRUCTURED if seed % 2 else POLY)
    for _ in range(rng.integers(1, 6)):
        pos = int(rng.integers(0, len(text)))
        text[pos] = chr(int(rng.integers(32, 127)))
    mutated = "".join(text) + junk.decode("latin-1")
    try:
        read_legacy(mutated)
    except (ParseError, UnsupportedFormatError, UnsupportedCellError,
            UnsupportedDatasetError):
        pass

"""Reader and writer for the legacy ASCII VTK file format.

Only the two in-scope dataset kinds are handled: STRUCTURED_POINTS (read as
:class:`ImageData`) and POLYDATA with triangles and polylines (read as
:class:`PolyData`).  The parser is total: any input either parses or raises
:class:`ParseError` carrying the offending line number.
"""

import numpy as np

from .dataset import ImageData, PolyData
from .errors import (
    ParseError,
    UnsupportedCellError,
    UnsupportedDatasetError,
    UnsupportedFormatError,
)

__all__ = ["read_legacy", "write_legacy"]

VERSION_LINE = "# vtk DataFile Version 2.0"


class _Tokens:
    """Whitespace token stream that remembers line numbers for errors."""

    def __init__(self, text):
        self.items = []  # (token, line_number)
        for lineno, line in enumerate(text.splitlines(), start=1):
            for tok in line.split():
                self.items.append((tok, lineno))
        self.pos = 0
        self.last_line = 1

    def next(self, what="token"):
        if self.pos >= len(self.items):
            raise ParseError("unexpected end of file, expected %s" % what,
                             self.last_line)
        tok, line = self.items[self.pos]
        self.pos += 1
        self.last_line = line
        return tok

    def peek(self):
        return self.items[self.pos][0] if self.pos < len(self.items) else None

    def next_int(self, what="integer"):
        tok = self.next(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError("expected %s, got %r" % (what, tok), self.last_line)

    def next_float(self, what="number"):
        tok = self.next(what)
        try:
            return float(tok)
        except ValueError:
            raise ParseError("expected %s, got %r" % (what, tok), self.last_line)

    def floats(self, n, what="number"):
        return np.array([self.next_float(what) for _ in range(n)])

    def ints(self, n, what="integer"):
        return [self.next_int(what) for _ in range(n)]


def read_legacy(text):
    """Parse legacy VTK ASCII into an ImageData or PolyData."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# vtk DataFile"):
        raise ParseError("missing '# vtk DataFile' header", 1)
    if len(lines) < 2:
        raise ParseError("missing title line", 2)
    # two blank lines stand in for the header/title so token line numbers
    # match the original file
    toks = _Tokens("\n\n" + "\n".join(lines[2:]))

    def err(msg):
        return ParseError(msg, toks.last_line)

    fmt = toks.next("format tag")
    if fmt.upper() == "BINARY":
        raise UnsupportedFormatError("BINARY files are not supported")
    if fmt.upper() != "ASCII":
        raise err("expected ASCII format tag, got %r" % fmt)

    kw = toks.next("DATASET keyword")
    if kw.upper() != "DATASET":
        raise err("expected DATASET, got %r" % kw)
    kind = toks.next("dataset type").upper()
    try:
        if kind == "STRUCTURED_POINTS":
            return _read_structured_points(toks)
        if kind == "POLYDATA":
            return _read_polydata(toks)
    except (ParseError, UnsupportedCellError, UnsupportedDatasetError,
            UnsupportedFormatError):
        raise
    except Exception as exc:
        raise err(str(exc)) from exc
    raise UnsupportedDatasetError("unsupported dataset type %r" % kind)


def _read_point_data(toks, n_points):
    """Optional POINT_DATA section: SCALARS and/or NORMALS arrays."""
    scalars = None
    scalars_name = "scalars"
    normals = None
    if toks.peek() is None:
        return scalars, scalars_name, normals
    kw = toks.next().upper()
    if kw != "POINT_DATA":
        raise ParseError("expected POINT_DATA, got %r" % kw, toks.last_line)
    n = toks.next_int("POINT_DATA count")
    if n != n_points:
        raise ParseError(
            "POINT_DATA count %d does not match %d points" % (n, n_points),
            toks.last_line,
        )
    while toks.peek() is not None:
        section = toks.next().upper()
        if section == "SCALARS":
            scalars_name = toks.next("scalars name")
            toks.next("scalars type")
            if toks.peek() and toks.peek().isdigit():
                ncomp = toks.next_int("component count")
                if ncomp != 1:
                    raise ParseError("only 1-component scalars supported",
                                     toks.last_line)
            lk = toks.next("LOOKUP_TABLE")
            if lk.upper() != "LOOKUP_TABLE":
                raise ParseError("expected LOOKUP_TABLE, got %r" % lk,
                                 toks.last_line)
            toks.next("lookup table name")
            scalars = toks.floats(n, "scalar value")
        elif section == "NORMALS":
            toks.next("normals name")
            toks.next("normals type")
            normals = toks.floats(3 * n, "normal component").reshape(n, 3)
        else:
            raise ParseError("unsupported point-data section %r" % section,
                             toks.last_line)
    return scalars, scalars_name, normals


def _read_structured_points(toks):
    dims = origin = spacing = None
    while toks.peek() is not None and toks.peek().upper() in (
        "DIMENSIONS", "ORIGIN", "SPACING", "ASPECT_RATIO"
    ):
        kw = toks.next().upper()
        if kw == "DIMENSIONS":
            dims = toks.ints(3, "dimension")
        elif kw == "ORIGIN":
            origin = toks.floats(3, "origin component")
        else:  # SPACING / ASPECT_RATIO
            spacing = toks.floats(3, "spacing component")
    if dims is None:
        raise ParseError("missing DIMENSIONS", toks.last_line)
    n = int(np.prod(dims)) if min(dims) > 0 else -1
    if n < 1:
        raise ParseError("invalid DIMENSIONS %r" % (dims,), toks.last_line)
    scalars, scalars_name, normals = _read_point_data(toks, n)
    if normals is not None:
        raise ParseError("NORMALS are not supported on structured points",
                         toks.last_line)
    return ImageData(
        dims,
        origin=tuple(origin) if origin is not None else (0.0, 0.0, 0.0),
        spacing=tuple(spacing) if spacing is not None else (1.0, 1.0, 1.0),
        point_scalars=scalars,
        scalars_name=scalars_name,
    )


def _read_polydata(toks):
    kw = toks.next("POINTS")
    if kw.upper() != "POINTS":
        raise ParseError("expected POINTS, got %r" % kw, toks.last_line)
    n = toks.next_int("point count")
    if n < 0:
        raise ParseError("negative point count", toks.last_line)
    toks.next("points type")
    points = toks.floats(3 * n, "coordinate").reshape(n, 3)

    triangles = []
    lines = []
    while toks.peek() is not None and toks.peek().upper() in ("POLYGONS", "LINES"):
        section = toks.next().upper()
        n_cells = toks.next_int("cell count")
        toks.next_int("cell list size")
        if n_cells < 0:
            raise ParseError("negative cell count", toks.last_line)
        for _ in range(n_cells):
            count = toks.next_int("cell point count")
            if section == "POLYGONS" and count != 3:
                raise UnsupportedCellError(
                    "only triangles are supported, got a %d-gon" % count
                )
            if count < 0:
                raise ParseError("negative cell size", toks.last_line)
            ids = toks.ints(count, "point index")
            if any(not 0 <= i < n for i in ids):
                raise ParseError("point index out of range", toks.last_line)
            if section == "POLYGONS":
                triangles.append(ids)
            else:
                lines.append(ids)

    scalars, scalars_name, normals = _read_point_data(toks, n)
    if normals is not None:
        lengths = np.linalg.norm(normals, axis=1)
        if not np.allclose(lengths, 1.0, atol=1e-6):
            raise ParseError("normals must be unit length", toks.last_line)
    return PolyData(points=points, triangles=triangles or None, lines=lines,
                    point_scalars=scalars, point_normals=normals,
                    scalars_name=scalars_name)


def _fmt(value):
    """Shortest round-trip decimal for a float."""
    return repr(float(value))


def _fmt_row(values):
    return " ".join(_fmt(v) for v in values)


def write_legacy(d, title="vizpipe dataset"):
    """Serialize a dataset to legacy VTK ASCII; re-readable bit-exactly."""
    out = [VERSION_LINE, title.splitlines()[0] if title else "", "ASCII"]
    if isinstance(d, ImageData):
        out.append("DATASET STRUCTURED_POINTS")
        out.append("DIMENSIONS %d %d %d" % d.dims)
        out.append("ORIGIN " + _fmt_row(d.origin))
        out.append("SPACING " + _fmt_row(d.spacing))
        if d.point_scalars is not None:
            out.append("POINT_DATA %d" % d.n_points)
            out.append("SCALARS %s double 1" % d.scalars_name)
            out.append("LOOKUP_TABLE default")
            out.extend(_fmt(v) for v in d.point_scalars)
    elif isinstance(d, PolyData):
        out.append("DATASET POLYDATA")
        out.append("POINTS %d double" % d.n_points)
        out.extend(_fmt_row(p) for p in d.points)
        if len(d.triangles):
            out.append("POLYGONS %d %d" % (len(d.triangles), 4 * len(d.triangles)))
            out.extend("3 %d %d %d" % tuple(t) for t in d.triangles)
        if d.lines:
            size = sum(1 + len(ln) for ln in d.lines)
            out.append("LINES %d %d" % (len(d.lines), size))
            out.extend(
                "%d %s" % (len(ln), " ".join(str(i) for i in ln)) for ln in d.lines
            )
        sections = []
        if d.point_scalars is not None:
            sections.append("SCALARS %s double 1" % d.scalars_name)
            sections.append("LOOKUP_TABLE default")
            sections.extend(_fmt(v) for v in d.point_scalars)
        if d.point_normals is not None:
            sections.append("NORMALS normals double")
            sections.extend(_fmt_row(nrm) for nrm in d.point_normals)
        if sections:
            out.append("POINT_DATA %d" % d.n_points)
            out.extend(sections)
    else:
        raise UnsupportedDatasetError("cannot write %r" % type(d).__name__)
    return "\n".join(out) + "\n"

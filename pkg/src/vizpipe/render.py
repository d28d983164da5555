"""Headless rendering: orbit camera, z-buffered software rasterizer to PNG,
and X3D scene export.

The rasterizer uses integer-snapped edge functions (1/16 pixel) so repeated
renders of the same scene are bitwise identical.  Shading is a single
headlight with a clamped Lambert term 0.2 + 0.8*max(0, n.l).
"""

import math
import struct
import zlib
from dataclasses import dataclass
from xml.etree import ElementTree

import numpy as np

from .dataset import PolyData
from .errors import DatasetParamError

__all__ = [
    "Camera", "RenderableActor", "FrameSpec",
    "collect_actors", "resolve_camera", "render_frame",
    "encode_png", "export_x3d",
]

FLAT_COLOR = (0.8, 0.8, 0.8, 1.0)
SNAP = 16  # subpixel snap factor for deterministic edge functions


@dataclass
class Camera:
    focal_point: tuple = (0.0, 0.0, 0.0)
    azimuth: float = 45.0
    elevation: float = 30.0
    distance: float = 10.0
    fov: float = 30.0

    @property
    def position(self):
        az = math.radians(self.azimuth)
        el = math.radians(self.elevation)
        direction = (
            math.cos(el) * math.sin(az),
            -math.cos(el) * math.cos(az),
            math.sin(el),
        )
        return tuple(f + self.distance * d for f, d in zip(self.focal_point, direction))

    def basis(self):
        """(right, up, forward) orthonormal camera axes."""
        pos = np.array(self.position)
        forward = np.array(self.focal_point) - pos
        forward = forward / np.linalg.norm(forward)
        world_up = np.array([0.0, 0.0, 1.0])
        right = np.cross(forward, world_up)
        right = right / np.linalg.norm(right)
        up = np.cross(right, forward)
        return right, up, forward


@dataclass
class RenderableActor:
    mesh: PolyData
    colors: np.ndarray  # (N, 4) RGBA in [0, 1]
    representation: str = "surface"  # surface | wireframe | points


@dataclass
class FrameSpec:
    width: int = 640
    height: int = 480
    background: tuple = (0.1, 0.1, 0.2, 1.0)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DatasetParamError("frame size must be at least 1x1")


def collect_actors(scene):
    """One actor per module with drawable output, in tree pre-order."""
    actors = []
    for node in scene.walk():
        if node.KIND != "module" or node.status != "ok":
            continue
        if not node.outputs:
            continue
        mesh = node.outputs[0]
        if not isinstance(mesh, PolyData) or mesh.n_points == 0:
            continue
        if not len(mesh.triangles) and not mesh.lines:
            continue
        if mesh.point_scalars is not None and node.parent is not None \
                and node.parent.KIND == "module_manager":
            colors = node.parent.lookup_table.map(mesh.point_scalars)
        else:
            colors = np.tile(FLAT_COLOR, (mesh.n_points, 1))
        representation = "surface"
        if not len(mesh.triangles):
            representation = "wireframe"
        try:
            rep = node.get_property("representation")
        except Exception:
            rep = None
        if rep is not None:
            representation = rep
        actors.append(RenderableActor(mesh, np.asarray(colors, dtype=np.float64),
                                      representation))
    return actors


def resolve_camera(scene, actors):
    """Camera from the scene's properties; distance 0 means auto-fit."""
    cam = Camera(
        focal_point=scene.get_property("focal_point"),
        azimuth=scene.get_property("azimuth"),
        elevation=scene.get_property("elevation"),
        distance=scene.get_property("distance"),
        fov=scene.get_property("fov"),
    )
    if cam.distance <= 0.0:
        points = [a.mesh.points for a in actors if a.mesh.n_points]
        if points:
            allpts = np.concatenate(points)
            lo = allpts.min(axis=0)
            hi = allpts.max(axis=0)
            center = (lo + hi) / 2.0
            radius = float(np.linalg.norm(hi - lo)) / 2.0 or 1.0
            cam.focal_point = tuple(center)
            cam.distance = 1.5 * radius / math.tan(math.radians(cam.fov) / 2.0)
        else:
            cam.distance = 10.0
    return cam


# ---------------------------------------------------------------------------
# rasterization
# ---------------------------------------------------------------------------

def _shade(points, normals, colors, cam_pos):
    """Per-vertex headlight shading; alpha passes through."""
    to_cam = cam_pos - points
    lengths = np.linalg.norm(to_cam, axis=1)
    lengths[lengths == 0] = 1.0
    light = to_cam / lengths[:, None]
    lambert = np.clip(np.sum(normals * light, axis=1), 0.0, None)
    intensity = 0.2 + 0.8 * lambert
    shaded = colors.copy()
    shaded[:, :3] *= intensity[:, None]
    return shaded


def _facet_normals(points, tris):
    p0, p1, p2 = points[tris[:, 0]], points[tris[:, 1]], points[tris[:, 2]]
    n = np.cross(p1 - p0, p2 - p0)
    lengths = np.linalg.norm(n, axis=1)
    lengths[lengths == 0] = 1.0
    return n / lengths[:, None]


class _Frame:
    def __init__(self, spec):
        self.spec = spec
        bg = np.array(spec.background) * 255.0
        self.pixels = np.empty((spec.height, spec.width, 4), dtype=np.uint8)
        self.pixels[:] = np.round(bg).astype(np.uint8)
        self.depth = np.full((spec.height, spec.width), np.inf)


def _project(points_cam, fov, spec):
    """Camera-space points -> (pixel x, pixel y, depth); depth > 0 in front."""
    depth = points_cam[:, 2]
    f = 1.0 / math.tan(math.radians(fov) / 2.0)
    aspect = spec.width / spec.height
    with np.errstate(divide="ignore", invalid="ignore"):
        x_ndc = points_cam[:, 0] * f / (aspect * depth)
        y_ndc = points_cam[:, 1] * f / depth
    px = (x_ndc * 0.5 + 0.5) * spec.width
    py = (0.5 - y_ndc * 0.5) * spec.height
    return px, py, depth


def _clip_near(poly, near):
    """Sutherland-Hodgman clip of a camera-space polygon against depth=near.

    `poly` is a list of (xyz, attrs) with attrs = RGBA; returns the clipped
    polygon in the same form.
    """
    out = []
    n = len(poly)
    for i in range(n):
        a_pos, a_att = poly[i]
        b_pos, b_att = poly[(i + 1) % n]
        a_in = a_pos[2] >= near
        b_in = b_pos[2] >= near
        if a_in:
            out.append((a_pos, a_att))
        if a_in != b_in:
            t = (near - a_pos[2]) / (b_pos[2] - a_pos[2])
            out.append((a_pos + t * (b_pos - a_pos), a_att + t * (b_att - a_att)))
    return out


def _raster_triangle(frame, cam, pts_cam, attrs):
    near = cam.distance * 1e-3
    if min(p[2] for p in pts_cam) < near:
        poly = _clip_near(list(zip(pts_cam, attrs)), near)
        if len(poly) < 3:
            return
        pts_cam = [p for p, _ in poly]
        attrs = [a for _, a in poly]
        for i in range(1, len(pts_cam) - 1):
            _raster_clipped(frame, cam,
                            [pts_cam[0], pts_cam[i], pts_cam[i + 1]],
                            [attrs[0], attrs[i], attrs[i + 1]])
    else:
        _raster_clipped(frame, cam, pts_cam, attrs)


def _raster_clipped(frame, cam, pts_cam, attrs):
    spec = frame.spec
    arr = np.array(pts_cam)
    px, py, depth = _project(arr, cam.fov, spec)
    # snap to 1/SNAP pixel so edge functions are exact integers
    xs = np.round(px * SNAP).astype(np.int64)
    ys = np.round(py * SNAP).astype(np.int64)

    area = (xs[1] - xs[0]) * (ys[2] - ys[0]) - (xs[2] - xs[0]) * (ys[1] - ys[0])
    if area == 0:
        return
    x_lo = max(int(min(xs)) // SNAP, 0)
    x_hi = min(int(max(xs)) // SNAP + 1, spec.width - 1)
    y_lo = max(int(min(ys)) // SNAP, 0)
    y_hi = min(int(max(ys)) // SNAP + 1, spec.height - 1)
    if x_lo > x_hi or y_lo > y_hi:
        return

    gx = (np.arange(x_lo, x_hi + 1, dtype=np.int64) * SNAP) + SNAP // 2
    gy = (np.arange(y_lo, y_hi + 1, dtype=np.int64) * SNAP) + SNAP // 2
    cx = gx[None, :]
    cy = gy[:, None]

    def edge(i, j):
        return (xs[j] - xs[i]) * (cy - ys[i]) - (ys[j] - ys[i]) * (cx - xs[i])

    w0 = edge(1, 2)
    w1 = edge(2, 0)
    w2 = edge(0, 1)
    if area > 0:
        inside = (w0 >= 0) & (w1 >= 0) & (w2 >= 0)
    else:
        inside = (w0 <= 0) & (w1 <= 0) & (w2 <= 0)
    if not inside.any():
        return

    b0 = w0 / area
    b1 = w1 / area
    b2 = w2 / area
    inv_d = np.array([1.0 / d for d in depth])
    inv_depth = b0 * inv_d[0] + b1 * inv_d[1] + b2 * inv_d[2]
    att = np.array(attrs)  # (3, 4)
    num = (b0[..., None] * att[0] * inv_d[0]
           + b1[..., None] * att[1] * inv_d[1]
           + b2[..., None] * att[2] * inv_d[2])

    ydx, xdx = np.nonzero(inside)
    pix_y = ydx + y_lo
    pix_x = xdx + x_lo
    d = 1.0 / inv_depth[ydx, xdx]
    closer = d < frame.depth[pix_y, pix_x]
    if not closer.any():
        return
    pix_y = pix_y[closer]
    pix_x = pix_x[closer]
    d = d[closer]
    rgba = num[ydx, xdx][closer] * d[:, None]
    frame.depth[pix_y, pix_x] = d
    frame.pixels[pix_y, pix_x] = np.round(np.clip(rgba, 0.0, 1.0) * 255.0).astype(np.uint8)


def _raster_line(frame, cam, a_cam, b_cam, a_att, b_att):
    near = cam.distance * 1e-3
    a_in, b_in = a_cam[2] >= near, b_cam[2] >= near
    if not a_in and not b_in:
        return
    if a_in != b_in:
        t = (near - a_cam[2]) / (b_cam[2] - a_cam[2])
        mid = a_cam + t * (b_cam - a_cam)
        mid_att = a_att + t * (b_att - a_att)
        if a_in:
            b_cam, b_att = mid, mid_att
        else:
            a_cam, a_att = mid, mid_att
    spec = frame.spec
    arr = np.array([a_cam, b_cam])
    px, py, depth = _project(arr, cam.fov, spec)
    x0, y0 = int(round(px[0])), int(round(py[0]))
    x1, y1 = int(round(px[1])), int(round(py[1]))
    steps = max(abs(x1 - x0), abs(y1 - y0))
    ts = np.linspace(0.0, 1.0, steps + 1)
    xs = np.round(x0 + (x1 - x0) * ts).astype(np.int64)
    ys = np.round(y0 + (y1 - y0) * ts).astype(np.int64)
    inv_d = (1.0 / depth[0]) + ((1.0 / depth[1]) - (1.0 / depth[0])) * ts
    att = (np.outer(1 - ts, a_att / depth[0]) + np.outer(ts, b_att / depth[1]))
    keep = (xs >= 0) & (xs < spec.width) & (ys >= 0) & (ys < spec.height)
    xs, ys, inv_d, att = xs[keep], ys[keep], inv_d[keep], att[keep]
    d = 1.0 / inv_d
    # small bias keeps lines visible on top of their own surface
    closer = d * (1.0 - 1e-4) < frame.depth[ys, xs]
    xs, ys, d, att = xs[closer], ys[closer], d[closer], att[closer]
    rgba = att * d[:, None]
    frame.depth[ys, xs] = d
    frame.pixels[ys, xs] = np.round(np.clip(rgba, 0.0, 1.0) * 255.0).astype(np.uint8)


def render_frame(actors, camera, spec):
    """Render actors to an RGBA8 pixel grid (height, width, 4)."""
    frame = _Frame(spec)
    pos = np.array(camera.position)
    right, up, forward = camera.basis()
    basis = np.stack([right, up, -forward])  # rows: camera axes

    for actor in actors:
        mesh = actor.mesh
        pts = mesh.points
        cam_pts = (pts - pos) @ basis.T
        cam_pts = np.column_stack([cam_pts[:, 0], cam_pts[:, 1], -cam_pts[:, 2]])
        # depth column: positive in front of the camera
        colors = actor.colors

        if actor.representation == "surface" and len(mesh.triangles):
            tris = mesh.triangles
            if mesh.point_normals is not None:
                shaded = _shade(pts, mesh.point_normals, colors, pos)
                for t in tris:
                    _raster_triangle(frame, camera, [cam_pts[i] for i in t],
                                     [shaded[i] for i in t])
            else:
                fn = _facet_normals(pts, tris)
                for ti, t in enumerate(tris):
                    tri_pts = pts[t]
                    shaded = _shade(tri_pts, np.tile(fn[ti], (3, 1)),
                                    colors[t], pos)
                    _raster_triangle(frame, camera, [cam_pts[i] for i in t],
                                     list(shaded))
        elif actor.representation == "points":
            for i in range(len(pts)):
                _raster_line(frame, camera, cam_pts[i], cam_pts[i],
                             colors[i], colors[i])
        else:  # wireframe: triangle edges plus polylines, unshaded colors
            seen = set()
            for t in mesh.triangles:
                for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                    key = (min(a, b), max(a, b))
                    if key in seen:
                        continue
                    seen.add(key)
                    _raster_line(frame, camera, cam_pts[a], cam_pts[b],
                                 colors[a], colors[b])
            for line in mesh.lines:
                for a, b in zip(line[:-1], line[1:]):
                    _raster_line(frame, camera, cam_pts[a], cam_pts[b],
                                 colors[a], colors[b])
    return frame.pixels


# ---------------------------------------------------------------------------
# encoders
# ---------------------------------------------------------------------------

def encode_png(image):
    """Minimal deterministic RGBA8 PNG encoder (non-interlaced)."""
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 3 or image.shape[2] != 4:
        raise DatasetParamError("expected an RGBA8 image (H, W, 4)")
    height, width = image.shape[:2]

    def chunk(tag, payload):
        data = tag + payload
        return (struct.pack(">I", len(payload)) + data
                + struct.pack(">I", zlib.crc32(data) & 0xFFFFFFFF))

    raw = b"".join(b"\x00" + image[row].tobytes() for row in range(height))
    return b"".join([
        b"\x89PNG\r\n\x1a\n",
        chunk(b"IHDR", struct.pack(">IIBBBBB", width, height, 8, 6, 0, 0, 0)),
        chunk(b"IDAT", zlib.compress(raw, 9)),
        chunk(b"IEND", b""),
    ])


def _fmt_floats(values, nd=6):
    return " ".join(("%.*g" % (nd, v)) for v in values)


def _axis_angle(camera):
    """Rotation taking X3D's default view (-z forward, +y up) to the camera."""
    right, up, forward = camera.basis()
    rot = np.column_stack([right, up, -forward])
    angle = math.acos(max(-1.0, min(1.0, (np.trace(rot) - 1.0) / 2.0)))
    if abs(angle) < 1e-12:
        return (0.0, 0.0, 1.0, 0.0)
    if abs(angle - math.pi) < 1e-9:
        # axis from the symmetric part
        axis = np.sqrt(np.maximum(np.diag(rot) + 1.0, 0.0) / 2.0)
        for i in range(3):
            if axis[i] > 1e-6:
                break
        axis = axis * np.sign([rot[j][i] + rot[i][j] if j != i else 1.0
                               for j in range(3)])
    else:
        axis = np.array([
            rot[2][1] - rot[1][2],
            rot[0][2] - rot[2][0],
            rot[1][0] - rot[0][1],
        ]) / (2.0 * math.sin(angle))
    return (float(axis[0]), float(axis[1]), float(axis[2]), float(angle))


def export_x3d(actors, camera):
    """Well-formed X3D 3.0 XML with one IndexedFaceSet per surface actor."""
    root = ElementTree.Element("X3D", version="3.0", profile="Immersive")
    scene = ElementTree.SubElement(root, "Scene")
    ax, ay, az, angle = _axis_angle(camera)
    ElementTree.SubElement(scene, "Viewpoint", {
        "position": _fmt_floats(camera.position),
        "orientation": _fmt_floats((ax, ay, az, angle)),
        "centerOfRotation": _fmt_floats(camera.focal_point),
        "fieldOfView": "%.6g" % math.radians(camera.fov),
    })
    for actor in actors:
        mesh = actor.mesh
        shape = ElementTree.SubElement(scene, "Shape")
        ElementTree.SubElement(
            ElementTree.SubElement(shape, "Appearance"), "Material"
        )
        coords = _fmt_floats(mesh.points.ravel())
        color_values = _fmt_floats(actor.colors[:, :3].ravel())
        if actor.representation == "surface" and len(mesh.triangles):
            index = " ".join(
                "%d %d %d -1" % tuple(t) for t in mesh.triangles
            )
            geom = ElementTree.SubElement(shape, "IndexedFaceSet", {
                "coordIndex": index,
                "solid": "false",
                "colorPerVertex": "true",
            })
        else:
            parts = [
                " ".join(str(i) for i in line) + " -1" for line in mesh.lines
            ]
            parts.extend("%d %d %d %d -1" % (t[0], t[1], t[2], t[0])
                         for t in mesh.triangles)
            geom = ElementTree.SubElement(shape, "IndexedLineSet", {
                "coordIndex": " ".join(parts),
                "colorPerVertex": "true",
            })
        ElementTree.SubElement(geom, "Coordinate", point=coords)
        ElementTree.SubElement(geom, "Color", color=color_values)
    header = '<?xml version="1.0" encoding="UTF-8"?>\n'
    return header + ElementTree.tostring(root, encoding="unicode")

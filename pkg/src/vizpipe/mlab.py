"""High-level plotting facade: one-call builders over an implicit engine,
a scripting namespace generated from the registry, and in-place animation
through ``mlab_source`` handles."""

import numpy as np

from .engine import Engine
from .errors import RegistryError, ShapeError, UnknownSlotError
from .kernels import ArraySource, IsoSurface, LineSource, Surface
from .pipeline import add_child
from .render import collect_actors, encode_png, render_frame, resolve_camera, FrameSpec

__all__ = ["MlabContext", "mlab", "contour3d", "plot3d", "figure",
           "save_png", "pipeline"]


class MlabSource:
    """Handle onto the arrays a builder used; assigning triggers one update."""

    def __init__(self, node):
        object.__setattr__(self, "_node", node)

    @property
    def slots(self):
        return tuple(self._node.MLAB_SLOTS)

    def set(self, **arrays):
        """Replace named data slots atomically: one downstream propagation."""
        node = self._node
        for name in arrays:
            if name not in node.MLAB_SLOTS:
                raise UnknownSlotError("no data slot named %r" % (name,))
        node.set_slots(**{k: np.asarray(v) for k, v in arrays.items()})
        node.record_data_change()
        node.notify_data_changed()

    def get(self, name):
        if name not in self._node.MLAB_SLOTS:
            raise UnknownSlotError("no data slot named %r" % (name,))
        return self._node.get_slot(name)

    def __getattr__(self, name):
        if name in self._node.MLAB_SLOTS:
            return self._node.get_slot(name)
        raise AttributeError(name)

    def __setattr__(self, name, value):
        self.set(**{name: value})


class _PipelineNamespace:
    """mlab.pipeline: node builders generated from the registry names."""

    def __init__(self, context):
        self._context = context

    def scalar_field(self, scalars, origin=None, spacing=None):
        """Create an array source from regularly spaced volumetric data."""
        ctx = self._context
        arr = np.asarray(scalars, dtype=np.float64)
        if arr.ndim != 3:
            raise ShapeError("scalar_field expects a 3-D array, got %r" % (arr.shape,))
        src = ArraySource(scalar_data=arr)
        if origin is not None:
            src.set_property("origin", tuple(origin))
        if spacing is not None:
            src.set_property("spacing", tuple(spacing))
        ctx.figure()
        ctx.engine().add_source(src)
        src.mlab_source = MlabSource(src)
        return src

    def __getattr__(self, name):
        context = self._context
        registry = context.engine().registry
        for meta in registry.all_metadata():
            if meta.factory_id == name:
                def build(parent=None, _meta=meta, **properties):
                    return context.build_node(_meta, parent, properties)
                build.__name__ = name
                return build
        raise RegistryError("no pipeline function named %r" % (name,))

    def __dir__(self):
        names = {m.factory_id for m in self._context.engine().registry.all_metadata()}
        names.add("scalar_field")
        return sorted(names)


class MlabContext:
    """An implicit engine plus the plotting functions bound to it."""

    def __init__(self, engine=None, offscreen=True):
        self._engine = engine
        self.offscreen = offscreen
        self.pipeline = _PipelineNamespace(self)

    def engine(self):
        if self._engine is None:
            self._engine = Engine()
        return self._engine

    def figure(self):
        """The current scene, creating engine and scene on first use."""
        engine = self.engine()
        if engine.current_scene is None:
            engine.new_scene()
        return engine.current_scene

    def build_node(self, meta, parent, properties):
        engine = self.engine()
        node = engine.registry.create_by_name(meta.factory_id)
        for name, value in properties.items():
            node.set_property(name, value)
        if meta.kind == "source":
            self.figure()
            engine.add_source(node)
        elif parent is not None:
            add_child(parent, node)
            if meta.kind == "filter":
                engine.current_object = node
        elif meta.kind == "filter":
            engine.add_filter(node)
        else:
            engine.add_module(node)
        return node

    # --- one-call builders -------------------------------------------------

    def contour3d(self, scalars, contours=None, colormap_name=None):
        """Iso-contour a 3-D scalar array; returns the live module handle."""
        self.figure()
        src = self.pipeline.scalar_field(scalars)
        module = IsoSurface()
        if contours is not None:
            module.set_property("auto_contours", False)
            module.set_property("contours", tuple(float(c) for c in contours))
        self.engine().add_module(module)
        if colormap_name is not None:
            module.parent.set_property("colormap_name", colormap_name)
        module.mlab_source = MlabSource(src)
        return module

    def plot3d(self, x, y, z):
        """Draw a polyline through the points (x[i], y[i], z[i])."""
        x = np.asarray(x, dtype=np.float64).ravel()
        y = np.asarray(y, dtype=np.float64).ravel()
        z = np.asarray(z, dtype=np.float64).ravel()
        if not (len(x) == len(y) == len(z)):
            raise ShapeError("x, y, z must have equal lengths")
        if len(x) < 2:
            raise ShapeError("need at least two points")
        self.figure()
        src = LineSource(x=x, y=y, z=z)
        self.engine().add_source(src)
        module = Surface()
        module.set_property("representation", "wireframe")
        self.engine().add_module(module)
        module.mlab_source = MlabSource(src)
        return module

    def pipeline_call(self, name, *args, **kwargs):
        """Name-based node construction: the registry's scripting namespace."""
        if name == "scalar_field":
            return self.pipeline.scalar_field(*args, **kwargs)
        builder = getattr(self.pipeline, name)
        return builder(*args, **kwargs)

    # --- output ---------------------------------------------------------------

    def render(self, width=640, height=480):
        scene = self.figure()
        actors = collect_actors(scene)
        camera = resolve_camera(scene, actors)
        spec = FrameSpec(width, height, scene.get_property("background"))
        image = render_frame(actors, camera, spec)
        scene.render_dirty = False
        return image

    def save_png(self, path, width=640, height=480):
        data = encode_png(self.render(width, height))
        with open(path, "wb") as fh:
            fh.write(data)
        return path


#: the default module-level context, mirroring `from mayavi import mlab` use
mlab = MlabContext()

contour3d = mlab.contour3d
plot3d = mlab.plot3d
figure = mlab.figure
save_png = mlab.save_png
pipeline = mlab.pipeline

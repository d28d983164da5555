"""The pipeline tree and its two-event downstream propagation protocol.

Nodes form a strict tree rooted at scenes: scene -> source -> (filters) ->
module-manager -> modules.  Structural changes fire ``pipeline_changed`` and
data mutations fire ``data_changed``; both walk the originating node's
subtree in pre-order, recomputing cached outputs on the way down.  Events
never travel upstream.
"""

import numpy as np

from .errors import PipelineStructureError
from .lut import LookupTable
from .observable import ObservableObject, PropertyDescriptor

__all__ = [
    "PipelineNode",
    "Scene",
    "ModuleManager",
    "add_child",
    "remove_child",
    "reparent",
    "propagate",
]

LEGAL_CHILDREN = {
    "scene": ("source",),
    "source": ("filter", "module_manager"),
    "filter": ("filter", "module_manager"),
    "module_manager": ("module",),
    "module": (),
}


class PipelineNode(ObservableObject):
    KIND = None  # one of LEGAL_CHILDREN's keys
    FACTORY_ID = None
    #: properties whose change invalidates this node's outputs
    DATA_PROPERTIES = frozenset()

    def __init__(self, name=None):
        super().__init__()
        self.name = name or type(self).__name__
        self.parent = None
        self.children = []
        self.outputs = []
        self.status = "ok"
        self.error_message = None
        self.disposed = False
        self.engine = None
        #: number of recomputes, for propagation tests
        self.update_count = 0
        self.subscribe(self._on_own_change)

    # --- structure --------------------------------------------------------

    def scene_root(self):
        node = self
        while node.parent is not None:
            node = node.parent
        return node if node.KIND == "scene" else None

    def is_ancestor_of(self, other):
        node = other
        while node is not None:
            if node is self:
                return True
            node = node.parent
        return False

    def walk(self):
        """Pre-order traversal of this subtree."""
        yield self
        for child in self.children:
            yield from child.walk()

    def input_dataset(self):
        if self.parent is None:
            return None
        return self.parent.outputs[0] if self.parent.outputs else None

    # --- computation --------------------------------------------------------

    def compute(self, input_dataset):
        """Recompute this node's outputs from its input; subclass hook."""
        return []

    def recompute(self):
        """Run compute(), capturing failures as node status. True on success."""
        self.update_count += 1
        try:
            self.outputs = list(self.compute(self.input_dataset()))
            self.status = "ok"
            self.error_message = None
            return True
        except Exception as exc:
            # keep previous outputs; containment: siblings still update
            self.status = "error"
            self.error_message = str(exc)
            return False

    def notify_data_changed(self):
        propagate(self, "data_changed")

    def record_data_change(self):
        """Tell an active recording session this node's bulk data changed."""
        if self.engine is not None and self.engine.recorder is not None:
            self.engine.recorder.on_set_data(self, self.get_data_payload())

    def _on_own_change(self, event):
        if event.property_name in self.DATA_PROPERTIES:
            propagate(self, "data_changed")
        else:
            scene = self.scene_root()
            if scene is not None:
                scene.render_dirty = True

    # --- serialization helpers ----------------------------------------------

    def get_data_payload(self):
        """Bulk (non-property) data to persist with this node, or None."""
        return None

    def set_data_payload(self, payload):
        pass

    def __repr__(self):
        return "<%s %r>" % (type(self).__name__, self.name)


class Scene(PipelineNode):
    """Root node: holds sources, the camera, and the background color."""

    KIND = "scene"
    FACTORY_ID = "scene"
    PROPERTIES = (
        PropertyDescriptor("background", "color_rgba", (0.1, 0.1, 0.2, 1.0)),
        PropertyDescriptor("azimuth", "float", 45.0),
        PropertyDescriptor("elevation", "float", 30.0, bounds=(-89.99, 89.99)),
        PropertyDescriptor("distance", "float", 0.0),  # 0 means auto-fit
        PropertyDescriptor("focal_point", "float_triplet", (0.0, 0.0, 0.0)),
        PropertyDescriptor("fov", "float", 30.0, bounds=(1.0, 170.0)),
    )

    def __init__(self, name=None):
        super().__init__(name)
        self.render_dirty = True


class ModuleManager(PipelineNode):
    """Interposed node owning the lookup table shared by its module children."""

    KIND = "module_manager"
    FACTORY_ID = "module_manager"
    PROPERTIES = (
        PropertyDescriptor("colormap_name", "enum", "blue_red",
                           choices=("blue_red", "gray")),
        PropertyDescriptor("auto_range", "bool", True),
        PropertyDescriptor("range_lo", "float", 0.0),
        PropertyDescriptor("range_hi", "float", 1.0),
    )
    DATA_PROPERTIES = frozenset(("colormap_name", "auto_range", "range_lo", "range_hi"))

    def compute(self, input_dataset):
        if input_dataset is None:
            return []
        if self.get_property("auto_range"):
            s = getattr(input_dataset, "point_scalars", None)
            if s is not None and len(s):
                lo, hi = float(np.min(s)), float(np.max(s))
                # direct store: range_lo/hi mirror the data, no re-propagation
                self._values["range_lo"] = lo
                self._values["range_hi"] = hi
        return [input_dataset]

    @property
    def lookup_table(self):
        # One shared instance: every module under this manager colors with
        # the very same table object.
        lut = getattr(self, "_lut", None)
        if lut is None:
            lut = self._lut = LookupTable()
        lut.colormap_name = self.get_property("colormap_name")
        lut.range = (
            float(self.get_property("range_lo")),
            float(self.get_property("range_hi")),
        )
        return lut


def _check_kind_pair(parent, child):
    if child.KIND not in LEGAL_CHILDREN.get(parent.KIND, ()):
        raise PipelineStructureError(
            "a %s cannot be a child of a %s" % (child.KIND, parent.KIND)
        )


def _resolve_parent(parent, child):
    """Interpose a module manager when a module is added below a source/filter."""
    if child.KIND == "module" and parent.KIND in ("source", "filter"):
        if parent.children and parent.children[-1].KIND == "module_manager":
            return parent.children[-1]
        manager = ModuleManager()
        add_child(parent, manager)
        return manager
    return parent


def _attach(parent, child):
    child.parent = parent
    parent.children.append(child)
    if parent.engine is not None:
        parent.engine.adopt(child)


def add_child(parent, child, _record=True):
    """Wire `child` under `parent` and update the new subtree."""
    if child.disposed:
        raise PipelineStructureError("cannot attach a disposed node")
    if child.parent is not None:
        raise PipelineStructureError("%r already has a parent" % (child,))
    parent = _resolve_parent(parent, child)
    _check_kind_pair(parent, child)
    _attach(parent, child)
    if _record and child.engine is not None and child.engine.recorder is not None:
        child.engine.recorder.on_add_node(parent, child)
    propagate(child, "pipeline_changed")


def remove_child(parent, child, dispose=True):
    """Detach `child` (and its subtree) from `parent`."""
    if child not in parent.children:
        raise PipelineStructureError("%r is not a child of %r" % (child, parent))
    engine = child.engine
    if dispose and engine is not None and engine.recorder is not None:
        engine.recorder.on_remove_node(child)
    parent.children.remove(child)
    child.parent = None
    if dispose:
        for node in child.walk():
            node.disposed = True
            node.outputs = []
        if engine is not None:
            engine.on_subtree_removed(child)
    propagate(parent, "pipeline_changed")


def reparent(node, new_parent):
    """Move `node` (with its subtree) under `new_parent`."""
    if node.parent is None:
        raise PipelineStructureError("cannot reparent a detached node")
    if node.is_ancestor_of(new_parent):
        raise PipelineStructureError("cannot reparent a node under its own subtree")
    resolved = _resolve_parent(new_parent, node)
    if resolved is node.parent:
        return  # no-op, no event
    _check_kind_pair(resolved, node)
    old_parent = node.parent
    old_parent.children.remove(node)
    node.parent = None
    _attach(resolved, node)
    if node.engine is not None and node.engine.recorder is not None:
        node.engine.recorder.on_reparent(node, resolved)
    propagate(node, "pipeline_changed")


def propagate(origin, kind):
    """Pre-order update of `origin`'s subtree; origin's ancestors untouched."""
    if kind not in ("data_changed", "pipeline_changed"):
        raise ValueError("unknown event kind %r" % (kind,))

    def visit(node):
        ok = node.recompute()
        if ok:
            for child in node.children:
                visit(child)

    visit(origin)
    scene = origin.scene_root()
    if scene is not None:
        scene.render_dirty = True

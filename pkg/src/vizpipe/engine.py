"""The central coordinator: owns scenes, node life-cycle, selection context,
and pipeline state persistence.  Engines are not global; any number may
coexist and they never share nodes."""

import itertools
import json

from .errors import EngineStateError, PipelineStructureError, StateLoadError
from .pipeline import Scene, add_child, propagate, remove_child
from .registry import default_registry

__all__ = ["Engine", "STATE_FORMAT_VERSION", "state_to_json"]

STATE_FORMAT_VERSION = 1


class Engine:
    def __init__(self, registry=None):
        self.registry = registry or default_registry()
        self.scenes = []
        self.current_scene = None
        self.current_object = None
        self.recorder = None
        self._id_counter = itertools.count(1)
        self._clock = itertools.count()

    # --- node adoption ------------------------------------------------------

    def adopt(self, node):
        """Attach subtree `node` to this engine: ids, clocks, event forwarding."""
        for n in node.walk():
            if n.engine is self:
                continue
            if n.engine is not None:
                raise PipelineStructureError("node already owned by another engine")
            n.engine = self
            n.object_id = next(self._id_counter)
            n._clock = self._clock
            n.subscribe(lambda event, node=n: self._on_node_event(node, event))

    def _on_node_event(self, node, event):
        if self.recorder is not None:
            self.recorder.on_set_property(node, event)

    def on_subtree_removed(self, node):
        if self.current_object is not None and node.is_ancestor_of(self.current_object):
            self.current_object = None

    def find_node(self, object_id):
        for scene in self.scenes:
            for node in scene.walk():
                if node.object_id == object_id:
                    return node
        return None

    # --- scene and selection ---------------------------------------------

    def new_scene(self):
        scene = Scene()
        self.adopt(scene)
        self.scenes.append(scene)
        self.current_scene = scene
        if self.recorder is not None:
            self.recorder.on_new_scene(scene)
        return scene

    def add_source(self, source):
        if self.current_scene is None:
            raise EngineStateError("no current scene; call new_scene() first")
        add_child(self.current_scene, source)
        self.current_object = source
        return source

    def add_filter(self, node):
        target = self._attachment_target()
        add_child(target, node)
        self.current_object = node
        return node

    def add_module(self, node):
        target = self._attachment_target()
        add_child(target, node)
        return node

    def _attachment_target(self):
        if self.current_object is None:
            raise EngineStateError("no current object to attach to")
        return self.current_object

    def remove(self, node):
        """Remove `node` and its subtree; selection falls back to its parent."""
        if node.parent is None:
            raise PipelineStructureError("cannot remove a detached node")
        parent = node.parent
        was_selected = (
            self.current_object is not None and node.is_ancestor_of(self.current_object)
        )
        remove_child(parent, node)
        if node in self.scenes:
            self.scenes.remove(node)
        if was_selected:
            self.current_object = parent if parent.KIND != "scene" else None
        if node is self.current_scene:
            self.current_scene = self.scenes[-1] if self.scenes else None

    def open_file(self, path):
        """Create the registered reader for `path`'s suffix and add it."""
        suffix = str(path).rsplit(".", 1)[-1] if "." in str(path) else ""
        meta = self.registry.source_for_extension(suffix)
        if meta is None:
            raise EngineStateError("no reader registered for %r files" % (suffix,))
        source = self.registry.create_by_name(meta.factory_id)
        source.set_property("file_name", str(path))
        self.add_source(source)
        if self.recorder is not None:
            self.recorder.on_load_data(source, str(path))
        return source

    # --- persistence ----------------------------------------------------------

    def save_state(self):
        """Serializable document capturing the full pipeline state."""
        return {
            "format_version": STATE_FORMAT_VERSION,
            "scenes": [_node_record(scene) for scene in self.scenes],
        }

    def load_state(self, doc):
        """Replace this engine's contents with the document's pipeline."""
        version = doc.get("format_version")
        if version != STATE_FORMAT_VERSION:
            raise StateLoadError("unsupported format_version %r" % (version,))
        for record in doc.get("scenes", []):
            _validate_record(record, self.registry, is_scene=True)
        # document validated; replace contents
        self.scenes = []
        self.current_scene = None
        self.current_object = None
        for record in doc.get("scenes", []):
            scene = self.new_scene()
            _apply_record(scene, record, self.registry)
        self.current_scene = self.scenes[-1] if self.scenes else None
        self.current_object = None


def _node_record(node):
    record = {
        "factory_id": node.FACTORY_ID,
        "name": node.name,
        "properties": {d["name"]: d["value"] for d in node.describe()},
        "children": [_node_record(c) for c in node.children],
    }
    payload = node.get_data_payload()
    if payload is not None:
        record["data"] = payload
    return record


def _validate_record(record, registry, is_scene=False):
    factory_id = record.get("factory_id")
    if is_scene:
        if factory_id != "scene":
            raise StateLoadError("top-level records must be scenes, got %r" % (factory_id,))
    elif factory_id != "module_manager" and factory_id not in registry:
        raise StateLoadError("unknown factory_id %r" % (factory_id,))
    for child in record.get("children", []):
        _validate_record(child, registry)


def _apply_record(node, record, registry):
    from .pipeline import ModuleManager

    node.name = record.get("name", node.name)
    for name, value in record.get("properties", {}).items():
        value = _from_json_value(node.descriptor(name), value)
        node.set_property(name, value)
    if "data" in record:
        node.set_data_payload(record["data"])
    for child_record in record.get("children", []):
        factory_id = child_record["factory_id"]
        if factory_id == "module_manager":
            child = ModuleManager()
        else:
            child = registry.create_by_name(factory_id)
        add_child(node, child)
        _apply_record(child, child_record, registry)
    propagate(node, "pipeline_changed")


def _from_json_value(descriptor, value):
    if descriptor.kind in ("color_rgba", "float_triplet", "float_list"):
        return tuple(value)
    return value


def state_to_json(doc):
    """Canonical (byte-stable) JSON text of a state document."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

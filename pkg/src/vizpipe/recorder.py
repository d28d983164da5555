"""Record mode: observe engine mutations and emit a replayable command script.

Records reference nodes created during the session by stable aliases
(``s0``, ``n1``, ...); nodes that existed beforehand are referenced by their
tree path (``"0/2/1"``), which only resolves against the same engine layout.
Scripts serialize one JSON object per line (``.mvr.jsonl``).
"""

import json

from .errors import RecorderStateError, ReplayError
from .pipeline import ModuleManager, add_child, reparent

__all__ = ["RecordingSession", "start", "stop", "replay",
           "script_to_jsonl", "script_from_jsonl"]


def _jsonable(value):
    return list(value) if isinstance(value, tuple) else value


class RecordingSession:
    def __init__(self, engine):
        self.engine = engine
        self.active = True
        self.records = []
        self._aliases = {}  # id(node) -> alias
        self._nodes = {}    # keep aliased nodes alive for identity keys
        self._counter = 0

    # --- engine-facing hooks ---------------------------------------------

    def on_new_scene(self, scene):
        alias = self._new_alias(scene, prefix="s")
        self._append({"op": "new_scene", "alias": alias})

    def on_add_node(self, parent, child):
        # one self-contained record per node: non-default property values and
        # bulk data ride along, and pre-built subtrees are flattened
        alias = self._new_alias(child)
        record = {
            "op": "add_node",
            "alias": alias,
            "factory_id": child.FACTORY_ID,
            "parent": self._ref(parent),
        }
        props = {
            d["name"]: d["value"] for d in child.describe()
            if d["value"] != d["default"]
        }
        if props:
            record["properties"] = props
        payload = child.get_data_payload()
        if payload is not None:
            record["data"] = payload
        self._append(record)
        for grandchild in child.children:
            self.on_add_node(child, grandchild)

    def on_remove_node(self, node):
        self._append({"op": "remove_node", "target": self._ref(node)})

    def on_reparent(self, node, new_parent):
        self._append({
            "op": "reparent",
            "target": self._ref(node),
            "parent": self._ref(new_parent),
        })

    def on_set_property(self, node, event):
        self._append({
            "op": "set_property",
            "target": self._ref(node),
            "name": event.property_name,
            "value": _jsonable(event.new_value),
        })

    def on_set_data(self, node, payload):
        self._append({"op": "set_data", "target": self._ref(node),
                      "payload": payload})

    def on_load_data(self, source, path):
        self._append({"op": "load_data", "target": self._ref(source),
                      "path": path})

    # --- internals ---------------------------------------------------------

    def _append(self, record):
        if not self.active:
            return
        record["index"] = len(self.records)
        self.records.append(record)

    def _new_alias(self, node, prefix="n"):
        alias = "%s%d" % (prefix, self._counter)
        self._counter += 1
        self._aliases[id(node)] = alias
        self._nodes[id(node)] = node
        return alias

    def _ref(self, node):
        alias = self._aliases.get(id(node))
        if alias is not None:
            return alias
        return _node_path(self.engine, node)


def _node_path(engine, node):
    indices = []
    current = node
    while current.parent is not None:
        indices.append(current.parent.children.index(current))
        current = current.parent
    if current not in engine.scenes:
        raise RecorderStateError("node is not attached to this engine")
    indices.append(engine.scenes.index(current))
    return "/".join(str(i) for i in reversed(indices))


def start(engine):
    """Begin recording all mutations of `engine`."""
    if engine.recorder is not None:
        raise RecorderStateError("a recording session is already active")
    session = RecordingSession(engine)
    engine.recorder = session
    return session


def stop(session):
    """End the session and return the frozen script."""
    session.active = False
    if session.engine.recorder is session:
        session.engine.recorder = None
    return list(session.records)


def replay(engine, script):
    """Rebuild the recorded pipeline in a fresh engine."""
    if engine.scenes:
        raise ReplayError("replay target engine must be empty")
    aliases = {}

    def resolve(ref, index):
        if "/" not in ref and ref and ref[0] in "sn" and ref[1:].isdigit():
            node = aliases.get(ref)
            if node is None:
                raise ReplayError("unresolved alias %r" % (ref,), index)
            return node
        try:
            parts = [int(p) for p in ref.split("/")]
            node = engine.scenes[parts[0]]
            for i in parts[1:]:
                node = node.children[i]
            return node
        except (ValueError, IndexError):
            raise ReplayError("unresolvable node path %r" % (ref,), index)

    for index, record in enumerate(script):
        op = record.get("op")
        try:
            if op == "new_scene":
                aliases[record["alias"]] = engine.new_scene()
            elif op == "add_node":
                parent = resolve(record["parent"], index)
                factory_id = record["factory_id"]
                if factory_id == "module_manager":
                    child = ModuleManager()
                else:
                    child = engine.registry.create_by_name(factory_id)
                for name, value in record.get("properties", {}).items():
                    desc = child.descriptor(name)
                    if desc.kind in ("color_rgba", "float_triplet", "float_list"):
                        value = tuple(value)
                    child.set_property(name, value)
                if "data" in record:
                    child.set_data_payload(record["data"])
                add_child(parent, child)
                aliases[record["alias"]] = child
            elif op == "remove_node":
                engine.remove(resolve(record["target"], index))
            elif op == "reparent":
                reparent(resolve(record["target"], index),
                         resolve(record["parent"], index))
            elif op == "set_property":
                node = resolve(record["target"], index)
                desc = node.descriptor(record["name"])
                value = record["value"]
                if desc.kind in ("color_rgba", "float_triplet", "float_list"):
                    value = tuple(value)
                node.set_property(record["name"], value)
            elif op == "set_data":
                node = resolve(record["target"], index)
                node.set_data_payload(record["payload"])
                node.notify_data_changed()
            elif op == "load_data":
                node = resolve(record["target"], index)
                node.set_property("file_name", record["path"])
            else:
                raise ReplayError("unknown op %r" % (op,), index)
        except ReplayError:
            raise
        except Exception as exc:
            raise ReplayError(str(exc), index) from exc


def script_to_jsonl(script):
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in script)


def script_from_jsonl(text):
    script = []
    for i, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        try:
            script.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ReplayError("bad script line: %s" % exc, i) from exc
    return script

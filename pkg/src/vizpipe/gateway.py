"""HTTP/WebSocket service exposing one engine for remote pipeline steering.

All mutation handlers are async and run on the event loop, so requests from
any number of peers serialize naturally through the engine's single command
path.  Rendering happens on a worker thread against immutable dataset
snapshots, keeping the service responsive.
"""

import asyncio

from fastapi import FastAPI, Response, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from . import recorder
from .engine import Engine
from typing import Optional

from .errors import RegistryError, StateLoadError, ValidationError, VizpipeError
from .pipeline import add_child, reparent
from .render import FrameSpec, collect_actors, encode_png, render_frame, resolve_camera

__all__ = ["create_app", "serve"]


def _tree_record(node):
    return {
        "id": node.object_id,
        "kind": node.KIND,
        "factory_id": node.FACTORY_ID,
        "name": node.name,
        "status": node.status,
        "children": [_tree_record(c) for c in node.children],
    }


def create_app(engine=None):
    engine = engine or Engine()
    if engine.current_scene is None:
        engine.new_scene()
    app = FastAPI(title="vizpipe gateway")
    app.state.engine = engine
    peers = []
    frame_cache = {}  # (scene_id, w, h) -> png bytes

    async def broadcast(payload):
        for ws in list(peers):
            try:
                await ws.send_json(payload)
            except Exception:
                if ws in peers:
                    peers.remove(ws)

    def find(node_id):
        return engine.find_node(node_id)

    @app.exception_handler(VizpipeError)
    async def _on_error(request, exc):
        status = 400
        if isinstance(exc, (RegistryError, StateLoadError)):
            status = 400
        return JSONResponse({"error": str(exc)}, status_code=status)

    @app.get("/pipeline")
    async def pipeline_doc():
        return {"scenes": [_tree_record(s) for s in engine.scenes]}

    @app.get("/registry")
    async def registry_doc():
        return {"entries": [m.to_json() for m in engine.registry.all_metadata()]}

    @app.get("/describe/{node_id}")
    async def describe(node_id: int):
        node = find(node_id)
        if node is None:
            return JSONResponse({"error": "unknown node"}, status_code=404)
        return {"id": node.object_id, "descriptors": node.describe()}

    @app.get("/applicable/{node_id}")
    async def applicable(node_id: int):
        from .dataset import dataset_info

        node = find(node_id)
        if node is None:
            return JSONResponse({"error": "unknown node"}, status_code=404)
        if not node.outputs:
            return {"entries": []}
        info = dataset_info(node.outputs[0])
        return {"entries": [m.to_json() for m in engine.registry.applicable(info)]}

    @app.post("/nodes", status_code=201)
    async def create_node(body: dict):
        factory_id = body.get("factory") or body.get("factory_id")
        if not factory_id:
            return JSONResponse({"error": "missing factory"}, status_code=400)
        node = engine.registry.create_by_name(factory_id)
        parent_id = body.get("parent")
        if parent_id is None:
            meta = engine.registry.metadata(factory_id)
            if meta.kind == "source":
                engine.add_source(node)
            else:
                engine.add_module(node)
        else:
            parent = find(parent_id)
            if parent is None:
                return JSONResponse({"error": "unknown parent"}, status_code=404)
            add_child(parent, node)
        for name, value in body.get("properties", {}).items():
            node.set_property(name, _coerce(node, name, value))
        await broadcast({"event": "node_added", "node_id": node.object_id})
        return {"id": node.object_id}

    @app.patch("/nodes/{node_id}")
    async def patch_node(node_id: int, body: dict):
        node = find(node_id)
        if node is None:
            return JSONResponse({"error": "unknown node"}, status_code=404)
        changed = []
        for name, value in body.items():
            event = node.set_property(name, _coerce(node, name, value))
            if event is not None:
                changed.append(name)
                await broadcast({
                    "event": "node_patched",
                    "node_id": node.object_id,
                    "property": name,
                })
        return {"id": node.object_id, "changed": changed}

    @app.delete("/nodes/{node_id}")
    async def delete_node(node_id: int):
        node = find(node_id)
        if node is None:
            return JSONResponse({"error": "unknown node"}, status_code=404)
        if node.KIND == "scene":
            return JSONResponse({"error": "cannot delete a scene"}, status_code=400)
        engine.remove(node)
        await broadcast({"event": "node_removed", "node_id": node_id})
        return {"removed": node_id}

    @app.post("/reparent")
    async def reparent_node(body: dict):
        node = find(body.get("node"))
        parent = find(body.get("parent"))
        if node is None or parent is None:
            return JSONResponse({"error": "unknown node"}, status_code=404)
        reparent(node, parent)
        await broadcast({"event": "reparented", "node_id": node.object_id})
        return {"id": node.object_id, "parent": node.parent.object_id}

    @app.get("/record")
    async def record_status():
        return {"active": engine.recorder is not None}

    @app.post("/record/start")
    async def record_start():
        recorder.start(engine)
        return {"active": True}

    @app.post("/record/stop")
    async def record_stop():
        if engine.recorder is None:
            return JSONResponse({"error": "no active recording"}, status_code=400)
        script = recorder.stop(engine.recorder)
        text = recorder.script_to_jsonl(script)
        headers = {"Content-Disposition": 'attachment; filename="session.mvr.jsonl"'}
        return Response(text, media_type="application/jsonl", headers=headers)

    @app.get("/render")
    async def render(scene: Optional[int] = None, width: int = 640, height: int = 480):
        target = find(scene) if scene is not None else engine.current_scene
        if target is None or target.KIND != "scene":
            return JSONResponse({"error": "unknown scene"}, status_code=404)
        if target.render_dirty:
            frame_cache.clear()
            target.render_dirty = False
        key = (target.object_id, width, height)
        if key not in frame_cache:
            actors = collect_actors(target)
            camera = resolve_camera(target, actors)
            spec = FrameSpec(width, height, target.get_property("background"))
            loop = asyncio.get_running_loop()
            image = await loop.run_in_executor(None, render_frame, actors, camera, spec)
            frame_cache[key] = encode_png(image)
        return Response(frame_cache[key], media_type="image/png")

    @app.get("/state")
    async def get_state():
        return engine.save_state()

    @app.put("/state")
    async def put_state(body: dict):
        engine.load_state(body)
        await broadcast({"event": "state_loaded"})
        return {"scenes": len(engine.scenes)}

    @app.websocket("/events")
    async def events(websocket: WebSocket):
        await websocket.accept()
        peers.append(websocket)
        try:
            while True:
                await websocket.receive_text()
        except WebSocketDisconnect:
            pass
        finally:
            if websocket in peers:
                peers.remove(websocket)

    return app


def _coerce(node, name, value):
    desc = node.descriptor(name)
    if desc.kind in ("color_rgba", "float_triplet", "float_list"):
        if not isinstance(value, (list, tuple)):
            raise ValidationError("%s: expected a list" % name)
        return tuple(value)
    if desc.kind == "float" and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def serve(port=8787, host="127.0.0.1", engine=None):
    """Run the gateway with uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(engine), host=host, port=port, log_level="warning")

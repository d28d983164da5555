"""Batch entry points: run a declarative spec to images/X3D/VTK files,
record and replay command scripts, and launch the gateway service.

Exit codes: 0 success, 1 pipeline/render/replay failure, 2 invalid spec.
"""

import argparse
import json
import sys

from . import recorder, vtkio
from .engine import Engine
from .errors import ReplayError, VizpipeError
from .render import FrameSpec, collect_actors, encode_png, export_x3d, render_frame, resolve_camera

__all__ = ["main", "build_from_spec"]


class SpecError(Exception):
    pass


def _load_spec(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError("cannot read spec: %s" % exc)
    except json.JSONDecodeError as exc:
        raise SpecError("spec is not valid JSON (line %d): %s" % (exc.lineno, exc.msg))


def build_from_spec(spec, engine):
    """Build the pipeline a run spec describes; returns the scene."""
    if not isinstance(spec, dict):
        raise SpecError("spec must be a JSON object")
    scene = engine.new_scene()

    source = None
    inp = spec.get("input")
    if inp:
        path = inp.get("file")
        if not path:
            raise SpecError("input needs a 'file' path")
        builder = inp.get("builder")
        try:
            source = engine.open_file(path)
        except VizpipeError as exc:
            raise SpecError(str(exc))
        if builder == "contour3d":
            module = engine.registry.create_by_name("iso_surface")
            if "contours" in inp:
                module.set_property("auto_contours", False)
                module.set_property("contours", tuple(inp["contours"]))
            engine.add_module(module)
        elif builder is not None:
            raise SpecError("unknown builder %r" % (builder,))

    for decl in spec.get("pipeline", []):
        factory_id = decl.get("factory_id") or decl.get("factory")
        if not factory_id or factory_id not in engine.registry:
            raise SpecError("unknown factory %r" % (factory_id,))
        node = engine.registry.create_by_name(factory_id)
        for name, value in decl.get("properties", {}).items():
            try:
                desc = node.descriptor(name)
                if desc.kind in ("color_rgba", "float_triplet", "float_list"):
                    value = tuple(value)
                node.set_property(name, value)
            except VizpipeError as exc:
                raise SpecError(str(exc))
        kind = engine.registry.metadata(factory_id).kind
        if kind == "source":
            engine.add_source(node)
        elif kind == "filter":
            engine.add_filter(node)
        else:
            engine.add_module(node)

    for name, value in spec.get("camera", {}).items():
        try:
            desc = scene.descriptor(name)
            if desc.kind in ("color_rgba", "float_triplet"):
                value = tuple(value)
            scene.set_property(name, value)
        except VizpipeError as exc:
            raise SpecError(str(exc))
    return scene


def _normalize_outputs(spec, args):
    outputs = list(spec.get("outputs", []))
    if getattr(args, "out", None):
        fmt = getattr(args, "format", None) or args.out.rsplit(".", 1)[-1]
        width, height = 640, 480
        if getattr(args, "size", None):
            try:
                width, height = (int(v) for v in args.size.lower().split("x"))
            except ValueError:
                raise SpecError("--size must look like 640x480")
        outputs.append({"format": fmt, "path": args.out,
                        "width": width, "height": height})
    if not outputs:
        raise SpecError("spec declares no outputs")
    for out in outputs:
        if out.get("format") not in ("png", "x3d", "vtk"):
            raise SpecError("unknown output format %r" % (out.get("format"),))
        if not out.get("path"):
            raise SpecError("output needs a 'path'")
    return outputs


def _write_outputs(engine, outputs):
    scene = engine.current_scene
    actors = collect_actors(scene)
    camera = resolve_camera(scene, actors)
    for out in outputs:
        fmt = out["format"]
        if fmt == "png":
            spec = FrameSpec(int(out.get("width", 640)), int(out.get("height", 480)),
                             scene.get_property("background"))
            image = render_frame(actors, camera, spec)
            with open(out["path"], "wb") as fh:
                fh.write(encode_png(image))
        elif fmt == "x3d":
            with open(out["path"], "w", encoding="utf-8") as fh:
                fh.write(export_x3d(actors, camera))
        else:  # vtk: dataset at the engine's current object (or last actor)
            node = engine.current_object
            dataset = node.outputs[0] if node is not None and node.outputs else None
            if dataset is None and actors:
                dataset = actors[-1].mesh
            if dataset is None:
                raise VizpipeError("no dataset available for vtk output")
            with open(out["path"], "w", encoding="ascii") as fh:
                fh.write(vtkio.write_legacy(dataset))


def _cmd_run(args):
    spec = _load_spec(args.spec)
    outputs = _normalize_outputs(spec, args)
    engine = Engine()
    build_from_spec(spec, engine)
    _write_outputs(engine, outputs)
    return 0


def _cmd_record(args):
    spec = _load_spec(args.spec)
    engine = Engine()
    session = recorder.start(engine)
    build_from_spec(spec, engine)
    script = recorder.stop(session)
    with open(args.script, "w", encoding="utf-8") as fh:
        fh.write(recorder.script_to_jsonl(script))
    return 0


def _cmd_replay(args):
    try:
        with open(args.script, "r", encoding="utf-8") as fh:
            script = recorder.script_from_jsonl(fh.read())
    except OSError as exc:
        raise SpecError("cannot read script: %s" % exc)
    engine = Engine()
    recorder.replay(engine, script)
    if args.out:
        outputs = _normalize_outputs({}, args)
        if engine.current_scene is None:
            engine.new_scene()
        _write_outputs(engine, outputs)
    return 0


def _cmd_serve(args):
    from .gateway import serve

    serve(port=args.port, host=args.host)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="vizpipe",
                                     description="headless visualization pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="build a spec and write its outputs")
    p_run.add_argument("spec")
    p_run.add_argument("--out")
    p_run.add_argument("--size")
    p_run.add_argument("--format", choices=["png", "x3d", "vtk"])
    p_run.set_defaults(func=_cmd_run)

    p_rec = sub.add_parser("record", help="run a spec, capturing a command script")
    p_rec.add_argument("spec")
    p_rec.add_argument("--script", required=True)
    p_rec.set_defaults(func=_cmd_record)

    p_rep = sub.add_parser("replay", help="rebuild a recorded script")
    p_rep.add_argument("script")
    p_rep.add_argument("--out")
    p_rep.add_argument("--size")
    p_rep.add_argument("--format", choices=["png", "x3d", "vtk"])
    p_rep.set_defaults(func=_cmd_replay)

    p_srv = sub.add_parser("serve", help="run the HTTP/WebSocket gateway")
    p_srv.add_argument("--port", type=int, default=8787)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print("spec error: %s" % exc, file=sys.stderr)
        return 2
    except ReplayError as exc:
        print("replay error: %s" % exc, file=sys.stderr)
        return 1
    except VizpipeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

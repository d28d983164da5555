import random

import numpy as np
import pytest

from vizpipe import (
    ArraySource,
    Engine,
    IsoSurface,
    Outline,
    ParametricCurveSource,
    state_to_json,
)
from vizpipe import recorder
from vizpipe.errors import RecorderStateError, ReplayError

from conftest import ellipsoid_field


def record_basic(engine):
    session = recorder.start(engine)
    engine.new_scene()
    src = engine.add_source(ArraySource(scalar_data=ellipsoid_field(6)))
    iso = engine.add_module(IsoSurface())
    iso.set_property("auto_contours", False)
    iso.set_property("contours", (50.0,))
    return recorder.stop(session), src, iso


def test_session_lifecycle():
    engine = Engine()
    session = recorder.start(engine)
    with pytest.raises(RecorderStateError):
        recorder.start(engine)
    recorder.stop(session)
    recorder.start(engine)  # restartable after stop


def test_basic_script_shape():
    script, src, iso = record_basic(Engine())
    ops = [r["op"] for r in script]
    # scene, source, manager, module, then the two property edits
    assert ops == ["new_scene", "add_node", "add_node", "add_node",
                   "set_property", "set_property"]
    add_source = script[1]
    assert add_source["factory_id"] == "array_source"
    assert add_source["parent"] == script[0]["alias"]
    assert "data" in add_source  # bulk data rides along
    assert [r["index"] for r in script] == list(range(len(script)))


def test_records_stop_after_session_ends():
    engine = Engine()
    script, src, iso = record_basic(engine)
    n = len(script)
    iso.set_property("n_auto", 5)
    assert len(script) == n


def test_replay_reproduces_state():
    engine = Engine()
    script, _, _ = record_basic(engine)
    fresh = Engine()
    recorder.replay(fresh, script)
    assert state_to_json(fresh.save_state()) == state_to_json(engine.save_state())


def test_replay_requires_empty_engine():
    engine = Engine()
    script, _, _ = record_basic(engine)
    occupied = Engine()
    occupied.new_scene()
    with pytest.raises(ReplayError):
        recorder.replay(occupied, script)


def test_replay_error_reports_index():
    engine = Engine()
    script, _, _ = record_basic(engine)
    script[3]["factory_id"] = "bogus"
    with pytest.raises(ReplayError) as exc:
        recorder.replay(Engine(), script)
    assert exc.value.index == 3


def test_unresolved_alias_error():
    with pytest.raises(ReplayError) as exc:
        recorder.replay(Engine(), [
            {"op": "new_scene", "alias": "s0"},
            {"op": "set_property", "target": "n9", "name": "azimuth",
             "value": 10.0},
        ])
    assert exc.value.index == 1


def test_unknown_op_rejected():
    with pytest.raises(ReplayError):
        recorder.replay(Engine(), [{"op": "explode"}])


def test_path_refs_for_preexisting_nodes():
    engine = Engine()
    engine.new_scene()
    src = engine.add_source(ArraySource(scalar_data=ellipsoid_field(6)))
    # recording starts after the pipeline exists: references are tree paths
    session = recorder.start(engine)
    src.set_property("origin", (-1.0, -1.0, -1.0))
    script = recorder.stop(session)
    assert script[0]["target"] == "0/0"

    # such fragments are not self-contained: replay into a fresh engine
    # reports the failing record
    with pytest.raises(ReplayError) as exc:
        recorder.replay(Engine(), script)
    assert exc.value.index == 0


def test_remove_and_reparent_round_trip():
    engine = Engine()
    session = recorder.start(engine)
    engine.new_scene()
    a = engine.add_source(ParametricCurveSource())
    b = engine.add_source(ParametricCurveSource())
    engine.current_object = a
    out = engine.add_module(Outline())
    engine.remove(a)
    script = recorder.stop(session)
    fresh = Engine()
    recorder.replay(fresh, script)
    assert state_to_json(fresh.save_state()) == state_to_json(engine.save_state())


def test_data_edit_round_trip():
    engine = Engine()
    session = recorder.start(engine)
    engine.new_scene()
    src = engine.add_source(ArraySource(scalar_data=ellipsoid_field(5)))
    iso = engine.add_module(IsoSurface())
    src.set_scalar_data(ellipsoid_field(5) * 3.0)
    script = recorder.stop(session)
    assert any(r["op"] == "set_data" for r in script)
    fresh = Engine()
    recorder.replay(fresh, script)
    assert state_to_json(fresh.save_state()) == state_to_json(engine.save_state())
    fresh_iso = fresh.scenes[0].children[0].children[0].children[0]
    assert fresh_iso.outputs[0] == iso.outputs[0]


def test_jsonl_round_trip():
    engine = Engine()
    script, _, _ = record_basic(engine)
    text = recorder.script_to_jsonl(script)
    assert text.count("\n") == len(script)
    assert recorder.script_from_jsonl(text) == script
    with pytest.raises(ReplayError):
        recorder.script_from_jsonl("not json\n")


def random_session(seed):
    rng = random.Random(seed)
    engine = Engine()
    session = recorder.start(engine)
    engine.new_scene()
    for _ in range(rng.randrange(3, 12)):
        op = rng.random()
        if op < 0.4 or engine.current_object is None:
            engine.add_source(ArraySource(
                scalar_data=np.full((2, 2, 2), float(rng.randrange(9)))))
        elif op < 0.7:
            engine.add_module(Outline())
        elif op < 0.85:
            engine.current_object.set_property(
                "origin", (float(rng.randrange(5)), 0.0, 0.0))
        else:
            engine.remove(engine.current_object)
    return engine, recorder.stop(session)


@pytest.mark.parametrize("seed", range(12))
def test_randomized_record_replay_equivalence(seed):
    engine, script = random_session(seed)
    fresh = Engine()
    recorder.replay(fresh, recorder.script_from_jsonl(
        recorder.script_to_jsonl(script)))
    assert state_to_json(fresh.save_state()) == state_to_json(engine.save_state())

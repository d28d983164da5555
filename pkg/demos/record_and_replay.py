"""Record a session to a command script and rebuild it in a fresh engine."""

import numpy as np

from vizpipe import ArraySource, Engine, IsoSurface, recorder, state_to_json

engine = Engine()
session = recorder.start(engine)

engine.new_scene()
x, y, z = np.ogrid[-10:10:40j, -10:10:40j, -10:10:40j]
src = engine.add_source(ArraySource(scalar_data=0.5 * x**2 + y**2 + 2 * z**2))
iso = engine.add_module(IsoSurface())
iso.set_property("auto_contours", False)
iso.set_property("contours", (50.0,))

script = recorder.stop(session)
with open("session.mvr.jsonl", "w", encoding="utf-8") as fh:
    fh.write(recorder.script_to_jsonl(script))
print("recorded %d commands to session.mvr.jsonl" % len(script))

fresh = Engine()
recorder.replay(fresh, script)
same = state_to_json(fresh.save_state()) == state_to_json(engine.save_state())
print("replayed pipeline matches the original:", same)

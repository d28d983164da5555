"""Plot a looped parametric curve as a 3-D polyline and export X3D."""

from vizpipe import Engine, MlabContext
from vizpipe.kernels import curve
from vizpipe.render import collect_actors, export_x3d, resolve_camera

mlab = MlabContext(engine=Engine())
points = curve(n_turns=11).points
plot = mlab.plot3d(points[:, 0], points[:, 1], points[:, 2])

mlab.save_png("curve.png", width=480, height=480)

scene = mlab.figure()
actors = collect_actors(scene)
with open("curve.x3d", "w", encoding="utf-8") as fh:
    fh.write(export_x3d(actors, resolve_camera(scene, actors)))
print("wrote curve.png and curve.x3d")

# the same handle animates the turn count
new = curve(n_turns=5).points
plot.mlab_source.set(x=new[:, 0], y=new[:, 1], z=new[:, 2])
mlab.save_png("curve_5_turns.png", width=480, height=480)
print("wrote curve_5_turns.png")

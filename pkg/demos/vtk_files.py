"""Write a legacy VTK file, read it back through the engine, and contour it."""

import numpy as np

from vizpipe import Engine, ImageData, IsoSurface, write_legacy

x, y, z = np.ogrid[-10:10:40j, -10:10:40j, -10:10:40j]
field = 0.5 * x ** 2 + y ** 2 + 2 * z ** 2
h = 20.0 / 39

volume = ImageData(dims=field.shape, origin=(-10.0, -10.0, -10.0),
                   spacing=(h, h, h), point_scalars=field.ravel(order="F"))
with open("volume.vtk", "w", encoding="ascii") as fh:
    fh.write(write_legacy(volume, title="quadric sample volume"))
print("wrote volume.vtk")

engine = Engine()
engine.new_scene()
source = engine.open_file("volume.vtk")  # reader chosen by file extension
module = engine.add_module(IsoSurface())
mesh = module.outputs[0]
print("read back %r -> %d iso-surface triangles"
      % (source.get_property("file_name"), len(mesh.triangles)))

with open("surface.vtk", "w", encoding="ascii") as fh:
    fh.write(write_legacy(mesh, title="extracted surface"))
print("wrote surface.vtk")

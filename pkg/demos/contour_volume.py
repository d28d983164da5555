"""Iso-contour a quadratic scalar field and save a rendered frame.

The one-call facade builds the whole pipeline: array source, module manager
with its shared lookup table, and the iso-surface module.
"""

import numpy as np

from vizpipe import Engine, MlabContext

x, y, z = np.ogrid[-10:10:100j, -10:10:100j, -10:10:100j]
field = 0.5 * x ** 2 + y ** 2 + 2 * z ** 2

mlab = MlabContext(engine=Engine())
mlab.contour3d(field, contours=[30.0, 50.0, 70.0], colormap_name="blue_red")
mlab.figure().set_property("azimuth", 60.0)
mlab.figure().set_property("elevation", 25.0)

path = mlab.save_png("contour_volume.png", width=640, height=480)
print("wrote", path)

"""Animate a visualization by replacing the source data in place.

The ``mlab_source`` handle swaps the scalar array without rebuilding the
pipeline; each assignment triggers exactly one downstream recompute, so a
frame can be saved per step.
"""

import numpy as np

from vizpipe import Engine, MlabContext

x, y, z = np.ogrid[-10:10:64j, -10:10:64j, -10:10:64j]

mlab = MlabContext(engine=Engine())
ctr = mlab.contour3d(0.5 * x ** 2 + y ** 2 + z ** 2, contours=[50.0])

for i in range(1, 10):
    ctr.mlab_source.scalars = 0.5 * x ** 2 + y ** 2 + i * z ** 2
    frame = mlab.save_png("anim_%02d.png" % i, width=320, height=240)
    print("wrote", frame)

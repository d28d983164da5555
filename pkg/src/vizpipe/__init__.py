"""vizpipe: a headless scientific-visualization pipeline engine.

Observable pipeline objects form a strict tree of sources, filters, and
modules coordinated by an Engine; a central registry drives menus and the
scripting namespace; scenes render off-screen to PNG and export to X3D; the
gateway service exposes everything over HTTP/WebSocket.
"""

from . import errors
from .dataset import (
    DatasetInfo,
    ImageData,
    PolyData,
    dataset_info,
    image_data_new,
    point_position,
)
from .engine import Engine, state_to_json
from .kernels import (
    ArraySource,
    IsoSurface,
    LineSource,
    LookupTable,
    Outline,
    ParametricCurveSource,
    PolyDataNormals,
    Surface,
    auto_levels,
    compute_normals,
    curve,
    lut_map,
    marching_cubes,
    outline_bounds,
)
from .mlab import MlabContext, MlabSource, mlab
from .observable import ChangeEvent, ObservableObject, PropertyDescriptor
from .pipeline import (
    ModuleManager,
    PipelineNode,
    Scene,
    add_child,
    propagate,
    remove_child,
    reparent,
)
from .registry import NodeMetadata, Registry, default_registry, scripting_name
from .render import (
    Camera,
    FrameSpec,
    RenderableActor,
    collect_actors,
    encode_png,
    export_x3d,
    render_frame,
    resolve_camera,
)
from .vtkio import read_legacy, write_legacy

__version__ = "0.1.0"

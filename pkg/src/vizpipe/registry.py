"""Central metadata registry: the one list of node kinds from which menus,
applicability suggestions, and the scripting namespace are generated."""

import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from .dataset import DatasetInfo
from .errors import RegistryError

__all__ = ["NodeMetadata", "Registry", "scripting_name", "default_registry"]

ANY = "any"


@dataclass(frozen=True)
class NodeMetadata:
    factory_id: str
    kind: str  # source | filter | module
    menu_name: str
    extensions: tuple = ()          # sources only
    wildcards: str = ""             # sources only
    input_info: object = ANY        # DatasetInfo constraint or "any"
    output_info: object = ANY

    def __post_init__(self):
        if self.kind not in ("source", "filter", "module"):
            raise RegistryError("bad node kind %r" % (self.kind,))
        if self.kind == "source" and self.input_info != ANY:
            raise RegistryError("sources take no input_info")

    def accepts(self, producer_info):
        """Does a producer described by `producer_info` satisfy this input?"""
        if self.kind == "source":
            return False
        if self.input_info == ANY:
            return True
        need = self.input_info
        if need.dataset_kind != ANY and need.dataset_kind != producer_info.dataset_kind:
            return False
        return set(need.attributes) <= set(producer_info.attributes)

    def to_json(self):
        def info(v):
            return v if v == ANY else v.to_json()
        return {
            "factory_id": self.factory_id,
            "kind": self.kind,
            "menu_name": self.menu_name,
            "extensions": list(self.extensions),
            "wildcards": self.wildcards,
            "input_info": info(self.input_info),
            "output_info": info(self.output_info),
        }


@dataclass
class _Entry:
    metadata: NodeMetadata
    factory: Callable


class Registry:
    """Append-only map of factory_id -> (metadata, factory)."""

    def __init__(self):
        self._entries = {}

    def register(self, metadata, factory):
        if metadata.factory_id in self._entries:
            raise RegistryError("duplicate factory_id %r" % (metadata.factory_id,))
        self._entries[metadata.factory_id] = _Entry(metadata, factory)

    def __contains__(self, factory_id):
        return factory_id in self._entries

    def __iter__(self):
        return iter(self._entries.values())

    def metadata(self, factory_id):
        entry = self._entries.get(factory_id)
        if entry is None:
            raise RegistryError("unknown factory_id %r" % (factory_id,))
        return entry.metadata

    def all_metadata(self):
        return [e.metadata for e in self._entries.values()]

    def applicable(self, producer_info):
        """Filters/modules whose input constraint matches, menu-name order."""
        hits = [
            e.metadata for e in self._entries.values()
            if e.metadata.kind in ("filter", "module") and e.metadata.accepts(producer_info)
        ]
        return sorted(hits, key=lambda m: m.menu_name)

    def create_by_name(self, factory_id):
        entry = self._entries.get(factory_id)
        if entry is None:
            raise RegistryError("unknown factory_id %r" % (factory_id,))
        return entry.factory()

    def source_for_extension(self, suffix):
        """Metadata of the reader registered for a file suffix, or None."""
        suffix = suffix.lstrip(".").lower()
        for e in self._entries.values():
            if e.metadata.kind == "source" and suffix in e.metadata.extensions:
                return e.metadata
        return None


def scripting_name(class_name):
    """CamelCase -> lower_case_with_underscores; digits stay attached."""
    if not class_name:
        raise NameError("empty class name")
    return re.sub(r"(?<=.)([A-Z])", r"_\1", class_name).lower()


_default = None


def default_registry():
    """The process-wide registry preloaded with the builtin node kinds."""
    global _default
    if _default is None:
        _default = Registry()
        _register_builtins(_default)
    return _default


def _register_builtins(reg):
    from . import kernels

    image_scalars = DatasetInfo("image_data", frozenset({"point"}),
                                frozenset({"scalars"}))
    poly = DatasetInfo("poly_data")
    poly_any = DatasetInfo("poly_data", frozenset({"point"}), frozenset())

    def node(cls):
        return lambda: cls()

    reg.register(NodeMetadata("array_source", "source", "Array source",
                              output_info=image_scalars),
                 node(kernels.ArraySource))
    reg.register(NodeMetadata("parametric_curve_source", "source",
                              "Parametric curve", output_info=poly),
                 node(kernels.ParametricCurveSource))
    reg.register(NodeMetadata("line_source", "source", "Line source",
                              output_info=poly),
                 node(kernels.LineSource))
    reg.register(NodeMetadata("text_array_source", "source", "Array text files",
                              extensions=("txt",),
                              wildcards="TXT files (*.txt)|*.txt",
                              output_info=image_scalars),
                 node(kernels.TextArraySource))
    reg.register(NodeMetadata("vtk_file_source", "source", "VTK files",
                              extensions=("vtk",),
                              wildcards="VTK files (*.vtk)|*.vtk",
                              output_info=ANY),
                 node(kernels.VtkFileSource))
    reg.register(NodeMetadata("poly_data_normals", "filter", "Compute normals",
                              input_info=poly_any, output_info=poly),
                 node(kernels.PolyDataNormals))
    reg.register(NodeMetadata("iso_surface", "module", "Iso surface",
                              input_info=image_scalars, output_info=poly),
                 node(kernels.IsoSurface))
    reg.register(NodeMetadata("surface", "module", "Surface",
                              input_info=poly_any, output_info=poly),
                 node(kernels.Surface))
    reg.register(NodeMetadata("outline", "module", "Outline",
                              input_info=ANY, output_info=poly),
                 node(kernels.Outline))

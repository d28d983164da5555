"""Exception hierarchy shared by all vizpipe modules."""


class VizpipeError(Exception):
    """Base class for every error raised by this package."""


# --- datasets ---------------------------------------------------------------

class DatasetShapeError(VizpipeError):
    pass


class DatasetParamError(VizpipeError):
    pass


class DatasetAttributeError(VizpipeError):
    pass


class DatasetEmptyError(VizpipeError):
    pass


class ShapeError(VizpipeError):
    pass


class RangeError(VizpipeError):
    pass


# --- observable objects -----------------------------------------------------

class UnknownPropertyError(VizpipeError):
    pass


class ValidationError(VizpipeError):
    pass


class ReentrancyError(VizpipeError):
    pass


# --- pipeline / engine ------------------------------------------------------

class PipelineStructureError(VizpipeError):
    pass


class EngineStateError(VizpipeError):
    pass


class StateLoadError(VizpipeError):
    pass


class RegistryError(VizpipeError):
    pass


# --- file IO ----------------------------------------------------------------

class ParseError(VizpipeError):
    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class UnsupportedDatasetError(VizpipeError):
    pass


class UnsupportedCellError(VizpipeError):
    pass


class UnsupportedFormatError(VizpipeError):
    pass


# --- mlab / recorder --------------------------------------------------------

class UnknownSlotError(VizpipeError):
    pass


class RecorderStateError(VizpipeError):
    pass


class ReplayError(VizpipeError):
    def __init__(self, message, index=None):
        if index is not None:
            message = "record %d: %s" % (index, message)
        super().__init__(message)
        self.index = index

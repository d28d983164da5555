"""Typed, validated, observable properties for pipeline objects.

Every pipeline object carries a set of declared properties.  Setting one
validates the value against its descriptor, stores it, and notifies the
subscribers synchronously in subscription order.  Setting a property to its
current value is a no-op and emits nothing.  The descriptors are
self-describing enough to auto-generate property editors (see the gateway's
``/describe`` endpoint and the studio UI).
"""

import itertools
from dataclasses import dataclass
from typing import Any, Optional

from .errors import ReentrancyError, UnknownPropertyError, ValidationError

__all__ = ["PropertyDescriptor", "ChangeEvent", "ObservableObject"]

KINDS = ("float", "int", "bool", "enum", "color_rgba", "float_triplet",
         "float_list", "text")


@dataclass(frozen=True)
class PropertyDescriptor:
    name: str
    kind: str
    default: Any = None
    bounds: Optional[tuple] = None  # (lo, hi), numeric kinds only
    choices: Optional[tuple] = None  # required for enum

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("unknown property kind %r" % (self.kind,))
        if self.kind == "enum" and not self.choices:
            raise ValueError("enum property %r needs choices" % (self.name,))
        object.__setattr__(self, "default", self.coerce(self.default))

    def coerce(self, value):
        """Validate `value` against this descriptor; return the stored form."""
        kind = self.kind
        if kind == "float":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError("%s: expected a number, got %r" % (self.name, value))
            value = float(value)
            self._check_bounds(value)
        elif kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError("%s: expected an int, got %r" % (self.name, value))
            self._check_bounds(value)
        elif kind == "bool":
            if not isinstance(value, bool):
                raise ValidationError("%s: expected a bool, got %r" % (self.name, value))
        elif kind == "enum":
            if value not in self.choices:
                raise ValidationError(
                    "%s: %r is not one of %r" % (self.name, value, self.choices)
                )
        elif kind in ("color_rgba", "float_triplet"):
            n = 4 if kind == "color_rgba" else 3
            try:
                value = tuple(float(v) for v in value)
            except (TypeError, ValueError):
                raise ValidationError("%s: expected %d numbers" % (self.name, n))
            if len(value) != n:
                raise ValidationError("%s: expected %d numbers, got %d" % (self.name, n, len(value)))
            if kind == "color_rgba" and not all(0.0 <= v <= 1.0 for v in value):
                raise ValidationError("%s: color components must be in [0, 1]" % self.name)
        elif kind == "float_list":
            try:
                value = tuple(float(v) for v in value)
            except (TypeError, ValueError):
                raise ValidationError("%s: expected a list of numbers" % self.name)
            for v in value:
                self._check_bounds(v)
        elif kind == "text":
            if not isinstance(value, str):
                raise ValidationError("%s: expected a string, got %r" % (self.name, value))
        return value

    def _check_bounds(self, value):
        if self.bounds is None:
            return
        lo, hi = self.bounds
        if not lo <= value <= hi:
            raise ValidationError(
                "%s: %r outside bounds [%r, %r]" % (self.name, value, lo, hi)
            )

    def to_json(self, value):
        return {
            "name": self.name,
            "kind": self.kind,
            "default": _jsonable(self.default),
            "bounds": list(self.bounds) if self.bounds else None,
            "choices": list(self.choices) if self.choices else None,
            "value": _jsonable(value),
        }


def _jsonable(value):
    if isinstance(value, tuple):
        return list(value)
    return value


@dataclass(frozen=True)
class ChangeEvent:
    object_id: int
    property_name: str
    old_value: Any
    new_value: Any
    sequence_number: int


class ObservableObject:
    """An object whose declared properties validate on set and notify on change."""

    #: subclasses override with their PropertyDescriptor declarations, in order
    PROPERTIES = ()

    def __init__(self):
        self._descriptors = {d.name: d for d in self.PROPERTIES}
        self._order = [d.name for d in self.PROPERTIES]
        self._values = {d.name: d.default for d in self.PROPERTIES}
        self._subscribers = []
        self._sub_counter = itertools.count()
        self._in_flight = set()
        self.object_id = id(self)
        # replaced by the owning engine so sequence numbers are per engine
        self._clock = itertools.count()

    # --- property access -----------------------------------------------

    def descriptor(self, name):
        try:
            return self._descriptors[name]
        except KeyError:
            raise UnknownPropertyError("no property named %r" % (name,)) from None

    def get_property(self, name):
        self.descriptor(name)
        return self._values[name]

    def set_property(self, name, value):
        """Set a property; returns the ChangeEvent, or None on a no-op."""
        desc = self.descriptor(name)
        value = desc.coerce(value)
        old = self._values[name]
        if value == old:
            return None
        if name in self._in_flight:
            raise ReentrancyError(
                "re-entrant set of %r during its own notification" % (name,)
            )
        self._values[name] = value
        event = ChangeEvent(self.object_id, name, old, value, next(self._clock))
        self._in_flight.add(name)
        try:
            for _, sink in list(self._subscribers):
                sink(event)
        finally:
            self._in_flight.discard(name)
        return event

    def describe(self):
        """Descriptors plus current values, in declaration order."""
        return [self._descriptors[n].to_json(self._values[n]) for n in self._order]

    # --- notification ----------------------------------------------------

    def subscribe(self, sink):
        handle = (next(self._sub_counter), sink)
        self._subscribers.append(handle)
        return handle

    def unsubscribe(self, handle):
        try:
            self._subscribers.remove(handle)
        except ValueError:
            pass  # double-unsubscribe is a no-op

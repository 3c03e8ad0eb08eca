"""This package contains internal utilities."""

# pylint: disable=too-few-public-methods
from abc import ABCMeta
from enum import Enum
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def json_key(key: Any) -> str:
    """Flatten a coordinate-like key into a stable string.

    ``((0, 1, 0), "xy")`` becomes ``"0,1,0,xy"``.
    """
    if isinstance(key, (tuple, list)):
        return ",".join(json_key(k) for k in key)
    if isinstance(key, Enum):
        return str(key.value)
    return str(key)


def to_jsonable(value: Any) -> Any:
    """Convert nested model data into JSON-compatible builtins."""
    # pylint: disable=too-many-return-statements
    if hasattr(value, "to_dict") and callable(value.to_dict):
        return value.to_dict()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (set, frozenset)):
        return sorted((to_jsonable(v) for v in value), key=json_key)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {json_key(k): to_jsonable(v) for k, v in sorted(value.items())}
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


class Model(metaclass=ABCMeta):
    """Shared methods for xcubeprep model classes."""

    def __eq__(self, other: object) -> bool:
        return isinstance(other, self.__class__) and self.to_dict() == other.to_dict()

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict:
        """Returns a dict of the object suitable for serialization."""
        result = {}
        for key, value in self.__dict__.items():
            if key.startswith("_") or value is None:
                continue
            result[key] = to_jsonable(value)
        return result

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items())
        return f"{self.__module__}.{self.__class__.__name__}({args})"

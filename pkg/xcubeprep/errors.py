"""
Errors
======

"""

from collections.abc import Sequence
from typing import Any, Optional


class XCubePrepError(RuntimeError):
    """There was a generic error in xcubeprep.

    This class represents a generic error. It extends :py:exc:`RuntimeError`
    and does not add any additional attributes.

    """


class InvalidLatticeError(XCubePrepError):
    """The lattice specification was rejected.

    .. attribute:: field

      The name of the offending specification field, if known.

      :type: str

    """

    field: Optional[str]

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        super().__init__(message)
        self.field = field


class UndefinedStabilizerError(XCubePrepError):
    """A star stabilizer was requested where it is not defined.

    On the open one-storey lattice a star only exists when all four of its
    member edges exist.

    :ivar vertex: The star's vertex
    :ivar plane: The star's plane

    """

    def __init__(self, message: str, vertex: Any = None, plane: Any = None) -> None:
        super().__init__(message)
        self.vertex = vertex
        self.plane = plane


class InvalidGateError(XCubePrepError):
    """A gate operation had duplicate or out-of-range operands."""

    def __init__(self, message: str, op: Any = None) -> None:
        super().__init__(message)
        self.op = op


class OracleSizeError(XCubePrepError):
    """The dense statevector oracle was asked to simulate too many qubits.

    :ivar num_qubits: The requested size
    :ivar limit: The largest supported size

    """

    def __init__(self, message: str, num_qubits: int, limit: int) -> None:
        super().__init__(message)
        self.num_qubits = num_qubits
        self.limit = limit


class InconsistentRecordError(XCubePrepError):
    """The measurement record violates the cube-product constraints.

    No product of X operators can satisfy a record like this one, which
    signals a readout error on an ancilla.

    .. attribute:: violated_layers

      The dual layers, as ``(axis, coordinate)`` pairs, whose outcome
      product is -1. Empty on lattices without layer constraints.

      :type: tuple

    """

    violated_layers: tuple

    def __init__(
        self,
        message: str,
        violated_layers: Sequence[tuple[str, int]] = (),
    ) -> None:
        super().__init__(message)
        self.violated_layers = tuple(violated_layers)


class ColoringError(XCubePrepError):
    """The parity coloring of cubes does not wrap on this lattice.

    :ivar dims: The lattice dimensions
    :ivar suggestion: A hint describing a lattice that does work

    """

    def __init__(
        self,
        message: str,
        dims: Optional[tuple[int, int, int]] = None,
        suggestion: Optional[str] = None,
    ) -> None:
        super().__init__(message)
        self.dims = dims
        self.suggestion = suggestion


class ScheduleError(XCubePrepError):
    """A schedule failed validation.

    :ivar round_index: The offending round, or None for coverage failures
    :ivar conflicts: Pairs of conflicting gate groups

    """

    def __init__(
        self,
        message: str,
        round_index: Optional[int] = None,
        conflicts: Sequence[Any] = (),
    ) -> None:
        super().__init__(message)
        self.round_index = round_index
        self.conflicts = tuple(conflicts)


class CircuitFormatError(XCubePrepError):
    """A line of circuit text could not be parsed.

    :ivar line_number: One-based line number
    :ivar line: The raw line

    """

    def __init__(
        self,
        message: str,
        line_number: Optional[int] = None,
        line: Optional[str] = None,
    ) -> None:
        super().__init__(message)
        self.line_number = line_number
        self.line = line


class InvalidChainError(XCubePrepError):
    """A mobility chain contains a step that is not adjacent to the last."""

    def __init__(self, message: str, step: Optional[int] = None) -> None:
        super().__init__(message)
        self.step = step


class InvalidErrorEventError(XCubePrepError):
    """An error event pairs a target with a stage it cannot occur in."""

    def __init__(self, message: str, event: Any = None) -> None:
        super().__init__(message)
        self.event = event


class InvalidConfigError(XCubePrepError):
    """A run configuration value was invalid."""

    def __init__(self, message: str, key: Optional[str] = None) -> None:
        super().__init__(message)
        self.key = key

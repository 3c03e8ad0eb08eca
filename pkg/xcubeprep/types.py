"""Provides types used across the package."""

from typing import Literal, Union

Axis = Literal["x", "y", "z"]
Plane = Literal["xy", "xz", "yz"]

Vertex = tuple[int, int, int]

# A code qubit is the edge leaving ``vertex`` in the positive ``axis``
# direction.
CodeQubitId = tuple[Vertex, Axis]

# An ancilla is identified by the coordinate of the cube's lowest corner.
AncillaId = Vertex

StarSite = tuple[Vertex, Plane]

QubitTarget = Union[CodeQubitId, AncillaId]

"""
=======
Lattice
=======

Geometry of the code qubits (edges of a cubic lattice) and ancillae (cube
centres), for the fully periodic 3D lattice and for the open three-layer
"one-storey" lattice.

Conventions
-----------

* A code qubit is ``(vertex, axis)``: the edge leaving ``vertex`` in the
  positive ``axis`` direction.
* An ancilla is the coordinate of its cube's lowest corner.
* Code qubits are densely indexed in ``(z, y, x, axis)`` order, ancillae in
  ``(z, y, x)`` order.
* The 12 edges of the cube at ``(a, b, c)`` are listed in this fixed order,
  which is also the order the movement schedule visits them::

    x-edges at (a,b,c) (a,b+1,c) (a,b,c+1) (a,b+1,c+1)
    y-edges at (a,b,c) (a+1,b,c) (a,b,c+1) (a+1,b,c+1)
    z-edges at (a,b,c) (a+1,b,c) (a,b+1,c) (a+1,b+1,c)

* A star at ``(vertex, plane)`` lists ``+u, -u, +v, -v`` where ``plane`` is
  spanned by axes ``u`` then ``v``.

With periodic ``lz = 1`` the vertical edge of a vertex wraps onto itself.
Cubes then list their horizontal edges twice and the ``xz``/``yz`` stars
list their vertical edge twice; such repeats cancel in every Pauli product.
The condition is flagged by :py:attr:`Lattice.self_wrapped_vertical`.

"""

import json
import logging
from collections.abc import Iterator
from enum import Enum
from typing import Any, Optional, Union

import numpy as np

from xcubeprep._internal import SCHEMA_VERSION, Model
from xcubeprep.errors import InvalidLatticeError, UndefinedStabilizerError
from xcubeprep.types import AncillaId, Axis, CodeQubitId, Plane, StarSite, Vertex

logger = logging.getLogger(__name__)

AXES: tuple[Axis, ...] = ("x", "y", "z")
PLANES: tuple[Plane, ...] = ("xy", "xz", "yz")

_UNIT = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}

_CUBE_EDGE_OFFSETS: tuple[tuple[Axis, Vertex], ...] = (
    ("x", (0, 0, 0)),
    ("x", (0, 1, 0)),
    ("x", (0, 0, 1)),
    ("x", (0, 1, 1)),
    ("y", (0, 0, 0)),
    ("y", (1, 0, 0)),
    ("y", (0, 0, 1)),
    ("y", (1, 0, 1)),
    ("z", (0, 0, 0)),
    ("z", (1, 0, 0)),
    ("z", (0, 1, 0)),
    ("z", (1, 1, 0)),
)


class Boundary(Enum):
    """Boundary conditions of a lattice."""

    PERIODIC_3D = "periodic"
    ONE_STOREY_OPEN = "one-storey"


def shift(vertex: Vertex, axis: str, step: int = 1) -> Vertex:
    """Move ``vertex`` by ``step`` along ``axis`` (no wrapping)."""
    dx, dy, dz = _UNIT[axis]
    return (vertex[0] + step * dx, vertex[1] + step * dy, vertex[2] + step * dz)


class LatticeSpec(Model):
    """The extent and boundary of a lattice.

    .. attribute:: lx

      Number of cubes along x.

      :type: int

    .. attribute:: ly

      Number of cubes along y.

      :type: int

    .. attribute:: lz

      Number of cubes along z. Always 1 for the one-storey lattice.

      :type: int

    .. attribute:: boundary

      :type: :py:class:`Boundary`

    """

    lx: int
    ly: int
    lz: int
    boundary: Boundary

    def __init__(
        self,
        lx: int,
        ly: int,
        lz: int,
        boundary: Union[Boundary, str] = Boundary.PERIODIC_3D,
    ) -> None:
        try:
            boundary = Boundary(boundary)
        except ValueError as ex:
            raise InvalidLatticeError(
                f"Unknown boundary {boundary!r}; expected one of "
                + ", ".join(b.value for b in Boundary),
                "boundary",
            ) from ex
        for name, value, minimum in (("lx", lx, 2), ("ly", ly, 2), ("lz", lz, 1)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidLatticeError(f"{name} must be an integer", name)
            if value < minimum:
                raise InvalidLatticeError(
                    f"{name} must be at least {minimum}, got {value}",
                    name,
                )
        if boundary is Boundary.ONE_STOREY_OPEN and lz != 1:
            raise InvalidLatticeError(
                f"the one-storey lattice has exactly one layer of cubes, got lz={lz}",
                "lz",
            )
        self.lx = lx
        self.ly = ly
        self.lz = lz
        self.boundary = boundary

    def __hash__(self) -> int:
        return hash((self.lx, self.ly, self.lz, self.boundary))

    @property
    def periodic(self) -> bool:
        """Whether all three directions wrap."""
        return self.boundary is Boundary.PERIODIC_3D

    @property
    def dims(self) -> tuple[int, int, int]:
        """The cube counts ``(lx, ly, lz)``."""
        return (self.lx, self.ly, self.lz)


class Star(Model):
    """A planar star stabilizer.

    .. attribute:: vertex

      :type: tuple

    .. attribute:: plane

      One of ``"xy"``, ``"xz"``, ``"yz"``.

      :type: str

    .. attribute:: members

      The four member edges, ``+u, -u, +v, -v``.

      :type: tuple

    .. attribute:: degenerate

      True when two members coincide under periodic identification.

      :type: bool

    """

    def __init__(
        self,
        vertex: Vertex,
        plane: Plane,
        members: tuple[CodeQubitId, ...],
    ) -> None:
        self.vertex = vertex
        self.plane = plane
        self.members = members
        self.degenerate = len(set(members)) != len(members)

    @property
    def site(self) -> StarSite:
        """The ``(vertex, plane)`` key of this star."""
        return (self.vertex, self.plane)


class Lattice:
    """Code/ancilla geometry with dense index maps and adjacency.

    Instances are immutable after construction and safe to share between
    threads.
    """

    # pylint: disable=too-many-instance-attributes

    spec: LatticeSpec
    code_ids: tuple[CodeQubitId, ...]
    ancilla_ids: tuple[AncillaId, ...]
    ancilla_adj: dict[AncillaId, tuple[CodeQubitId, ...]]
    code_adj: dict[CodeQubitId, tuple[AncillaId, ...]]
    star_sites: tuple[Star, ...]
    undefined_stars: tuple[StarSite, ...]

    def __init__(self, spec: LatticeSpec) -> None:
        self.spec = spec
        self.code_ids = tuple(sorted(self._enumerate_edges(), key=_code_sort_key))
        self.ancilla_ids = tuple(sorted(self._enumerate_cubes(), key=_vertex_sort_key))
        self.code_index = {cid: i for i, cid in enumerate(self.code_ids)}
        self.ancilla_index = {aid: i for i, aid in enumerate(self.ancilla_ids)}

        self.ancilla_adj = {
            aid: tuple(
                self._edge(shift_by(aid, offset), axis)
                for axis, offset in _CUBE_EDGE_OFFSETS
            )
            for aid in self.ancilla_ids
        }
        code_adj: dict[CodeQubitId, list[AncillaId]] = {c: [] for c in self.code_ids}
        for aid in self.ancilla_ids:
            for cid in self.ancilla_adj[aid]:
                code_adj[cid].append(aid)
        self.code_adj = {cid: tuple(aids) for cid, aids in code_adj.items()}

        stars = []
        undefined = []
        for vertex in sorted(self.vertices(), key=_vertex_sort_key):
            for plane in PLANES:
                members = self._star_members_or_none(vertex, plane)
                if members is None:
                    undefined.append((vertex, plane))
                else:
                    stars.append(Star(vertex, plane, members))
        self.star_sites = tuple(stars)
        self.undefined_stars = tuple(undefined)
        self._stars = {s.site: s for s in stars}

        self.ancilla_adj_index = np.array(
            [[self.code_index[c] for c in self.ancilla_adj[a]] for a in self.ancilla_ids],
            dtype=np.int64,
        ).reshape(len(self.ancilla_ids), 12)

        logger.info(
            "built %s lattice %dx%dx%d: %d code qubits, %d ancillae, %d stars",
            spec.boundary.value,
            spec.lx,
            spec.ly,
            spec.lz,
            self.code_count,
            self.ancilla_count,
            len(self.star_sites),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lattice) and self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        s = self.spec
        return f"{self.__module__}.Lattice({s.lx}, {s.ly}, {s.lz}, {s.boundary.value!r})"

    # -- counts and flags ---------------------------------------------------

    @property
    def code_count(self) -> int:
        """Number of code qubits."""
        return len(self.code_ids)

    @property
    def ancilla_count(self) -> int:
        """Number of ancillae."""
        return len(self.ancilla_ids)

    @property
    def num_qubits(self) -> int:
        """Total simulated qubits: code qubits first, then ancillae."""
        return self.code_count + self.ancilla_count

    @property
    def self_wrapped_vertical(self) -> bool:
        """True for periodic ``lz = 1``, where vertical edges wrap onto themselves."""
        return self.spec.periodic and self.spec.lz == 1

    def qubit_of_code(self, cid: CodeQubitId) -> int:
        """Simulation index of a code qubit."""
        return self.code_index[self.normalize_edge(cid)]

    def qubit_of_ancilla(self, aid: AncillaId) -> int:
        """Simulation index of an ancilla."""
        return self.code_count + self.ancilla_index[self.normalize_vertex(aid)]

    # -- geometry -----------------------------------------------------------

    def vertices(self) -> Iterator[Vertex]:
        """Iterate over all (normalised) lattice vertices."""
        s = self.spec
        if s.periodic:
            for z in range(s.lz):
                for y in range(s.ly):
                    for x in range(s.lx):
                        yield (x, y, z)
        else:
            for z in range(2):
                for y in range(s.ly + 1):
                    for x in range(s.lx + 1):
                        yield (x, y, z)

    def normalize_vertex(self, vertex: Vertex) -> Vertex:
        """Wrap a vertex into the fundamental domain (periodic only)."""
        if not self.spec.periodic:
            return tuple(vertex)  # type: ignore[return-value]
        s = self.spec
        return (vertex[0] % s.lx, vertex[1] % s.ly, vertex[2] % s.lz)

    def normalize_edge(self, cid: CodeQubitId) -> CodeQubitId:
        """Wrap an edge id into the fundamental domain."""
        return (self.normalize_vertex(cid[0]), cid[1])

    def has_edge(self, vertex: Vertex, axis: str) -> bool:
        """Whether the edge leaving ``vertex`` along ``axis`` exists."""
        if self.spec.periodic:
            return True
        x, y, z = vertex
        s = self.spec
        if not (0 <= x <= s.lx and 0 <= y <= s.ly and 0 <= z <= 1):
            return False
        if axis == "x":
            return x < s.lx
        if axis == "y":
            return y < s.ly
        return z < 1

    def has_cube(self, aid: AncillaId) -> bool:
        """Whether a cube exists at ``aid`` (after wrapping)."""
        if self.spec.periodic:
            return True
        s = self.spec
        return 0 <= aid[0] < s.lx and 0 <= aid[1] < s.ly and aid[2] == 0

    def endpoints(self, cid: CodeQubitId) -> tuple[Vertex, Vertex]:
        """The two vertices joined by an edge."""
        vertex, axis = cid
        return (
            self.normalize_vertex(vertex),
            self.normalize_vertex(shift(vertex, axis)),
        )

    def cube_vertices(self, aid: AncillaId) -> frozenset[Vertex]:
        """The (normalised) corner vertices of a cube."""
        a, b, c = aid
        return frozenset(
            self.normalize_vertex((a + dx, b + dy, c + dz))
            for dx in (0, 1)
            for dy in (0, 1)
            for dz in (0, 1)
        )

    def cubes_of_edge(self, cid: CodeQubitId) -> tuple[AncillaId, ...]:
        """Cubes containing an edge, with multiplicity (alias of ``code_adj``)."""
        return self.code_adj[self.normalize_edge(cid)]

    def stars_of_edge(self, cid: CodeQubitId) -> tuple[StarSite, ...]:
        """Defined stars containing ``cid`` an odd number of times."""
        cid = self.normalize_edge(cid)
        return tuple(
            star.site
            for star in self._stars_near(cid)
            if star.members.count(cid) % 2 == 1
        )

    def _stars_near(self, cid: CodeQubitId) -> Iterator[Star]:
        seen = set()
        for vertex in self.endpoints(cid):
            for plane in PLANES:
                star = self._stars.get((vertex, plane))
                if star is not None and star.site not in seen:
                    seen.add(star.site)
                    yield star

    # -- stabilizer sites ---------------------------------------------------

    def star(self, vertex: Vertex, plane: str) -> Star:
        """The star at ``(vertex, plane)``.

        :raises UndefinedStabilizerError: if the star does not exist here.
        """
        if plane not in PLANES:
            raise UndefinedStabilizerError(f"unknown plane {plane!r}", vertex, plane)
        key = (self.normalize_vertex(vertex), plane)
        star = self._stars.get(key)
        if star is None:
            raise UndefinedStabilizerError(
                f"undefined stabilizer: the {plane} star at {vertex} is missing "
                "member edges on this lattice",
                vertex,
                plane,
            )
        if star.degenerate:
            logger.debug("star %s %s has coinciding members", vertex, plane)
        return star

    def star_members(self, vertex: Vertex, plane: str) -> list[CodeQubitId]:
        """The four edges of the star at ``(vertex, plane)``.

        Coinciding members (periodic ``lz = 1``) are kept; check
        :py:attr:`Star.degenerate` via :py:meth:`star`.
        """
        return list(self.star(vertex, plane).members)

    def cube_members(self, aid: AncillaId) -> list[CodeQubitId]:
        """The 12 edges of a cube in canonical order."""
        return list(self.ancilla_adj[self.normalize_vertex(aid)])

    def dual_layers(self) -> dict[tuple[str, int], tuple[int, ...]]:
        """Ancilla indices grouped by each fixed cube coordinate."""
        layers: dict[tuple[str, int], list[int]] = {}
        for i, aid in enumerate(self.ancilla_ids):
            for axis, coordinate in zip(AXES, aid):
                layers.setdefault((axis, coordinate), []).append(i)
        return {key: tuple(v) for key, v in sorted(layers.items())}

    # -- incidence matrices -------------------------------------------------

    def cube_incidence(self) -> np.ndarray:
        """Cube x edge incidence over GF(2) as a ``uint8`` matrix."""
        m = np.zeros((self.ancilla_count, self.code_count), dtype=np.uint8)
        for i in range(self.ancilla_count):
            for j in self.ancilla_adj_index[i]:
                m[i, j] ^= 1
        return m

    def star_incidence(self) -> np.ndarray:
        """Defined-star x edge incidence over GF(2) as a ``uint8`` matrix."""
        m = np.zeros((len(self.star_sites), self.code_count), dtype=np.uint8)
        for i, star in enumerate(self.star_sites):
            for cid in star.members:
                m[i, self.code_index[cid]] ^= 1
        return m

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        """Versioned, JSON-ready description of the lattice."""
        s = self.spec
        return {
            "schema_version": SCHEMA_VERSION,
            "spec": {"lx": s.lx, "ly": s.ly, "lz": s.lz, "boundary": s.boundary.value},
            "code_count": self.code_count,
            "ancilla_count": self.ancilla_count,
            "self_wrapped_vertical": self.self_wrapped_vertical,
            "code_qubits": [[*v, axis] for v, axis in self.code_ids],
            "ancillae": [list(a) for a in self.ancilla_ids],
            "ancilla_adj": self.ancilla_adj_index.tolist(),
            "code_adj": [
                [self.ancilla_index[a] for a in self.code_adj[c]] for c in self.code_ids
            ],
            "stars": [
                [*star.vertex, star.plane, [self.code_index[c] for c in star.members]]
                for star in self.star_sites
            ],
            "undefined_stars": [[*v, plane] for v, plane in self.undefined_stars],
        }

    def to_json(self) -> str:
        """Serialize with sorted keys so equal lattices give equal text."""
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Lattice":
        """Rebuild a lattice and check the stored index maps still match."""
        if data.get("schema_version") != SCHEMA_VERSION:
            raise InvalidLatticeError(
                f"unsupported lattice schema version {data.get('schema_version')!r}",
                "schema_version",
            )
        spec = data["spec"]
        lattice = cls(LatticeSpec(spec["lx"], spec["ly"], spec["lz"], spec["boundary"]))
        if lattice.to_dict() != data:
            raise InvalidLatticeError(
                "stored index maps do not match a fresh build of the same spec",
            )
        return lattice

    # -- construction helpers -----------------------------------------------

    def _edge(self, vertex: Vertex, axis: Axis) -> CodeQubitId:
        return (self.normalize_vertex(vertex), axis)

    def _enumerate_edges(self) -> Iterator[CodeQubitId]:
        for vertex in self.vertices():
            for axis in AXES:
                if self.has_edge(vertex, axis):
                    yield (vertex, axis)

    def _enumerate_cubes(self) -> Iterator[AncillaId]:
        s = self.spec
        for z in range(s.lz):
            for y in range(s.ly):
                for x in range(s.lx):
                    yield (x, y, z)

    def _star_members_or_none(
        self,
        vertex: Vertex,
        plane: Plane,
    ) -> Optional[tuple[CodeQubitId, ...]]:
        members = []
        for axis in plane:
            for tail in (vertex, shift(vertex, axis, -1)):
                if not self.has_edge(tail, axis):
                    return None
                members.append(self._edge(tail, axis))  # type: ignore[arg-type]
        return tuple(members)


def shift_by(vertex: Vertex, offset: Vertex) -> Vertex:
    """Add an offset to a vertex (no wrapping)."""
    return (vertex[0] + offset[0], vertex[1] + offset[1], vertex[2] + offset[2])


def _vertex_sort_key(vertex: Vertex) -> tuple[int, int, int]:
    return (vertex[2], vertex[1], vertex[0])


def _code_sort_key(cid: CodeQubitId) -> tuple[int, int, int, int]:
    (x, y, z), axis = cid
    return (z, y, x, AXES.index(axis))


def build(spec: LatticeSpec) -> Lattice:
    """Build the lattice for ``spec``."""
    return Lattice(spec)

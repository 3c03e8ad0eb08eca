"""
=========
Scheduler
=========

Gate schedules that entangle every ancilla with its 12 cube edges, and the
circuits they expand into.

Two strategies are supported:

``movement``
    Round ``i`` applies one CZ between every ancilla and the ``i``-th edge
    of its cube (in the order documented in :py:mod:`xcubeprep.lattice`),
    so the schedule always has 12 rounds.

``cz12``
    One multi-target CZ per cube. Cubes are grouped by the parity of their
    coordinates; same-parity cubes never share a vertex, so each class runs
    in parallel. That gives 4 rounds when ``lz = 1`` and 8 otherwise. On a
    periodic lattice every wrapped direction of length greater than one must
    be even for the classes to stay non-adjacent. Where it is not,
    :py:func:`greedy_cz12_schedule` colors the cube conflict graph instead.

Gate groups are stored by simulation qubit index: code qubits first, then
ancillae at ``code_count + ancilla_index``. Repeated edges of a cube on a
periodic ``lz = 1`` lattice are folded modulo 2 in ``cz12`` groups, since a
CZ applied twice is the identity.

"""

import itertools
import json
import logging
from collections import Counter
from collections.abc import Sequence
from enum import Enum
from typing import Any, Optional, Union

import networkx as nx

from xcubeprep._internal import SCHEMA_VERSION
from xcubeprep.circuit import Circuit, GateKind
from xcubeprep.errors import ColoringError, ScheduleError
from xcubeprep.lattice import Lattice
from xcubeprep.records import RoundCertificate
from xcubeprep.types import AncillaId

logger = logging.getLogger(__name__)

Group = tuple[int, tuple[int, ...]]


class Strategy(Enum):
    """How the cluster-state CZ gates are grouped into rounds."""

    MOVEMENT = "movement"
    CZ12 = "cz12"


class CircuitForm(Enum):
    """The two equivalent circuit forms of the preparation."""

    CZ = "cz"
    DYNAMIC_CNOT = "dynamic-cnot"


class Schedule:
    """An ordered list of rounds of parallel gate groups.

    :ivar strategy: The :py:class:`Strategy` that produced the schedule
    :ivar rounds: Per round, a tuple of ``(ancilla, targets)`` groups
    :ivar num_qubits: Total simulated qubits
    :ivar ancillae: Qubits that are measured at the end, ascending
    :ivar certificates: One :py:class:`RoundCertificate` per round, filled
      in by :py:func:`validate_schedule`

    """

    strategy: Strategy
    rounds: tuple[tuple[Group, ...], ...]
    num_qubits: int
    ancillae: tuple[int, ...]
    certificates: tuple[RoundCertificate, ...]

    def __init__(
        self,
        strategy: Union[Strategy, str],
        rounds: Sequence[Sequence[Group]],
        num_qubits: int,
        ancillae: Sequence[int],
        colors: Optional[Sequence[tuple[int, ...]]] = None,
    ) -> None:
        self.strategy = Strategy(strategy)
        self.rounds = tuple(
            tuple((int(a), tuple(int(t) for t in targets)) for a, targets in r)
            for r in rounds
        )
        self.num_qubits = num_qubits
        self.ancillae = tuple(sorted(ancillae))
        self.colors = tuple(colors) if colors is not None else None
        self.certificates: tuple[RoundCertificate, ...] = ()

    @property
    def depth(self) -> int:
        """Number of rounds."""
        return len(self.rounds)

    def pairs(self) -> Counter:
        """Multiset of ``(ancilla, code)`` pairs over all rounds."""
        return Counter((a, t) for r in self.rounds for a, targets in r for t in targets)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Schedule) and self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"{self.__module__}.Schedule({self.strategy.value!r}, depth={self.depth}, "
            f"num_qubits={self.num_qubits})"
        )

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form with rounds as ``[[ancilla, [targets...]], ...]``."""
        document: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "strategy": self.strategy.value,
            "num_qubits": self.num_qubits,
            "ancillae": list(self.ancillae),
            "rounds": [[[a, list(targets)] for a, targets in r] for r in self.rounds],
        }
        if self.certificates:
            document["certificates"] = [c.to_dict() for c in self.certificates]
        return document

    def to_json(self) -> str:
        """Serialize with sorted keys."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Schedule":
        """Inverse of :py:meth:`to_dict` (certificates are recomputed on validation)."""
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ScheduleError(
                f"unsupported schedule schema version {data.get('schema_version')!r}",
            )
        return cls(
            data["strategy"],
            [[(a, tuple(t)) for a, t in r] for r in data["rounds"]],
            data["num_qubits"],
            data["ancillae"],
        )


def movement_schedule(lattice: Lattice) -> Schedule:
    """Twelve rounds; round ``i`` pairs each ancilla with its ``i``-th edge."""
    base = lattice.code_count
    rounds = [
        [
            (base + a, (int(lattice.ancilla_adj_index[a, i]),))
            for a in range(lattice.ancilla_count)
        ]
        for i in range(12)
    ]
    schedule = Schedule(
        Strategy.MOVEMENT,
        rounds,
        lattice.num_qubits,
        range(base, base + lattice.ancilla_count),
    )
    logger.info("movement schedule: %d rounds", schedule.depth)
    return schedule


def _check_colorable(lattice: Lattice) -> None:
    spec = lattice.spec
    if not spec.periodic:
        return
    odd = [
        name
        for name, length in (("lx", spec.lx), ("ly", spec.ly), ("lz", spec.lz))
        if length > 1 and length % 2
    ]
    if odd:
        suggestion = ", ".join(
            f"{name}={getattr(spec, name) + 1}" for name in odd
        )
        raise ColoringError(
            f"coloring does not wrap: the parity coloring needs even periodic "
            f"lengths, but {', '.join(odd)} is odd",
            spec.dims,
            f"use {suggestion}, the one-storey lattice, or the movement strategy",
        )


def folded_targets(lattice: Lattice, aid: AncillaId) -> tuple[int, ...]:
    """Code qubits of a cube with odd multiplicity, in canonical edge order."""
    counts = Counter(lattice.code_index[c] for c in lattice.ancilla_adj[aid])
    seen = set()
    targets = []
    for cid in lattice.ancilla_adj[aid]:
        j = lattice.code_index[cid]
        if counts[j] % 2 and j not in seen:
            seen.add(j)
            targets.append(j)
    return tuple(targets)


def color_of(lattice: Lattice, aid: AncillaId) -> tuple[int, int, int]:
    """Parity class of a cube."""
    x, y, z = aid
    return (x % 2, y % 2, 0 if lattice.spec.lz == 1 else z % 2)


def cz12_schedule(lattice: Lattice) -> Schedule:
    """One round per parity class of cubes.

    :raises ColoringError: on periodic lattices with an odd wrapped length.
    """
    _check_colorable(lattice)
    classes: dict[tuple[int, int, int], list[Group]] = {}
    for a, aid in enumerate(lattice.ancilla_ids):
        classes.setdefault(color_of(lattice, aid), []).append(
            (lattice.code_count + a, folded_targets(lattice, aid)),
        )
    colors = sorted(classes)
    schedule = Schedule(
        Strategy.CZ12,
        [classes[c] for c in colors],
        lattice.num_qubits,
        range(lattice.code_count, lattice.num_qubits),
        colors,
    )
    logger.info("cz12 schedule: %d rounds", schedule.depth)
    return schedule


def greedy_cz12_schedule(lattice: Lattice) -> Schedule:
    """One round per color of a greedy coloring of :py:func:`conflict_graph`.

    Unlike :py:func:`cz12_schedule` this works on every lattice, including
    periodic ones with odd lengths, at the price of more rounds: on
    ``(3, 3, 3)`` every pair of cubes touches and each cube gets its own
    round.
    """
    coloring = nx.greedy_color(conflict_graph(lattice), strategy="largest_first")
    classes: dict[int, list[Group]] = {}
    for a, aid in enumerate(lattice.ancilla_ids):
        classes.setdefault(coloring[aid], []).append(
            (lattice.code_count + a, folded_targets(lattice, aid)),
        )
    colors = sorted(classes)
    schedule = Schedule(
        Strategy.CZ12,
        [classes[c] for c in colors],
        lattice.num_qubits,
        range(lattice.code_count, lattice.num_qubits),
        [(c,) for c in colors],
    )
    logger.info("greedy cz12 schedule: %d rounds", schedule.depth)
    return schedule


def build_schedule(lattice: Lattice, strategy: Union[Strategy, str]) -> Schedule:
    """Dispatch on ``strategy``."""
    if Strategy(strategy) is Strategy.MOVEMENT:
        return movement_schedule(lattice)
    return cz12_schedule(lattice)


def conflict_graph(lattice: Lattice) -> nx.Graph:
    """Cubes as nodes, joined when they share at least one vertex."""
    graph = nx.Graph()
    graph.add_nodes_from(lattice.ancilla_ids)
    by_vertex: dict = {}
    for aid in lattice.ancilla_ids:
        for vertex in lattice.cube_vertices(aid):
            by_vertex.setdefault(vertex, []).append(aid)
    for cubes in by_vertex.values():
        graph.add_edges_from(
            (a, b) for a, b in itertools.combinations(sorted(set(cubes)), 2)
        )
    return graph


def _expected_pairs(lattice: Lattice, strategy: Strategy) -> Counter:
    base = lattice.code_count
    expected: Counter = Counter()
    for a, aid in enumerate(lattice.ancilla_ids):
        if strategy is Strategy.MOVEMENT:
            targets: Sequence[int] = [lattice.code_index[c] for c in lattice.ancilla_adj[aid]]
        else:
            targets = folded_targets(lattice, aid)
        for t in targets:
            expected[(base + a, t)] += 1
    return expected


def validate_schedule(schedule: Schedule, lattice: Lattice) -> Schedule:
    """Check coverage and per-round conflicts, attaching round certificates.

    Coverage must equal the lattice adjacency exactly (folded for ``cz12``).
    Within a round no qubit may appear in two groups, and for ``cz12`` no
    two groups may act on cubes that share a vertex.

    :raises ScheduleError: on the first violation.
    """
    expected = _expected_pairs(lattice, schedule.strategy)
    actual = schedule.pairs()
    if actual != expected:
        missing = sorted((expected - actual).elements())
        extra = sorted((actual - expected).elements())
        raise ScheduleError(
            f"schedule coverage differs from the lattice adjacency: "
            f"{len(missing)} missing, {len(extra)} extra pairs",
            None,
            missing[:8] + extra[:8],
        )

    graph = conflict_graph(lattice) if schedule.strategy is Strategy.CZ12 else None
    certificates = []
    for index, groups in enumerate(schedule.rounds):
        used: Counter = Counter()
        for a, targets in groups:
            used.update((a, *targets))
        clashes = sorted(q for q, n in used.items() if n > 1)
        if clashes:
            raise ScheduleError(
                f"round {index} uses qubits {clashes[:8]} in more than one group",
                index,
                clashes,
            )
        checked = 0
        if graph is not None:
            cubes = [lattice.ancilla_ids[a - lattice.code_count] for a, _ in groups]
            conflicts = sorted(graph.subgraph(cubes).edges())
            if conflicts:
                raise ScheduleError(
                    f"round {index} runs cubes that share a vertex: {conflicts[:4]}",
                    index,
                    conflicts,
                )
            checked = len(cubes) * (len(cubes) - 1) // 2
        color = schedule.colors[index] if schedule.colors else None
        certificates.append(
            RoundCertificate(
                index,
                len(groups),
                sum(len(t) for _, t in groups),
                checked,
                color,
            ),
        )
    schedule.certificates = tuple(certificates)
    logger.debug("validated %r", schedule)
    return schedule


def emit_circuit(
    schedule: Schedule,
    form: Union[CircuitForm, str] = CircuitForm.CZ,
) -> Circuit:
    """Expand a schedule into a circuit.

    The CZ form starts every qubit in ``|+>``, runs the scheduled CZ (or
    CZ12) layers and measures the ancillae in the X basis. The dynamic form
    prepares only the code qubits in ``|+>``, replaces each CZ by a CNOT
    from the code qubit onto the ``|0>`` ancilla and measures the ancillae
    in the Z basis. The forms differ by Hadamard pairs that cancel on the
    ancillae, so for the same random stream they give the same outcomes and
    the same code-qubit state.

    Ancilla ``k`` (in ascending order) writes record slot ``k``.
    """
    form = CircuitForm(form)
    circuit = Circuit(schedule.num_qubits)
    ancillae = set(schedule.ancillae)
    for q in range(schedule.num_qubits):
        if form is CircuitForm.CZ or q not in ancillae:
            circuit.add(GateKind.H, q)
    circuit.tick()

    for groups in schedule.rounds:
        for a, targets in groups:
            if form is CircuitForm.DYNAMIC_CNOT:
                for t in targets:
                    circuit.add(GateKind.CNOT, t, a)
            elif schedule.strategy is Strategy.CZ12:
                circuit.add(GateKind.CZ12, a, *targets)
            else:
                for t in targets:
                    circuit.add(GateKind.CZ, a, t)
        circuit.tick()

    measure = GateKind.MX if form is CircuitForm.CZ else GateKind.MZ
    for slot, a in enumerate(schedule.ancillae):
        circuit.add(measure, a, record=slot)
    logger.info(
        "emitted %s form: %d timesteps, %d operations",
        form.value,
        circuit.depth,
        sum(len(m) for m in circuit.moments),
    )
    return circuit

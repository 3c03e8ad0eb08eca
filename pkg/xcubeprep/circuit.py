"""
========
Circuits
========

A :py:class:`Circuit` is a list of timesteps, each a list of
:py:class:`GateOp`. Circuits have a line-oriented text form::

    # comment (anywhere after '#')
    QUBITS 16
    H q0
    CZ q1 q7
    CNOT q3 q12
    CZ12 a12 : c0 c1 c4 c6 c13 c15 c16 c19 c2 c5 c14 c17
    MX q12 -> m0
    MZ q13 -> m1
    TICK

Grammar:

* Tokens are whitespace separated; blank lines are ignored.
* A qubit token is a prefix ``q``, ``a`` or ``c`` followed by the
  simulation index. The prefix only annotates the role (``a`` ancilla,
  ``c`` code qubit); all three address the same index space.
* ``QUBITS n`` is optional and must precede the first gate. Without it the
  qubit count is one more than the largest index used.
* ``CZ12`` takes one control, a ``:`` separator and 1..12 distinct targets.
* ``MX``/``MZ`` write their outcome to the record slot after ``->``.
* ``TICK`` closes the current timestep.

:py:meth:`Circuit.to_text` writes ``a``/``c`` prefixes for ``CZ12``
operands and ``q`` everywhere else, so emitting a parsed emission gives
the same text back.

"""

import logging
import os
import re
from collections.abc import Iterator, Sequence
from enum import Enum
from typing import IO, Optional, Union

import numpy as np

from xcubeprep._internal import Model
from xcubeprep.errors import CircuitFormatError, InvalidGateError
from xcubeprep.tableau import Tableau

logger = logging.getLogger(__name__)

MAX_CZ_TARGETS = 12

_QUBIT = re.compile(r"^[qac](\d+)$")
_RECORD = re.compile(r"^m(\d+)$")


class GateKind(Enum):
    """Supported operations."""

    H = "H"
    X = "X"
    Z = "Z"
    CZ = "CZ"
    CNOT = "CNOT"
    CZ12 = "CZ12"
    MX = "MX"
    MZ = "MZ"

    @property
    def is_measurement(self) -> bool:
        """Whether this kind writes a measurement record."""
        return self in (GateKind.MX, GateKind.MZ)


_ARITY = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.Z: 1,
    GateKind.CZ: 2,
    GateKind.CNOT: 2,
    GateKind.MX: 1,
    GateKind.MZ: 1,
}


class GateOp:
    """One gate or measurement.

    :ivar kind: The :py:class:`GateKind`
    :ivar qubits: Operand indices; for ``CZ12`` the control comes first
    :ivar record: Measurement record slot, for ``MX``/``MZ`` only

    """

    __slots__ = ("kind", "qubits", "record")

    def __init__(
        self,
        kind: Union[GateKind, str],
        qubits: Sequence[int],
        record: Optional[int] = None,
    ) -> None:
        kind = GateKind(kind)
        qubits = tuple(int(q) for q in qubits)
        if kind is GateKind.CZ12:
            if not 2 <= len(qubits) <= MAX_CZ_TARGETS + 1:
                raise InvalidGateError(
                    f"CZ12 takes a control and 1..{MAX_CZ_TARGETS} targets, "
                    f"got {len(qubits)} operands",
                    qubits,
                )
        elif len(qubits) != _ARITY[kind]:
            raise InvalidGateError(
                f"{kind.value} takes {_ARITY[kind]} operand(s), got {len(qubits)}",
                qubits,
            )
        if len(set(qubits)) != len(qubits):
            raise InvalidGateError(f"{kind.value} has duplicate operands {qubits}", qubits)
        if any(q < 0 for q in qubits):
            raise InvalidGateError(f"{kind.value} has negative operands {qubits}", qubits)
        if kind.is_measurement and record is None:
            raise InvalidGateError(f"{kind.value} needs a record slot", qubits)
        if not kind.is_measurement and record is not None:
            raise InvalidGateError(f"{kind.value} does not write a record", qubits)
        self.kind = kind
        self.qubits = qubits
        self.record = record

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GateOp)
            and self.kind is other.kind
            and self.qubits == other.qubits
            and self.record == other.record
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.qubits, self.record))

    def __repr__(self) -> str:
        return f"{self.__module__}.GateOp({self.kind.value!r}, {self.qubits!r}, {self.record!r})"

    def to_text(self) -> str:
        """One line of the text format."""
        if self.kind is GateKind.CZ12:
            control, *targets = self.qubits
            return f"CZ12 a{control} : " + " ".join(f"c{t}" for t in targets)
        operands = " ".join(f"q{q}" for q in self.qubits)
        if self.kind.is_measurement:
            return f"{self.kind.value} {operands} -> m{self.record}"
        return f"{self.kind.value} {operands}"

    def apply(self, tableau: Tableau, rng: np.random.Generator) -> Optional[int]:
        """Apply to a tableau; returns the outcome for measurements."""
        kind = self.kind
        if kind is GateKind.H:
            tableau.h(self.qubits[0])
        elif kind is GateKind.X:
            tableau.x(self.qubits[0])
        elif kind is GateKind.Z:
            tableau.z(self.qubits[0])
        elif kind is GateKind.CZ:
            tableau.cz(*self.qubits)
        elif kind is GateKind.CNOT:
            tableau.cnot(*self.qubits)
        elif kind is GateKind.CZ12:
            tableau.cz_multi(self.qubits[0], self.qubits[1:])
        else:
            outcome, _ = tableau.measure(self.qubits[0], kind.value[1], rng)
            return outcome
        return None


class CircuitResult(Model):
    """Final state and measurement outcomes of a circuit run.

    .. attribute:: outcomes

      Record slot to outcome (+1 or -1).

      :type: dict

    """

    def __init__(self, tableau: Tableau, outcomes: dict[int, int]) -> None:
        self._tableau = tableau
        self.outcomes = outcomes

    @property
    def tableau(self) -> Tableau:
        """The post-circuit state."""
        return self._tableau


class Circuit:
    """A timestep-ordered list of gate operations."""

    num_qubits: int
    moments: list[list[GateOp]]

    def __init__(self, num_qubits: int) -> None:
        if num_qubits < 1:
            raise InvalidGateError(f"a circuit needs at least one qubit, got {num_qubits}")
        self.num_qubits = num_qubits
        self.moments = [[]]

    def append(self, op: GateOp) -> None:
        """Add ``op`` to the current timestep."""
        if max(op.qubits) >= self.num_qubits:
            raise InvalidGateError(
                f"{op.to_text()} addresses a qubit beyond {self.num_qubits}",
                op,
            )
        self.moments[-1].append(op)

    def add(
        self,
        kind: Union[GateKind, str],
        *qubits: int,
        record: Optional[int] = None,
    ) -> None:
        """Shorthand for ``append(GateOp(kind, qubits, record))``."""
        self.append(GateOp(kind, qubits, record))

    def tick(self) -> None:
        """Close the current timestep (no-op if it is empty)."""
        if self.moments[-1]:
            self.moments.append([])

    def ops(self) -> Iterator[GateOp]:
        """All operations in execution order."""
        for moment in self.moments:
            yield from moment

    @property
    def depth(self) -> int:
        """Number of non-empty timesteps."""
        return sum(1 for m in self.moments if m)

    @property
    def num_records(self) -> int:
        """One more than the largest record slot, or 0."""
        slots = [op.record for op in self.ops() if op.record is not None]
        return max(slots) + 1 if slots else 0

    def count(self, kind: Union[GateKind, str]) -> int:
        """Number of operations of ``kind``."""
        kind = GateKind(kind)
        return sum(1 for op in self.ops() if op.kind is kind)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Circuit)
            and self.num_qubits == other.num_qubits
            and [m for m in self.moments if m] == [m for m in other.moments if m]
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"{self.__module__}.Circuit(num_qubits={self.num_qubits}, "
            f"depth={self.depth}, ops={sum(len(m) for m in self.moments)})"
        )

    # -- simulation ---------------------------------------------------------

    def run(
        self,
        rng: np.random.Generator,
        tableau: Optional[Tableau] = None,
    ) -> CircuitResult:
        """Simulate from ``|0...0>`` (or a given tableau, which is mutated)."""
        if tableau is None:
            tableau = Tableau(self.num_qubits)
        elif tableau.n != self.num_qubits:
            raise InvalidGateError(
                f"tableau has {tableau.n} qubits, circuit has {self.num_qubits}",
            )
        outcomes: dict[int, int] = {}
        for op in self.ops():
            outcome = op.apply(tableau, rng)
            if outcome is not None:
                outcomes[op.record] = outcome  # type: ignore[index]
        logger.debug("ran %r, %d outcomes", self, len(outcomes))
        return CircuitResult(tableau, outcomes)

    # -- text format --------------------------------------------------------

    def to_text(self, header: Sequence[str] = ()) -> str:
        """Serialize to the text format, with optional ``#`` header lines."""
        lines = [f"# {h}" for h in header]
        lines.append(f"QUBITS {self.num_qubits}")
        moments = [m for m in self.moments if m]
        for i, moment in enumerate(moments):
            lines.extend(op.to_text() for op in moment)
            if i < len(moments) - 1:
                lines.append("TICK")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        """Parse the text format."""
        declared: Optional[int] = None
        moments: list[list[GateOp]] = [[]]
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            head = tokens[0].upper()
            try:
                if head == "QUBITS":
                    if declared is not None or any(moments):
                        raise CircuitFormatError("QUBITS must come first, once")
                    declared = int(tokens[1])
                    if len(tokens) != 2:
                        raise CircuitFormatError("QUBITS takes one count")
                elif head == "TICK":
                    if len(tokens) != 1:
                        raise CircuitFormatError("TICK takes no operands")
                    if moments[-1]:
                        moments.append([])
                else:
                    moments[-1].append(_parse_op(head, tokens[1:]))
            except (CircuitFormatError, InvalidGateError, ValueError, IndexError) as ex:
                raise CircuitFormatError(
                    f"line {number}: {ex} in {raw.strip()!r}",
                    number,
                    raw,
                ) from ex

        used = [q for moment in moments for op in moment for q in op.qubits]
        num_qubits = declared if declared is not None else max(used, default=-1) + 1
        circuit = cls(num_qubits)
        for i, moment in enumerate(m for m in moments if m):
            if i:
                circuit.tick()
            for op in moment:
                circuit.append(op)
        return circuit


def _qubit(token: str) -> int:
    match = _QUBIT.match(token)
    if match is None:
        raise CircuitFormatError(f"bad qubit token {token!r}")
    return int(match.group(1))


def _parse_op(head: str, operands: list[str]) -> GateOp:
    try:
        kind = GateKind(head)
    except ValueError as ex:
        raise CircuitFormatError(f"unknown operation {head!r}") from ex
    if kind is GateKind.CZ12:
        if len(operands) < 3 or operands[1] != ":":
            raise CircuitFormatError("CZ12 needs 'control : targets'")
        return GateOp(kind, [_qubit(operands[0])] + [_qubit(t) for t in operands[2:]])
    if kind.is_measurement:
        if len(operands) != 3 or operands[1] != "->":
            raise CircuitFormatError(f"{head} needs 'qubit -> mN'")
        match = _RECORD.match(operands[2])
        if match is None:
            raise CircuitFormatError(f"bad record token {operands[2]!r}")
        return GateOp(kind, [_qubit(operands[0])], int(match.group(1)))
    return GateOp(kind, [_qubit(t) for t in operands])


def load(fileish: Union[str, os.PathLike, IO[str]]) -> Circuit:
    """Read a circuit from a path or an open text file."""
    if hasattr(fileish, "read"):
        return Circuit.from_text(fileish.read())  # type: ignore[union-attr]
    with open(fileish, encoding="utf-8") as f:  # type: ignore[arg-type]
        return Circuit.from_text(f.read())


def dump(circuit: Circuit, path: Union[str, os.PathLike], header: Sequence[str] = ()) -> None:
    """Write a circuit in the text format."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(circuit.to_text(header))

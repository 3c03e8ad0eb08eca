"""

Records
=======

Small value records passed between the pipeline stages.

"""

# pylint:disable=too-many-arguments,too-many-positional-arguments,R0903

from abc import ABCMeta
from collections.abc import Iterable, Mapping
from enum import Enum
from typing import TYPE_CHECKING, Optional, Union

import numpy as np

from xcubeprep._internal import Model
from xcubeprep.errors import InvalidErrorEventError
from xcubeprep.types import AncillaId, CodeQubitId, QubitTarget

if TYPE_CHECKING:
    from xcubeprep.lattice import Lattice


class Record(Model, metaclass=ABCMeta):
    """All records are subclasses of the abstract class ``Record``."""


class MeasurementRecord(Record):
    """X-basis outcomes of every ancilla.

    Outcomes are produced in ascending ancilla index order, which is the
    only order the pipeline measures in.

    .. attribute:: outcomes

      Ancilla coordinate to outcome (+1 or -1).

      :type: dict

    .. attribute:: seed

      The seed of the random stream the outcomes were drawn from, if known.

      :type: int

    .. attribute:: order

      Always ``"ascending-ancilla-index"``.

      :type: str

    """

    outcomes: dict[AncillaId, int]
    seed: Optional[int]
    order: str

    def __init__(
        self,
        outcomes: Mapping[AncillaId, int],
        seed: Optional[int] = None,
    ) -> None:
        for aid, value in outcomes.items():
            if value not in (1, -1):
                raise ValueError(f"outcome of ancilla {aid} must be +1 or -1, got {value}")
        self.outcomes = dict(outcomes)
        self.seed = seed
        self.order = "ascending-ancilla-index"

    @classmethod
    def from_values(
        cls,
        lattice: "Lattice",
        values: Iterable[int],
        seed: Optional[int] = None,
    ) -> "MeasurementRecord":
        """Build from outcomes listed in ancilla index order."""
        values = [int(v) for v in values]
        if len(values) != lattice.ancilla_count:
            raise ValueError(
                f"expected {lattice.ancilla_count} outcomes, got {len(values)}",
            )
        return cls(dict(zip(lattice.ancilla_ids, values)), seed)

    def values(self, lattice: "Lattice") -> np.ndarray:
        """Outcomes as an ``int8`` array in ancilla index order."""
        return np.array([self.outcomes[a] for a in lattice.ancilla_ids], dtype=np.int8)

    def syndrome_bits(self, lattice: "Lattice") -> np.ndarray:
        """The right-hand side ``b_a = (1 - m_a) / 2`` of the correction system."""
        return ((1 - self.values(lattice)) // 2).astype(np.uint8)

    @property
    def product(self) -> int:
        """Product of all outcomes."""
        return -1 if sum(v == -1 for v in self.outcomes.values()) % 2 else 1

    def layer_products(self, lattice: "Lattice") -> dict[tuple[str, int], int]:
        """Outcome product over each dual layer."""
        values = self.values(lattice)
        return {
            key: int(np.prod(values[list(members)]))
            for key, members in lattice.dual_layers().items()
        }

    def violated_layers(self, lattice: "Lattice") -> tuple[tuple[str, int], ...]:
        """Dual layers whose outcome product is -1 (periodic lattices only)."""
        if not lattice.spec.periodic:
            return ()
        return tuple(k for k, v in self.layer_products(lattice).items() if v == -1)

    def flipped(self, aid: AncillaId) -> "MeasurementRecord":
        """A copy with the outcome of ``aid`` negated."""
        outcomes = dict(self.outcomes)
        outcomes[aid] = -outcomes[aid]
        return MeasurementRecord(outcomes, self.seed)

    def to_dict(self) -> dict:
        result = super().to_dict()
        result["outcomes"] = [
            [*aid, value] for aid, value in sorted(self.outcomes.items(), key=_vertex_key)
        ]
        return result


class CorrectionFrame(Record):
    """The support of the ``X`` correction layer.

    .. attribute:: x_support

      Code qubits that receive an X.

      :type: frozenset

    """

    x_support: frozenset[CodeQubitId]

    def __init__(self, x_support: Iterable[CodeQubitId] = ()) -> None:
        self.x_support = frozenset(x_support)

    @classmethod
    def from_bits(cls, lattice: "Lattice", bits: np.ndarray) -> "CorrectionFrame":
        """Build from a 0/1 vector over code qubit indices."""
        return cls(lattice.code_ids[int(j)] for j in np.flatnonzero(bits))

    def bits(self, lattice: "Lattice") -> np.ndarray:
        """The support as a 0/1 ``uint8`` vector over code qubit indices."""
        out = np.zeros(lattice.code_count, dtype=np.uint8)
        for cid in self.x_support:
            out[lattice.code_index[cid]] = 1
        return out

    @property
    def weight(self) -> int:
        """Number of X operators in the frame."""
        return len(self.x_support)

    def to_dict(self) -> dict:
        return {
            "x_support": [[*v, axis] for v, axis in sorted(self.x_support, key=_edge_key)],
        }


class Stage(Enum):
    """Pipeline stage at which an error is injected."""

    PRE_MEASUREMENT = "pre-measurement"
    POST_PREPARATION = "post-preparation"


_STAGE_ALIASES = {
    "pre": Stage.PRE_MEASUREMENT,
    "pre-measurement": Stage.PRE_MEASUREMENT,
    "post": Stage.POST_PREPARATION,
    "post-preparation": Stage.POST_PREPARATION,
}


def is_code_target(target: QubitTarget) -> bool:
    """Code qubit ids are ``(vertex, axis)``; ancilla ids are bare vertices."""
    return len(target) == 2 and isinstance(target[1], str)


class ErrorEvent(Record):
    """A single Pauli error.

    .. attribute:: target

      A code qubit ``((x, y, z), axis)`` or an ancilla ``(x, y, z)``.

      :type: tuple

    .. attribute:: pauli

      ``"X"``, ``"Y"`` or ``"Z"``.

      :type: str

    .. attribute:: stage

      :type: :py:class:`Stage`

    """

    target: QubitTarget
    pauli: str
    stage: Stage

    def __init__(
        self,
        target: QubitTarget,
        pauli: str,
        stage: Union[Stage, str] = Stage.POST_PREPARATION,
    ) -> None:
        pauli = pauli.upper()
        if pauli not in ("X", "Y", "Z"):
            raise InvalidErrorEventError(f"unknown Pauli {pauli!r}", (target, pauli, stage))
        try:
            stage = _STAGE_ALIASES[stage] if isinstance(stage, str) else Stage(stage)
        except KeyError as ex:
            raise InvalidErrorEventError(f"unknown stage {stage!r}", (target, pauli)) from ex
        if is_code_target(target):
            vertex, axis = target  # type: ignore[misc]
            target = (tuple(int(c) for c in vertex), axis)
        else:
            target = tuple(int(c) for c in target)  # type: ignore[assignment]
            if len(target) != 3:
                raise InvalidErrorEventError(f"malformed target {target!r}", target)
            if stage is Stage.POST_PREPARATION:
                raise InvalidErrorEventError(
                    f"ancilla {target} is measured out before preparation ends; "
                    "ancilla errors must use the pre-measurement stage",
                    target,
                )
        self.target = target
        self.pauli = pauli
        self.stage = stage

    @property
    def on_code(self) -> bool:
        """Whether the target is a code qubit."""
        return is_code_target(self.target)

    @classmethod
    def parse(cls, text: str) -> "ErrorEvent":
        """Parse ``<pauli>:<target>:<stage>``.

        A code target is ``x,y,z,axis`` and an ancilla target ``x,y,z``;
        the stage is ``pre``/``post`` or the full stage name.
        """
        parts = text.strip().split(":")
        if len(parts) != 3:
            raise InvalidErrorEventError(
                f"expected <pauli>:<target>:<stage>, got {text!r}",
                text,
            )
        pauli, target_text, stage = parts
        fields = [f.strip() for f in target_text.split(",")]
        try:
            if len(fields) == 4:
                target: QubitTarget = (
                    (int(fields[0]), int(fields[1]), int(fields[2])),
                    fields[3].lower(),  # type: ignore[assignment]
                )
                if target[1] not in ("x", "y", "z"):
                    raise InvalidErrorEventError(f"unknown axis in {text!r}", text)
            elif len(fields) == 3:
                target = (int(fields[0]), int(fields[1]), int(fields[2]))
            else:
                raise InvalidErrorEventError(f"malformed target in {text!r}", text)
        except ValueError as ex:
            raise InvalidErrorEventError(f"malformed target in {text!r}", text) from ex
        return cls(target, pauli, stage.strip().lower())

    def to_text(self) -> str:
        """Inverse of :py:meth:`parse`."""
        if self.on_code:
            vertex, axis = self.target  # type: ignore[misc]
            target = ",".join(str(c) for c in (*vertex, axis))
        else:
            target = ",".join(str(c) for c in self.target)
        short = "pre" if self.stage is Stage.PRE_MEASUREMENT else "post"
        return f"{self.pauli}:{target}:{short}"

    def __hash__(self) -> int:
        return hash((self.target, self.pauli, self.stage))

    def to_dict(self) -> dict:
        return {"target": self.to_text().split(":")[1], "pauli": self.pauli, "stage": self.stage.value}


class RoundCertificate(Record):
    """Evidence that one schedule round is conflict free.

    .. attribute:: round_index

      :type: int

    .. attribute:: group_count

      Number of gate groups executed in parallel.

      :type: int

    .. attribute:: pair_count

      Number of (ancilla, code qubit) pairs entangled in this round.

      :type: int

    .. attribute:: checked_pairs

      Number of group pairs tested against the blockade rule.

      :type: int

    .. attribute:: color

      The parity class ``(x % 2, y % 2, z % 2)`` of the round's cubes, for
      colored schedules.

      :type: tuple

    """

    round_index: int
    group_count: int
    pair_count: int
    checked_pairs: int
    color: Optional[tuple[int, ...]]

    def __init__(
        self,
        round_index: int,
        group_count: int,
        pair_count: int,
        checked_pairs: int,
        color: Optional[tuple[int, ...]] = None,
    ) -> None:
        self.round_index = round_index
        self.group_count = group_count
        self.pair_count = pair_count
        self.checked_pairs = checked_pairs
        self.color = color


def _vertex_key(item: tuple) -> tuple:
    (x, y, z), _ = item
    return (z, y, x)


def _edge_key(cid: CodeQubitId) -> tuple:
    (x, y, z), axis = cid
    return (z, y, x, axis)

"""
Models
======

These classes provide models for the reports produced by the preparation
pipeline, the syndrome extraction and the error sweeps. All of them
serialize through :py:meth:`to_dict` into JSON-ready builtins.

"""

# pylint: disable=too-many-instance-attributes,too-few-public-methods,too-many-arguments,too-many-positional-arguments
from collections.abc import Iterable, Mapping, Sequence
from enum import Enum
from typing import Any, Optional

from xcubeprep._internal import SCHEMA_VERSION, Model, to_jsonable
from xcubeprep.records import CorrectionFrame, ErrorEvent, MeasurementRecord
from xcubeprep.types import AncillaId, CodeQubitId, StarSite


class StabilizerReport(Model):
    """Eigenvalues of the X-cube stabilizers on a state.

    .. attribute:: cube_eigenvalues

      Ancilla coordinate to the eigenvalue of its cube operator. A value of
      0 means the state is not an eigenstate of that operator.

      :type: dict

    .. attribute:: star_eigenvalues

      ``(vertex, plane)`` to the eigenvalue of the star, for defined stars
      only.

      :type: dict

    .. attribute:: skipped_stars

      ``(vertex, plane)`` sites where no star is defined on this lattice.

      :type: tuple

    .. attribute:: all_plus

      True when every listed eigenvalue is +1.

      :type: bool

    """

    cube_eigenvalues: dict[AncillaId, int]
    star_eigenvalues: dict[StarSite, int]
    skipped_stars: tuple[StarSite, ...]
    all_plus: bool

    def __init__(
        self,
        cube_eigenvalues: Mapping[AncillaId, int],
        star_eigenvalues: Mapping[StarSite, int],
        skipped_stars: Sequence[StarSite] = (),
    ) -> None:
        self.cube_eigenvalues = dict(cube_eigenvalues)
        self.star_eigenvalues = dict(star_eigenvalues)
        self.skipped_stars = tuple(skipped_stars)
        self.all_plus = all(v == 1 for v in self.cube_eigenvalues.values()) and all(
            v == 1 for v in self.star_eigenvalues.values()
        )

    @property
    def failing_cubes(self) -> list[AncillaId]:
        """Cubes whose eigenvalue is not +1."""
        return sorted(a for a, v in self.cube_eigenvalues.items() if v != 1)

    @property
    def failing_stars(self) -> list[StarSite]:
        """Stars whose eigenvalue is not +1."""
        return sorted(s for s, v in self.star_eigenvalues.items() if v != 1)


class Classification(Enum):
    """Excitation pattern of a syndrome report.

    Patterns are tested in declaration order and the first match wins.
    """

    CLEAN = "clean"
    ISOLATED_FRACTON = "isolated-fracton"
    FRACTON_QUADRUPLE = "fracton-quadruple"
    FRACTON_DIPOLE = "fracton-dipole"
    LINEON_PAIR = "lineon-pair"
    UNCLASSIFIED = "unclassified"


class CheckFamily(Enum):
    """The families of parity checks a report can evaluate."""

    CUBE = "cube"
    STAR = "star"
    CODE_CLUSTER = "code-cluster"
    ANCILLA_CLUSTER = "ancilla-cluster"


class SyndromeReport(Model):
    """Violated checks of a state.

    .. attribute:: stage

      The pipeline stage the state was in: ``"cluster"``, ``"measured"``
      or ``"corrected"``.

      :type: str

    .. attribute:: flipped_cubes

      Cubes whose eigenvalue differs from the value the measurement record
      and the applied correction predict.

      :type: frozenset

    .. attribute:: flipped_stars

      Defined stars with eigenvalue -1.

      :type: frozenset

    .. attribute:: violated_code_parities

      Code qubits whose code-centred cluster operator is -1. Only evaluable
      while the ancillae are unmeasured.

      :type: frozenset

    .. attribute:: violated_ancilla_parities

      Ancillae whose ancilla-centred cluster operator is -1. After readout
      the ``X_a`` factor is replaced by the recorded outcome.

      :type: frozenset

    .. attribute:: evaluated

      The :py:class:`CheckFamily` values evaluated for this report.

      :type: tuple

    .. attribute:: record_consistent

      Whether the measurement record admits a correction; None before
      readout.

      :type: bool

    .. attribute:: classification

      :type: :py:class:`Classification`

    """

    stage: str
    flipped_cubes: frozenset[AncillaId]
    flipped_stars: frozenset[StarSite]
    violated_code_parities: frozenset[CodeQubitId]
    violated_ancilla_parities: frozenset[AncillaId]
    evaluated: tuple[CheckFamily, ...]
    record_consistent: Optional[bool]
    classification: Classification

    def __init__(
        self,
        stage: str,
        classification: Classification,
        *,
        flipped_cubes: Iterable[AncillaId] = (),
        flipped_stars: Iterable[StarSite] = (),
        violated_code_parities: Iterable[CodeQubitId] = (),
        violated_ancilla_parities: Iterable[AncillaId] = (),
        evaluated: Iterable[CheckFamily] = (),
        record_consistent: Optional[bool] = None,
    ) -> None:
        self.stage = stage
        self.flipped_cubes = frozenset(flipped_cubes)
        self.flipped_stars = frozenset(flipped_stars)
        self.violated_code_parities = frozenset(violated_code_parities)
        self.violated_ancilla_parities = frozenset(violated_ancilla_parities)
        self.evaluated = tuple(evaluated)
        self.record_consistent = record_consistent
        self.classification = classification

    @property
    def is_clean(self) -> bool:
        """True when no check is violated."""
        return not (
            self.flipped_cubes
            or self.flipped_stars
            or self.violated_code_parities
            or self.violated_ancilla_parities
        )


class DecodeStatus(Enum):
    """Outcome of single-error decoding."""

    NONE = "none"
    DECODED = "decoded"
    AMBIGUOUS = "ambiguous"
    UNEXPLAINED = "unexplained"


class Decoding(Model):
    """A proposed single-error explanation of a syndrome.

    .. attribute:: status

      :type: :py:class:`DecodeStatus`

    .. attribute:: event

      The proposed error when ``status`` is ``DECODED``. Applying the same
      Pauli again undoes it.

      :type: :py:class:`xcubeprep.records.ErrorEvent`

    .. attribute:: candidates

      Every single-error explanation found.

      :type: tuple

    .. attribute:: corrected_record

      For an isolated fracton, the record with the faulty outcome flipped
      back.

      :type: :py:class:`xcubeprep.records.MeasurementRecord`

    .. attribute:: logically_equivalent

      Whether all code-qubit candidates differ only by stabilizers, so the
      proposed event is as good as any other. When False the syndrome is
      restored but the candidates differ by a logical operator. None when
      not applicable.

      :type: bool

    """

    status: DecodeStatus
    event: Optional[ErrorEvent]
    candidates: tuple[ErrorEvent, ...]
    corrected_record: Optional[MeasurementRecord]
    logically_equivalent: Optional[bool]

    def __init__(
        self,
        status: DecodeStatus,
        event: Optional[ErrorEvent] = None,
        candidates: Sequence[ErrorEvent] = (),
        corrected_record: Optional[MeasurementRecord] = None,
        logically_equivalent: Optional[bool] = None,
    ) -> None:
        self.status = status
        self.event = event
        self.candidates = tuple(candidates)
        self.corrected_record = corrected_record
        self.logically_equivalent = logically_equivalent


class RunReport(Model):
    """Everything a single preparation run produced.

    .. attribute:: schema_version

      :type: int

    .. attribute:: lattice

      ``{"lx", "ly", "lz", "boundary"}``.

      :type: dict

    .. attribute:: seed

      :type: int

    .. attribute:: strategy

      ``"movement"`` or ``"cz12"``.

      :type: str

    .. attribute:: pauli_frame

      Whether the correction was tracked classically instead of applied.

      :type: bool

    .. attribute:: events

      Injected errors.

      :type: tuple

    .. attribute:: record

      :type: :py:class:`xcubeprep.records.MeasurementRecord`

    .. attribute:: correction

      None when the record admits no correction.

      :type: :py:class:`xcubeprep.records.CorrectionFrame`

    .. attribute:: violated_layers

      Dual layers with outcome product -1.

      :type: tuple

    .. attribute:: stabilizers

      :type: :py:class:`StabilizerReport`

    .. attribute:: syndromes

      :type: :py:class:`SyndromeReport`

    .. attribute:: timing

      Seconds spent per pipeline stage. Not part of :py:meth:`to_dict`;
      see :py:meth:`to_document`.

      :type: dict

    """

    schema_version: int
    lattice: dict[str, Any]
    seed: int
    strategy: str
    pauli_frame: bool
    events: tuple[ErrorEvent, ...]
    record: MeasurementRecord
    correction: Optional[CorrectionFrame]
    violated_layers: tuple[tuple[str, int], ...]
    stabilizers: StabilizerReport
    syndromes: SyndromeReport

    def __init__(
        self,
        *,
        lattice: Mapping[str, Any],
        seed: int,
        strategy: str,
        pauli_frame: bool,
        events: Sequence[ErrorEvent],
        record: MeasurementRecord,
        correction: Optional[CorrectionFrame],
        violated_layers: Sequence[tuple[str, int]],
        stabilizers: StabilizerReport,
        syndromes: SyndromeReport,
        timing: Optional[Mapping[str, float]] = None,
    ) -> None:
        self.schema_version = SCHEMA_VERSION
        self.lattice = dict(lattice)
        self.seed = seed
        self.strategy = strategy
        self.pauli_frame = pauli_frame
        self.events = tuple(events)
        self.record = record
        self.correction = correction
        self.violated_layers = tuple(violated_layers)
        self.stabilizers = stabilizers
        self.syndromes = syndromes
        self._timing = dict(timing or {})

    @property
    def all_plus(self) -> bool:
        """Whether the final state is the X-cube ground state."""
        return self.stabilizers.all_plus

    @property
    def timing(self) -> dict[str, float]:
        """Seconds per stage."""
        return dict(self._timing)

    def to_document(self, *, include_timing: bool = True) -> dict[str, Any]:
        """The ``run-report.json`` document."""
        document = self.to_dict()
        document["all_plus"] = self.all_plus
        if include_timing:
            document["timing"] = to_jsonable(self._timing)
        return document


class SweepLine(Model):
    """One injected error of a sweep.

    .. attribute:: index

      Run index; also selects the run's random substream.

      :type: int

    .. attribute:: event

      :type: :py:class:`xcubeprep.records.ErrorEvent`

    .. attribute:: report

      :type: :py:class:`SyndromeReport`

    .. attribute:: decoding

      :type: :py:class:`Decoding`

    .. attribute:: restored

      Whether applying the decoded correction gave a clean report. None
      when nothing was decoded.

      :type: bool

    """

    index: int
    event: ErrorEvent
    report: SyndromeReport
    decoding: Decoding
    restored: Optional[bool]

    def __init__(
        self,
        index: int,
        event: ErrorEvent,
        report: SyndromeReport,
        decoding: Decoding,
        restored: Optional[bool],
    ) -> None:
        self.index = index
        self.event = event
        self.report = report
        self.decoding = decoding
        self.restored = restored

    @property
    def action_free(self) -> bool:
        """An ancilla X before readout leaves every check untouched."""
        return (
            not self.event.on_code
            and self.event.pauli == "X"
            and self.report.is_clean
        )


class SweepSummary(Model):
    """Totals over a sweep.

    .. attribute:: total

      :type: int

    .. attribute:: detected

      Errors that produced a non-clean report.

      :type: int

    .. attribute:: action_free

      Errors that provably have no effect.

      :type: int

    .. attribute:: decoded

      Errors uniquely decoded and restored to a clean report.

      :type: int

    .. attribute:: classifications

      Count per :py:class:`Classification` value.

      :type: dict

    .. attribute:: inconsistent_records

      Runs whose measurement record admitted no correction.

      :type: int

    """

    schema_version: int
    total: int
    detected: int
    action_free: int
    decoded: int
    classifications: dict[str, int]
    inconsistent_records: int

    def __init__(self, lines: Sequence[SweepLine]) -> None:
        self.schema_version = SCHEMA_VERSION
        self.total = len(lines)
        self.detected = sum(1 for line in lines if not line.report.is_clean)
        self.action_free = sum(1 for line in lines if line.action_free)
        self.decoded = sum(
            1
            for line in lines
            if line.decoding.status is DecodeStatus.DECODED and line.restored
        )
        classifications: dict[str, int] = {}
        for line in lines:
            key = line.report.classification.value
            classifications[key] = classifications.get(key, 0) + 1
        self.classifications = classifications
        self.inconsistent_records = sum(
            1 for line in lines if line.report.record_consistent is False
        )

    @property
    def all_handled(self) -> bool:
        """Every error was either decoded or action free."""
        return self.decoded + self.action_free == self.total

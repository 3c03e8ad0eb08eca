"""
========
Protocol
========

The measurement-based preparation of the X-cube ground state:

1. :py:func:`prepare_cluster` entangles every ancilla with its 12 cube
   edges, starting from ``|+>`` on all qubits.
2. :py:func:`measure_ancillae` measures every ancilla in the X basis, in
   ascending ancilla index order. Outcome ``m_a`` becomes the eigenvalue of
   the cube operator around ``a``.
3. :py:func:`solve_correction` finds X operators that flip exactly the
   cubes with ``m_a = -1``, and :py:func:`apply_correction` applies them.
4. :py:func:`verify_xcube` reads every cube and star eigenvalue.

Cluster operators are ``C_c = X_c * prod(Z_a for a around c)`` and
``C_a = X_a * prod(Z_c for c on cube a)``; the cube operator is
``B(a) = prod(Z_c for c on cube a)`` and a star is ``prod(X_c)`` over its four
edges. Repeated edges (periodic ``lz = 1``) cancel in every product.

"""

import logging
import time
from collections.abc import Iterable, Sequence
from typing import Optional, Union

import galois
import numpy as np

from xcubeprep import gf2
from xcubeprep.errors import ColoringError, InconsistentRecordError, InvalidErrorEventError
from xcubeprep.lattice import Lattice, Star
from xcubeprep.models import RunReport, StabilizerReport
from xcubeprep.pauli import PauliString
from xcubeprep.records import CorrectionFrame, ErrorEvent, MeasurementRecord, Stage
from xcubeprep.scheduler import Schedule, Strategy, build_schedule, greedy_cz12_schedule
from xcubeprep.tableau import Tableau, new_plus_state
from xcubeprep.types import AncillaId, CodeQubitId

logger = logging.getLogger(__name__)


# -- operators ------------------------------------------------------------


def code_cluster_operator(lattice: Lattice, cid: CodeQubitId) -> PauliString:
    """``C_c``: X on the code qubit, Z on the ancillae of its cubes."""
    return PauliString.from_support(
        lattice.num_qubits,
        x=[lattice.qubit_of_code(cid)],
        z=[lattice.qubit_of_ancilla(a) for a in lattice.cubes_of_edge(cid)],
    )


def ancilla_cluster_operator(lattice: Lattice, aid: AncillaId) -> PauliString:
    """``C_a``: X on the ancilla, Z on its cube's edges."""
    return PauliString.from_support(
        lattice.num_qubits,
        x=[lattice.qubit_of_ancilla(aid)],
        z=[lattice.qubit_of_code(c) for c in lattice.cube_members(aid)],
    )


def cluster_operators(lattice: Lattice) -> tuple[list[PauliString], list[PauliString]]:
    """All ``C_c`` (code index order) and ``C_a`` (ancilla index order)."""
    return (
        [code_cluster_operator(lattice, c) for c in lattice.code_ids],
        [ancilla_cluster_operator(lattice, a) for a in lattice.ancilla_ids],
    )


def cube_operator(lattice: Lattice, aid: AncillaId) -> PauliString:
    """``B(a)``: Z on the 12 edges of the cube."""
    return PauliString.from_support(
        lattice.num_qubits,
        z=[lattice.qubit_of_code(c) for c in lattice.cube_members(aid)],
    )


def star_operator(lattice: Lattice, star: Star) -> PauliString:
    """X on the four member edges of a star."""
    return PauliString.from_support(
        lattice.num_qubits,
        x=[lattice.qubit_of_code(c) for c in star.members],
    )


# -- pipeline -------------------------------------------------------------


def run_schedule(tableau: Tableau, schedule: Schedule) -> Tableau:
    """Apply every gate group of a schedule to ``tableau`` in place."""
    for groups in schedule.rounds:
        for a, targets in groups:
            if schedule.strategy is Strategy.CZ12:
                tableau.cz_multi(a, targets)
            else:
                for t in targets:
                    tableau.cz(a, t)
    return tableau


def prepare_cluster(
    lattice: Lattice,
    strategy: Union[Strategy, str] = Strategy.MOVEMENT,
) -> Tableau:
    """The cluster state of ``lattice`` built with the given strategy.

    Where the parity coloring of ``cz12`` does not wrap, the multi-target
    gates run in the rounds of :py:func:`~xcubeprep.scheduler.greedy_cz12_schedule`.
    """
    try:
        schedule = build_schedule(lattice, strategy)
    except ColoringError as exc:
        schedule = greedy_cz12_schedule(lattice)
        logger.warning("%s; using a greedy coloring of %d rounds", exc, schedule.depth)
    tableau = run_schedule(new_plus_state(lattice.num_qubits), schedule)
    logger.info(
        "prepared cluster state on %d qubits with the %s strategy",
        lattice.num_qubits,
        schedule.strategy.value,
    )
    return tableau


def measure_ancillae(
    tableau: Tableau,
    lattice: Lattice,
    rng: np.random.Generator,
    seed: Optional[int] = None,
) -> tuple[Tableau, MeasurementRecord]:
    """Measure every ancilla in the X basis, ascending by index.

    The tableau is updated in place and returned with the record.
    """
    values = []
    for aid in lattice.ancilla_ids:
        outcome, _ = tableau.measure(lattice.qubit_of_ancilla(aid), "X", rng)
        values.append(outcome)
    record = MeasurementRecord.from_values(lattice, values, seed)
    logger.info(
        "measured %d ancillae: %d outcomes of -1",
        len(values),
        sum(v == -1 for v in values),
    )
    return tableau, record


def solve_correction(lattice: Lattice, record: MeasurementRecord) -> CorrectionFrame:
    """Solve ``M x = b`` over GF(2) for the X correction.

    ``M`` is the cube-by-edge incidence matrix and ``b_a = (1 - m_a) / 2``.
    Free variables are set to zero, so the result is deterministic.

    :raises InconsistentRecordError: if no solution exists.
    """
    solution = gf2.solve(lattice.cube_incidence(), record.syndrome_bits(lattice))
    if solution is None:
        layers = record.violated_layers(lattice)
        raise InconsistentRecordError(
            "measurement record admits no correction "
            f"(violated dual layers: {list(layers)})",
            layers,
        )
    frame = CorrectionFrame.from_bits(lattice, solution)
    logger.info("correction has weight %d", frame.weight)
    return frame


def apply_correction(tableau: Tableau, frame: CorrectionFrame, lattice: Lattice) -> Tableau:
    """Apply X on every qubit of ``frame`` in place."""
    for cid in sorted(frame.x_support, key=lattice.qubit_of_code):
        tableau.x(lattice.qubit_of_code(cid))
    return tableau


def frame_signs(lattice: Lattice, frame: Optional[CorrectionFrame]) -> np.ndarray:
    """``(-1)**(M x)`` per cube for a frame (all +1 without one)."""
    if frame is None:
        return np.ones(lattice.ancilla_count, dtype=np.int8)
    flips = (lattice.cube_incidence().astype(np.int64) @ frame.bits(lattice)) & 1
    return (1 - 2 * flips).astype(np.int8)


def verify_xcube(
    tableau: Tableau,
    lattice: Lattice,
    frame: Optional[CorrectionFrame] = None,
) -> StabilizerReport:
    """Eigenvalues of every cube and every defined star.

    With ``frame``, the correction is tracked classically: it has not been
    applied to ``tableau`` and the cube eigenvalues are adjusted instead.
    """
    signs = frame_signs(lattice, frame)
    cubes = {
        aid: tableau.expectation(cube_operator(lattice, aid)) * int(signs[i])
        for i, aid in enumerate(lattice.ancilla_ids)
    }
    stars = {
        star.site: tableau.expectation(star_operator(lattice, star))
        for star in lattice.star_sites
    }
    report = StabilizerReport(cubes, stars, lattice.undefined_stars)
    logger.info(
        "verification: all_plus=%s (%d cubes, %d stars, %d undefined stars)",
        report.all_plus,
        len(cubes),
        len(stars),
        len(lattice.undefined_stars),
    )
    return report


# -- ground space ---------------------------------------------------------


def generator_matrix(
    lattice: Lattice,
    extra: Iterable[PauliString] = (),
) -> np.ndarray:
    """Symplectic ``[x | z]`` rows of every star and cube generator.

    Only code qubits take part; ``extra`` generators must be given on the
    code qubits alone.
    """
    n = lattice.code_count
    stars = lattice.star_incidence()
    cubes = lattice.cube_incidence()
    rows = [
        np.concatenate([stars, np.zeros_like(stars)], axis=1),
        np.concatenate([np.zeros_like(cubes), cubes], axis=1),
    ]
    for pauli in extra:
        if pauli.n != n:
            raise ValueError(f"extra generators act on {n} code qubits, got {pauli.n}")
        bits = np.concatenate(
            [gf2.unpack_bits(pauli.x, n), gf2.unpack_bits(pauli.z, n)],
        )
        rows.append(bits.reshape(1, 2 * n))
    return np.concatenate(rows, axis=0).astype(np.uint8)


def ground_space_dimension(
    lattice: Lattice,
    method: str = "packed",
    extra: Iterable[PauliString] = (),
) -> int:
    """``k = code_count - rank`` of the star and cube generators.

    ``method="packed"`` eliminates over bit-packed rows; ``method="dense"``
    uses :py:mod:`galois` matrices over GF(2). On the one-storey lattice
    only the defined stars take part.
    """
    matrix = generator_matrix(lattice, extra)
    if method == "packed":
        rank = gf2.rank(matrix)
    elif method == "dense":
        rank = int(np.linalg.matrix_rank(galois.GF(2)(matrix)))
    else:
        raise ValueError(f"unknown elimination method {method!r}")
    k = lattice.code_count - rank
    logger.info("ground space of %r: rank %d, k = %d (%s)", lattice, rank, k, method)
    return k


# -- runs -----------------------------------------------------------------


class Simulation:
    """One run of the pipeline, advanced stage by stage.

    ``stage`` moves from ``"cluster"`` through ``"measured"`` to
    ``"corrected"``. Errors are injected with
    :py:func:`xcubeprep.faults.inject` between stages.

    :ivar applied_frame: The correction applied as gates, if any
    :ivar tracked_frame: The correction tracked classically, if any

    """

    # pylint: disable=too-many-instance-attributes

    lattice: Lattice
    tableau: Tableau
    stage: str
    record: Optional[MeasurementRecord]
    applied_frame: Optional[CorrectionFrame]
    tracked_frame: Optional[CorrectionFrame]
    events: list[ErrorEvent]

    def __init__(
        self,
        lattice: Lattice,
        strategy: Union[Strategy, str] = Strategy.MOVEMENT,
        seed: int = 0,
        *,
        rng: Optional[np.random.Generator] = None,
        pauli_frame: bool = False,
        cluster: Optional[Tableau] = None,
    ) -> None:
        self.lattice = lattice
        self.strategy = Strategy(strategy)
        self.seed = seed
        self.rng = rng if rng is not None else np.random.default_rng(seed)
        self.pauli_frame = pauli_frame
        self.tableau = cluster.copy() if cluster is not None else prepare_cluster(lattice, strategy)
        self.stage = "cluster"
        self.record = None
        self.applied_frame = None
        self.tracked_frame = None
        self.record_consistent: Optional[bool] = None
        self.violated_layers: tuple[tuple[str, int], ...] = ()
        self.events = []

    def _require(self, *stages: str) -> None:
        if self.stage not in stages:
            raise InvalidErrorEventError(
                f"simulation is in the {self.stage} stage, expected {' or '.join(stages)}",
            )

    def measure(self) -> MeasurementRecord:
        """Measure all ancillae."""
        self._require("cluster")
        _, self.record = measure_ancillae(self.tableau, self.lattice, self.rng, self.seed)
        self.violated_layers = self.record.violated_layers(self.lattice)
        self.stage = "measured"
        return self.record

    def correct(self, record: Optional[MeasurementRecord] = None) -> Optional[CorrectionFrame]:
        """Solve and apply (or track) the correction.

        ``record`` replaces the measured record, for instance after a faulty
        outcome was identified; a correction applied earlier is undone
        first. Returns None, leaving the state uncorrected, when the record
        is inconsistent.
        """
        self._require("measured", "corrected")
        if record is not None:
            self.record = record
            self.violated_layers = record.violated_layers(self.lattice)
        if self.applied_frame is not None:
            apply_correction(self.tableau, self.applied_frame, self.lattice)
        self.applied_frame = None
        self.tracked_frame = None
        self.stage = "measured"
        try:
            frame = solve_correction(self.lattice, self.record)  # type: ignore[arg-type]
        except InconsistentRecordError as ex:
            logger.info("%s", ex)
            self.record_consistent = False
            return None
        self.record_consistent = True
        if self.pauli_frame:
            self.tracked_frame = frame
        else:
            apply_correction(self.tableau, frame, self.lattice)
            self.applied_frame = frame
        self.stage = "corrected"
        return frame

    def expected_cube_values(self) -> np.ndarray:
        """Cube eigenvalues the record and the applied frame predict."""
        if self.record is None:
            raise InvalidErrorEventError("cube values are only predicted after readout")
        return self.record.values(self.lattice) * frame_signs(self.lattice, self.applied_frame)

    def verify(self) -> StabilizerReport:
        """:py:func:`verify_xcube` on the current state."""
        return verify_xcube(self.tableau, self.lattice, self.tracked_frame)


def run_protocol(
    lattice: Lattice,
    strategy: Union[Strategy, str] = Strategy.MOVEMENT,
    seed: int = 0,
    events: Sequence[ErrorEvent] = (),
    pauli_frame: bool = False,
) -> RunReport:
    """Run the whole pipeline with optional injected errors."""
    # pylint: disable=import-outside-toplevel,cyclic-import
    from xcubeprep import faults

    timing = {}
    start = time.perf_counter()
    sim = Simulation(lattice, strategy, seed, pauli_frame=pauli_frame)
    timing["prepare"] = time.perf_counter() - start

    for event in events:
        if event.stage is Stage.PRE_MEASUREMENT:
            faults.inject(sim, event)
    start = time.perf_counter()
    record = sim.measure()
    timing["measure"] = time.perf_counter() - start

    start = time.perf_counter()
    frame = sim.correct()
    timing["correct"] = time.perf_counter() - start
    for event in events:
        if event.stage is Stage.POST_PREPARATION:
            faults.inject(sim, event)

    start = time.perf_counter()
    stabilizers = sim.verify()
    syndromes = faults.extract_syndromes(sim)
    timing["verify"] = time.perf_counter() - start

    s = lattice.spec
    return RunReport(
        lattice={"lx": s.lx, "ly": s.ly, "lz": s.lz, "boundary": s.boundary.value},
        seed=seed,
        strategy=sim.strategy.value,
        pauli_frame=pauli_frame,
        events=events,
        record=record,
        correction=frame,
        violated_layers=sim.violated_layers,
        stabilizers=stabilizers,
        syndromes=syndromes,
        timing=timing,
    )

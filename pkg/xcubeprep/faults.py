"""
======
Faults
======

Pauli error injection, syndrome extraction, pattern classification, the
mobility experiments and single-error decoding.

Which checks can be read depends on the stage of the simulation:

``cluster``
    Before readout the state is a cluster state. The code-centred and
    ancilla-centred cluster operators are evaluated directly, as are the
    stars (already +1 on the cluster state). Cube operators are not
    eigen-operators yet and are skipped.

``measured`` / ``corrected``
    After readout a cube is flipped when its eigenvalue differs from
    ``m_a`` times the sign the applied correction contributes. The
    ancilla-centred check is the same operator with ``X_a`` replaced by
    its recorded outcome. The code-centred checks contain ``Z_a`` of
    measured ancillae and can no longer be evaluated.

Single-error syndromes (after readout): X on a code qubit flips the cubes
containing it, Z flips the stars containing it (two per endpoint on the
periodic lattice), Y flips both, Z or Y on an ancilla before readout flips
that ancilla's cube and makes the record inconsistent on periodic
lattices, and X on an ancilla before readout does nothing.

"""

import concurrent.futures
import functools
import itertools
import logging
from collections.abc import Iterable, Sequence
from typing import Optional, Union

import numpy as np

from xcubeprep import gf2
from xcubeprep.errors import InvalidChainError, InvalidErrorEventError
from xcubeprep.lattice import AXES, PLANES, Lattice, LatticeSpec, shift
from xcubeprep.models import (
    CheckFamily,
    Classification,
    Decoding,
    DecodeStatus,
    SweepLine,
    SweepSummary,
    SyndromeReport,
)
from xcubeprep.protocol import (
    Simulation,
    ancilla_cluster_operator,
    code_cluster_operator,
    cube_operator,
    prepare_cluster,
    star_operator,
)
from xcubeprep.records import ErrorEvent, MeasurementRecord, Stage
from xcubeprep.scheduler import Strategy
from xcubeprep.tableau import Tableau
from xcubeprep.types import AncillaId, Axis, CodeQubitId, StarSite, Vertex

logger = logging.getLogger(__name__)

_Pattern = tuple[frozenset, frozenset, frozenset, frozenset]


# -- injection ------------------------------------------------------------


def _target_qubit(lattice: Lattice, event: ErrorEvent) -> int:
    if event.on_code:
        vertex, axis = event.target  # type: ignore[misc]
        if not lattice.has_edge(vertex, axis):
            raise InvalidErrorEventError(f"no code qubit at {event.target}", event)
        return lattice.qubit_of_code(event.target)  # type: ignore[arg-type]
    if not lattice.has_cube(event.target):  # type: ignore[arg-type]
        raise InvalidErrorEventError(f"no ancilla at {event.target}", event)
    return lattice.qubit_of_ancilla(event.target)  # type: ignore[arg-type]


def inject(sim: Simulation, event: ErrorEvent) -> None:
    """Apply ``event`` to the simulation's state.

    Pre-measurement errors need the cluster stage; post-preparation errors
    need the ancillae to be measured.

    :raises InvalidErrorEventError: on a missing target or a stage mismatch.
    """
    q = _target_qubit(sim.lattice, event)
    if event.stage is Stage.PRE_MEASUREMENT and sim.stage != "cluster":
        raise InvalidErrorEventError(
            f"pre-measurement error {event.to_text()} injected in the {sim.stage} stage",
            event,
        )
    if event.stage is Stage.POST_PREPARATION and sim.stage == "cluster":
        raise InvalidErrorEventError(
            f"post-preparation error {event.to_text()} injected before readout",
            event,
        )
    tableau = sim.tableau
    if event.pauli == "X":
        tableau.x(q)
    elif event.pauli == "Z":
        tableau.z(q)
    elif event.on_code:
        tableau.x(q)
        tableau.z(q)
    else:
        tableau.y(q)
    sim.events.append(event)
    logger.debug("injected %s", event.to_text())


# -- syndromes ------------------------------------------------------------


def extract_syndromes(sim: Simulation) -> SyndromeReport:
    """Evaluate every check the current stage allows."""
    lattice = sim.lattice
    tableau = sim.tableau
    stars = [
        star.site
        for star in lattice.star_sites
        if tableau.expectation(star_operator(lattice, star)) != 1
    ]
    if sim.stage == "cluster":
        code = [
            c
            for c in lattice.code_ids
            if tableau.expectation(code_cluster_operator(lattice, c)) != 1
        ]
        ancilla = [
            a
            for a in lattice.ancilla_ids
            if tableau.expectation(ancilla_cluster_operator(lattice, a)) != 1
        ]
        return _report(
            lattice,
            "cluster",
            flipped_stars=stars,
            violated_code_parities=code,
            violated_ancilla_parities=ancilla,
            evaluated=(CheckFamily.STAR, CheckFamily.CODE_CLUSTER, CheckFamily.ANCILLA_CLUSTER),
        )

    expected = sim.expected_cube_values()
    cubes = [
        aid
        for i, aid in enumerate(lattice.ancilla_ids)
        if tableau.expectation(cube_operator(lattice, aid)) != expected[i]
    ]
    consistent = sim.record_consistent
    if consistent is None:
        consistent = (
            gf2.solve(lattice.cube_incidence(), sim.record.syndrome_bits(lattice))  # type: ignore[union-attr]
            is not None
        )
    return _report(
        lattice,
        sim.stage,
        flipped_cubes=cubes,
        flipped_stars=stars,
        violated_ancilla_parities=cubes,
        evaluated=(CheckFamily.CUBE, CheckFamily.STAR, CheckFamily.ANCILLA_CLUSTER),
        record_consistent=consistent,
    )


def _report(lattice: Lattice, stage: str, **sets) -> SyndromeReport:
    draft = SyndromeReport(stage, Classification.UNCLASSIFIED, **sets)
    return SyndromeReport(stage, classify(draft, lattice), **sets)


def edge_cubes(lattice: Lattice, cid: CodeQubitId) -> frozenset[AncillaId]:
    """Cubes containing ``cid`` an odd number of times."""
    cubes = lattice.cubes_of_edge(cid)
    return frozenset(a for a in cubes if cubes.count(a) % 2)


def cube_edges(lattice: Lattice, aid: AncillaId) -> frozenset[CodeQubitId]:
    """Edges a cube contains an odd number of times."""
    edges = lattice.cube_members(aid)
    return frozenset(c for c in edges if edges.count(c) % 2)


def lineon_endpoints(
    lattice: Lattice,
    stars: Iterable[StarSite],
) -> Optional[tuple[Axis, Vertex, Vertex]]:
    """The axis and endpoints of a lineon pair, or None.

    A lineon pair occupies two vertices on one axis line. At each vertex
    exactly the defined stars whose plane contains that axis are flipped.
    """
    by_vertex: dict[Vertex, set[str]] = {}
    for vertex, plane in stars:
        by_vertex.setdefault(vertex, set()).add(plane)
    if len(by_vertex) != 2:
        return None
    (v1, p1), (v2, p2) = sorted(by_vertex.items())
    for index, axis in enumerate(AXES):
        expected = [
            {
                plane
                for plane in PLANES
                if axis in plane and (v, plane) not in lattice.undefined_stars
            }
            for v in (v1, v2)
        ]
        if expected[0] and p1 == expected[0] and p2 == expected[1]:
            others = [i for i in range(3) if i != index]
            if all(v1[i] == v2[i] for i in others):
                return (axis, v1, v2)
    return None


def classify(report: SyndromeReport, lattice: Lattice) -> Classification:
    """Name the excitation pattern of a report.

    Before readout the ancilla-centred checks stand in for the cubes.
    Patterns are tested in the order of :py:class:`Classification`.
    """
    if report.is_clean:
        return Classification.CLEAN
    if CheckFamily.CUBE in report.evaluated:
        cubes = report.flipped_cubes
    else:
        cubes = report.violated_ancilla_parities
    stars = report.flipped_stars
    if not stars:
        if len(cubes) == 1:
            return Classification.ISOLATED_FRACTON
        if len(cubes) == 4 and any(
            edge_cubes(lattice, c) == cubes
            for a in cubes
            for c in lattice.cube_members(a)
        ):
            return Classification.FRACTON_QUADRUPLE
        if len(cubes) == 2:
            return Classification.FRACTON_DIPOLE
    if not cubes and lineon_endpoints(lattice, stars) is not None:
        return Classification.LINEON_PAIR
    return Classification.UNCLASSIFIED


# -- decoding -------------------------------------------------------------


def predict_syndrome(lattice: Lattice, event: ErrorEvent, stage: str) -> _Pattern:
    """``(cubes, stars, code parities, ancilla parities)`` a lone ``event`` causes."""
    empty: frozenset = frozenset()
    x_part = event.pauli in ("X", "Y")
    z_part = event.pauli in ("Z", "Y")
    if event.on_code:
        cid = lattice.normalize_edge(event.target)  # type: ignore[arg-type]
        hit = edge_cubes(lattice, cid) if x_part else empty
        stars = frozenset(lattice.stars_of_edge(cid)) if z_part else empty
        if stage == "cluster":
            code = frozenset([cid]) if z_part else empty
            return (empty, stars, code, hit)
        return (hit, stars, empty, hit)
    aid = lattice.normalize_vertex(event.target)  # type: ignore[arg-type]
    if stage == "cluster":
        code = cube_edges(lattice, aid) if x_part else empty
        ancilla = frozenset([aid]) if z_part else empty
        return (empty, empty, code, ancilla)
    flipped = frozenset([aid]) if z_part else empty
    return (flipped, empty, empty, flipped)


def _candidate_events(lattice: Lattice, stage: str) -> list[ErrorEvent]:
    if stage == "cluster":
        code_stage, ancilla_paulis = Stage.PRE_MEASUREMENT, ("X", "Z", "Y")
    else:
        # Y on an ancilla reads out like Z, and X is invisible
        code_stage, ancilla_paulis = Stage.POST_PREPARATION, ("Z",)
    events = [
        ErrorEvent(cid, pauli, code_stage)
        for cid in lattice.code_ids
        for pauli in ("X", "Z", "Y")
    ]
    events += [
        ErrorEvent(aid, pauli, Stage.PRE_MEASUREMENT)
        for aid in lattice.ancilla_ids
        for pauli in ancilla_paulis
    ]
    return events


def locate_flipped_outcome(
    lattice: Lattice,
    record: MeasurementRecord,
) -> Optional[AncillaId]:
    """The ancilla whose outcome flip explains the violated dual layers.

    Needs exactly one violated layer per axis; returns their intersection.
    """
    layers = record.violated_layers(lattice)
    coordinates = {}
    for axis in AXES:
        hits = [c for a, c in layers if a == axis]
        if len(hits) != 1:
            return None
        coordinates[axis] = hits[0]
    return (coordinates["x"], coordinates["y"], coordinates["z"])


def _in_rowspan(matrix: np.ndarray, vectors: Sequence[np.ndarray]) -> bool:
    if not vectors:
        return True
    stacked = np.concatenate([matrix, np.array(vectors, dtype=np.uint8)], axis=0)
    return gf2.rank(stacked) == gf2.rank(matrix)


def _logically_equivalent(lattice: Lattice, events: Sequence[ErrorEvent]) -> bool:
    first = lattice.code_index[lattice.normalize_edge(events[0].target)]  # type: ignore[arg-type]
    differences = []
    for event in events[1:]:
        diff = np.zeros(lattice.code_count, dtype=np.uint8)
        diff[first] ^= 1
        diff[lattice.code_index[lattice.normalize_edge(event.target)]] ^= 1  # type: ignore[arg-type]
        differences.append(diff)
    pauli = events[0].pauli
    ok = True
    if pauli in ("X", "Y"):
        ok &= _in_rowspan(lattice.star_incidence(), differences)
    if pauli in ("Z", "Y"):
        ok &= _in_rowspan(lattice.cube_incidence(), differences)
    return ok


def correct_single(
    report: SyndromeReport,
    lattice: Lattice,
    record: Optional[MeasurementRecord] = None,
) -> Decoding:
    """Explain ``report`` by one error, if possible.

    Every single error whose predicted syndrome matches the report is a
    candidate. Candidates of more than one kind (Pauli type, code qubit or
    ancilla) make the result ambiguous. Several code qubits of one kind are
    decoded to the first in index order, with ``logically_equivalent``
    recording whether the choice could matter.
    """
    if report.is_clean:
        return Decoding(DecodeStatus.NONE)
    observed = (
        report.flipped_cubes,
        report.flipped_stars,
        report.violated_code_parities,
        report.violated_ancilla_parities,
    )
    candidates = [
        event
        for event in _candidate_events(lattice, report.stage)
        if predict_syndrome(lattice, event, report.stage) == observed
    ]
    if not candidates:
        return Decoding(DecodeStatus.UNEXPLAINED)
    kinds = {(event.on_code, event.pauli) for event in candidates}
    if len(kinds) > 1:
        return Decoding(DecodeStatus.AMBIGUOUS, candidates=candidates)

    event = candidates[0]
    if not event.on_code:
        if len(candidates) > 1:
            return Decoding(DecodeStatus.AMBIGUOUS, candidates=candidates)
        corrected = None
        if report.stage != "cluster" and record is not None:
            located = locate_flipped_outcome(lattice, record)
            if report.record_consistent is False and located not in (None, event.target):
                return Decoding(DecodeStatus.UNEXPLAINED, candidates=candidates)
            corrected = record.flipped(event.target)  # type: ignore[arg-type]
        return Decoding(DecodeStatus.DECODED, event, candidates, corrected)

    equivalent = None
    if report.stage != "cluster":
        equivalent = _logically_equivalent(lattice, candidates)
    return Decoding(DecodeStatus.DECODED, event, candidates, logically_equivalent=equivalent)


def apply_decoding(sim: Simulation, decoding: Decoding) -> bool:
    """Undo a decoded error on ``sim``. Returns False if nothing was decoded."""
    if decoding.status is not DecodeStatus.DECODED or decoding.event is None:
        return False
    event = decoding.event
    if event.on_code or sim.stage == "cluster":
        inject(sim, event)
    else:
        sim.correct(decoding.corrected_record)
    return True


# -- mobility -------------------------------------------------------------


def _check_edge(lattice: Lattice, cid: CodeQubitId, step: int) -> CodeQubitId:
    vertex, axis = cid
    if axis not in AXES or not lattice.has_edge(vertex, axis):
        raise InvalidChainError(f"step {step}: no code qubit at {cid}", step)
    return lattice.normalize_edge(cid)


def move_fracton_dipole(
    sim: Simulation,
    dipole: Iterable[AncillaId],
    path: Sequence[CodeQubitId],
) -> list[SyndromeReport]:
    """Apply X along ``path`` and report after every step.

    The first edge must touch a cube of the dipole and each later edge must
    share a cube with the one before it. The whole chain is checked before
    anything is applied.

    :returns: the initial report followed by one report per edge.
    :raises InvalidChainError: if the chain is broken or the dipole does
      not match the current syndrome.
    """
    lattice = sim.lattice
    dipole = frozenset(lattice.normalize_vertex(a) for a in dipole)
    initial = extract_syndromes(sim)
    if len(dipole) != 2 or initial.flipped_cubes != dipole:
        raise InvalidChainError(
            f"{sorted(dipole)} is not the current fracton dipole "
            f"{sorted(initial.flipped_cubes)}",
            0,
        )
    edges = [_check_edge(lattice, cid, step) for step, cid in enumerate(path, start=1)]
    previous = dipole
    for step, cid in enumerate(edges, start=1):
        touched = frozenset(lattice.cubes_of_edge(cid))
        if not touched & previous:
            raise InvalidChainError(
                f"step {step}: {cid} shares no cube with the previous step",
                step,
            )
        previous = touched

    trace = [initial]
    for cid in edges:
        inject(sim, ErrorEvent(cid, "X", Stage.POST_PREPARATION))
        trace.append(extract_syndromes(sim))
    logger.info(
        "moved fracton dipole over %d edges: flipped cube counts %s",
        len(edges),
        [len(r.flipped_cubes) for r in trace],
    )
    return trace


def move_lineon(
    sim: Simulation,
    lineon: Iterable[StarSite],
    axis: Axis,
    steps: int,
    start: Optional[Vertex] = None,
) -> list[SyndromeReport]:
    """Apply a chain of Z from one lineon endpoint and report after every step.

    The chain leaves ``start`` (default: the endpoint with the larger
    coordinate) along ``axis``, in the positive direction for positive
    ``steps`` and the negative direction otherwise. A chain along the
    lineon's own axis translates the endpoint; any other axis creates new
    star violations.

    :returns: the initial report followed by one report per Z.
    :raises InvalidChainError: if ``lineon`` is not the current lineon pair
      or the chain leaves the lattice.
    """
    lattice = sim.lattice
    lineon = frozenset(lineon)
    initial = extract_syndromes(sim)
    found = lineon_endpoints(lattice, lineon)
    if found is None or initial.flipped_stars != lineon:
        raise InvalidChainError("the given stars are not the current lineon pair", 0)
    _, low, high = found
    if start is None:
        start = high
    start = lattice.normalize_vertex(start)
    if start not in (low, high):
        raise InvalidChainError(f"{start} is not an endpoint of the lineon", 0)
    if steps >= 0:
        chain = [(shift(start, axis, k), axis) for k in range(steps)]
    else:
        chain = [(shift(start, axis, -k), axis) for k in range(1, -steps + 1)]
    edges = [_check_edge(lattice, cid, step) for step, cid in enumerate(chain, start=1)]

    trace = [initial]
    for cid in edges:
        inject(sim, ErrorEvent(cid, "Z", Stage.POST_PREPARATION))
        trace.append(extract_syndromes(sim))
    return trace


def fracton_reachability(
    lattice: Lattice,
    start: AncillaId,
    max_moves: int = 3,
) -> frozenset[AncillaId]:
    """Other single-cube syndromes reachable from ``{start}`` with few X.

    Searches every set of at most ``max_moves`` edges over cube-syndrome
    bitmasks. A fracton is immobile when the result is empty.
    """
    index = {a: i for i, a in enumerate(lattice.ancilla_ids)}
    masks = sorted(
        {
            functools.reduce(
                lambda acc, a: acc | (1 << index[a]),
                edge_cubes(lattice, cid),
                0,
            )
            for cid in lattice.code_ids
        }
        - {0},
    )
    origin = 1 << index[lattice.normalize_vertex(start)]
    reached = set()
    for k in range(1, max_moves + 1):
        for combo in itertools.combinations(masks, k):
            result = origin
            for mask in combo:
                result ^= mask
            if result != origin and result.bit_count() == 1:
                reached.add(lattice.ancilla_ids[result.bit_length() - 1])
    return frozenset(reached)


# -- sweeps ---------------------------------------------------------------


def single_error_events(
    lattice: Lattice,
    paulis: Sequence[str] = ("X", "Y", "Z"),
    targets: Sequence[str] = ("code", "ancilla"),
) -> list[ErrorEvent]:
    """Every single error: code qubits after preparation, ancillae before readout."""
    events = []
    if "code" in targets:
        events += [
            ErrorEvent(cid, p, Stage.POST_PREPARATION)
            for p in paulis
            for cid in lattice.code_ids
        ]
    if "ancilla" in targets:
        events += [
            ErrorEvent(aid, p, Stage.PRE_MEASUREMENT)
            for p in paulis
            for aid in lattice.ancilla_ids
        ]
    return events


@functools.lru_cache(maxsize=4)
def _cluster_for(spec: LatticeSpec, strategy: str) -> tuple[Lattice, Tableau]:
    lattice = Lattice(spec)
    return lattice, prepare_cluster(lattice, strategy)


def run_single(
    spec: LatticeSpec,
    strategy: str,
    master_seed: int,
    index: int,
    event: ErrorEvent,
) -> SweepLine:
    """Inject one error, read the syndrome, decode it and try the fix.

    The run draws from ``SeedSequence([master_seed, index])`` so its result
    does not depend on which worker runs it.
    """
    lattice, cluster = _cluster_for(spec, strategy)
    rng = np.random.default_rng(np.random.SeedSequence([master_seed, index]))
    sim = Simulation(lattice, strategy, master_seed, rng=rng, cluster=cluster)
    if event.stage is Stage.PRE_MEASUREMENT:
        inject(sim, event)
    sim.measure()
    sim.correct()
    if event.stage is Stage.POST_PREPARATION:
        inject(sim, event)
    report = extract_syndromes(sim)
    decoding = correct_single(report, lattice, sim.record)
    restored = None
    if apply_decoding(sim, decoding):
        restored = extract_syndromes(sim).is_clean
    return SweepLine(index, event, report, decoding, restored)


def _run_packed(args: tuple) -> SweepLine:
    return run_single(*args)


def sweep_single_errors(
    lattice: Lattice,
    events: Optional[Sequence[ErrorEvent]] = None,
    *,
    strategy: Union[Strategy, str] = Strategy.MOVEMENT,
    master_seed: int = 0,
    workers: int = 1,
) -> tuple[list[SweepLine], SweepSummary]:
    """Run :py:func:`run_single` for every event, in order of index.

    With ``workers > 1`` the runs are spread over a process pool; the output
    is the same for any worker count.
    """
    if events is None:
        events = single_error_events(lattice)
    strategy = Strategy(strategy).value
    jobs = [(lattice.spec, strategy, master_seed, i, e) for i, e in enumerate(events)]
    if workers > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            lines = list(executor.map(_run_packed, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        lines = [_run_packed(job) for job in jobs]
    summary = SweepSummary(lines)
    logger.info(
        "sweep of %d errors: %d detected, %d decoded, %d action free",
        summary.total,
        summary.detected,
        summary.decoded,
        summary.action_free,
    )
    return lines, summary

#!/usr/bin/env python


import json
import sys
import unittest
from collections import Counter

sys.path.append("..")

from xcubeprep.errors import ColoringError, ScheduleError
from xcubeprep.lattice import Lattice, LatticeSpec
from xcubeprep.scheduler import (
    CircuitForm,
    Schedule,
    Strategy,
    build_schedule,
    color_of,
    conflict_graph,
    cz12_schedule,
    emit_circuit,
    folded_targets,
    greedy_cz12_schedule,
    movement_schedule,
    validate_schedule,
)


class TestDepth(unittest.TestCase):
    def test_movement_is_always_twelve(self) -> None:
        for spec in (
            LatticeSpec(2, 2, 1),
            LatticeSpec(3, 3, 3),
            LatticeSpec(5, 4, 1, "one-storey"),
        ):
            with self.subTest(spec=spec.dims):
                self.assertEqual(movement_schedule(Lattice(spec)).depth, 12)

    def test_cz12_depth(self) -> None:
        for spec, depth in (
            (LatticeSpec(2, 2, 1), 4),
            (LatticeSpec(2, 2, 2), 8),
            (LatticeSpec(4, 2, 2), 8),
            (LatticeSpec(3, 3, 1, "one-storey"), 4),
            (LatticeSpec(5, 4, 1, "one-storey"), 4),
        ):
            with self.subTest(spec=spec.dims, boundary=spec.boundary):
                self.assertEqual(cz12_schedule(Lattice(spec)).depth, depth)

    def test_odd_periodic_lengths(self) -> None:
        with self.assertRaises(ColoringError) as cm:
            cz12_schedule(Lattice(LatticeSpec(3, 3, 3)))
        self.assertEqual(cm.exception.dims, (3, 3, 3))
        with self.assertRaises(ColoringError) as cm:
            build_schedule(Lattice(LatticeSpec(2, 3, 2)), "cz12")
        self.assertIn("ly=4", cm.exception.suggestion)
        self.assertEqual(build_schedule(Lattice(LatticeSpec(2, 3, 2)), "movement").depth, 12)


class TestValidation(unittest.TestCase):
    def test_movement_certificates(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 2))
        schedule = validate_schedule(movement_schedule(lattice), lattice)
        self.assertEqual(len(schedule.certificates), 12)
        for index, cert in enumerate(schedule.certificates):
            self.assertEqual(cert.round_index, index)
            self.assertEqual(cert.group_count, 8)
            self.assertEqual(cert.pair_count, 8)
            self.assertEqual(cert.checked_pairs, 0)
            self.assertIsNone(cert.color)

    def test_cz12_certificates(self) -> None:
        lattice = Lattice(LatticeSpec(4, 4, 2))
        schedule = validate_schedule(cz12_schedule(lattice), lattice)
        self.assertEqual(
            [c.color for c in schedule.certificates],
            sorted({color_of(lattice, a) for a in lattice.ancilla_ids}),
        )
        for cert in schedule.certificates:
            self.assertEqual(cert.group_count, 4)
            self.assertEqual(cert.pair_count, 48)
            self.assertEqual(cert.checked_pairs, 6)

    def test_one_storey_four_by_four(self) -> None:
        lattice = Lattice(LatticeSpec(4, 4, 1, "one-storey"))
        schedule = validate_schedule(cz12_schedule(lattice), lattice)
        self.assertEqual(schedule.depth, 4)
        self.assertEqual([c.group_count for c in schedule.certificates], [4, 4, 4, 4])
        self.assertEqual(
            [c.color for c in schedule.certificates],
            [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)],
        )
        for cert in schedule.certificates:
            self.assertEqual(cert.pair_count, 48)
            self.assertEqual(cert.checked_pairs, 6)

    def test_greedy_cz12(self) -> None:
        lattice = Lattice(LatticeSpec(3, 3, 3))
        schedule = validate_schedule(greedy_cz12_schedule(lattice), lattice)
        self.assertEqual(schedule.strategy, Strategy.CZ12)
        self.assertEqual(schedule.depth, 27)
        self.assertTrue(all(c.group_count == 1 for c in schedule.certificates))

        lattice = Lattice(LatticeSpec(4, 4, 2))
        schedule = validate_schedule(greedy_cz12_schedule(lattice), lattice)
        # the eight cubes around a vertex are pairwise in conflict
        self.assertGreaterEqual(schedule.depth, 8)
        self.assertEqual(sum(c.group_count for c in schedule.certificates), 32)

    def test_every_round_is_valid(self) -> None:
        for spec in (LatticeSpec(2, 2, 1), LatticeSpec(4, 2, 2), LatticeSpec(5, 4, 1, "one-storey")):
            lattice = Lattice(spec)
            for strategy in Strategy:
                with self.subTest(spec=spec.dims, strategy=strategy):
                    validate_schedule(build_schedule(lattice, strategy), lattice)

    def test_missing_group(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 2))
        schedule = movement_schedule(lattice)
        rounds = [list(r) for r in schedule.rounds]
        rounds[5].pop()
        broken = Schedule(schedule.strategy, rounds, schedule.num_qubits, schedule.ancillae)
        with self.assertRaises(ScheduleError) as cm:
            validate_schedule(broken, lattice)
        self.assertIsNone(cm.exception.round_index)
        self.assertEqual(len(cm.exception.conflicts), 1)

    def test_qubit_used_twice_in_a_round(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 2))
        schedule = movement_schedule(lattice)
        rounds = [list(r) for r in schedule.rounds]
        rounds[0].append(rounds[1].pop(0))
        broken = Schedule(schedule.strategy, rounds, schedule.num_qubits, schedule.ancillae)
        with self.assertRaises(ScheduleError) as cm:
            validate_schedule(broken, lattice)
        self.assertEqual(cm.exception.round_index, 0)
        self.assertIn(lattice.code_count, cm.exception.conflicts)

    def test_cubes_sharing_a_vertex(self) -> None:
        lattice = Lattice(LatticeSpec(4, 4, 4))
        schedule = cz12_schedule(lattice)
        moved = lattice.code_count + lattice.ancilla_index[(1, 1, 1)]
        rounds = [list(r) for r in schedule.rounds]
        source = schedule.colors.index((1, 1, 1))
        group = next(g for g in rounds[source] if g[0] == moved)
        rounds[source].remove(group)
        rounds[0].append(group)
        broken = Schedule(
            schedule.strategy,
            rounds,
            schedule.num_qubits,
            schedule.ancillae,
            schedule.colors,
        )
        with self.assertRaises(ScheduleError) as cm:
            validate_schedule(broken, lattice)
        self.assertEqual(cm.exception.round_index, 0)
        self.assertTrue(any(set(e) == {(0, 0, 0), (1, 1, 1)} for e in cm.exception.conflicts))


class TestGeometry(unittest.TestCase):
    def test_folded_targets_on_self_wrapped_lattice(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 1))
        for aid in lattice.ancilla_ids:
            counts = Counter(lattice.code_index[c] for c in lattice.ancilla_adj[aid])
            odd = {j for j, n in counts.items() if n % 2}
            targets = folded_targets(lattice, aid)
            self.assertEqual(set(targets), odd)
            self.assertEqual(len(targets), len(set(targets)))
            # the horizontal edges repeat top and bottom and cancel
            self.assertEqual({lattice.code_ids[j][1] for j in targets}, {"z"})

    def test_folded_targets_without_repeats(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 2))
        for aid in lattice.ancilla_ids:
            self.assertEqual(
                folded_targets(lattice, aid),
                tuple(lattice.code_index[c] for c in lattice.ancilla_adj[aid]),
            )

    def test_conflict_graph(self) -> None:
        graph = conflict_graph(Lattice(LatticeSpec(3, 3, 1, "one-storey")))
        self.assertEqual(graph.number_of_nodes(), 9)
        self.assertEqual(graph.degree[(1, 1, 0)], 8)
        self.assertEqual(graph.degree[(0, 0, 0)], 3)

    def test_colors_are_independent_sets(self) -> None:
        lattice = Lattice(LatticeSpec(4, 2, 2))
        graph = conflict_graph(lattice)
        for a, b in graph.edges():
            self.assertNotEqual(color_of(lattice, a), color_of(lattice, b))


class TestSerialization(unittest.TestCase):
    def test_round_trip(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 2))
        for strategy in Strategy:
            schedule = build_schedule(lattice, strategy)
            self.assertEqual(Schedule.from_dict(schedule.to_dict()), schedule)
            self.assertEqual(Schedule.from_dict(json.loads(schedule.to_json())), schedule)

    def test_unknown_schema(self) -> None:
        document = movement_schedule(Lattice(LatticeSpec(2, 2, 1))).to_dict()
        document["schema_version"] = 99
        with self.assertRaises(ScheduleError):
            Schedule.from_dict(document)


class TestEmit(unittest.TestCase):
    def setUp(self) -> None:
        self.lattice = Lattice(LatticeSpec(2, 2, 2))

    def test_cz_form(self) -> None:
        circuit = emit_circuit(movement_schedule(self.lattice))
        self.assertEqual(circuit.count("H"), self.lattice.num_qubits)
        self.assertEqual(circuit.count("CZ"), 12 * self.lattice.ancilla_count)
        self.assertEqual(circuit.count("MX"), self.lattice.ancilla_count)
        self.assertEqual(circuit.count("CNOT"), 0)
        self.assertEqual(circuit.depth, 14)
        self.assertEqual(circuit.num_records, self.lattice.ancilla_count)

    def test_cz12_form(self) -> None:
        circuit = emit_circuit(cz12_schedule(self.lattice))
        self.assertEqual(circuit.count("CZ12"), self.lattice.ancilla_count)
        self.assertEqual(circuit.count("CZ"), 0)
        self.assertEqual(circuit.depth, 10)

    def test_dynamic_form(self) -> None:
        for strategy in Strategy:
            with self.subTest(strategy=strategy):
                schedule = build_schedule(self.lattice, strategy)
                circuit = emit_circuit(schedule, CircuitForm.DYNAMIC_CNOT)
                self.assertEqual(circuit.count("CZ"), 0)
                self.assertEqual(circuit.count("CZ12"), 0)
                self.assertEqual(circuit.count("CNOT"), 12 * self.lattice.ancilla_count)
                self.assertEqual(circuit.count("H"), self.lattice.code_count)
                self.assertEqual(circuit.count("MZ"), self.lattice.ancilla_count)
                self.assertEqual(circuit.count("MX"), 0)
                self.assertEqual(circuit.depth, schedule.depth + 2)

    def test_record_slots_follow_ancilla_order(self) -> None:
        circuit = emit_circuit(movement_schedule(self.lattice), "dynamic-cnot")
        measured = [(op.record, op.qubits[0]) for op in circuit.ops() if op.kind.is_measurement]
        self.assertEqual(
            measured,
            [(k, self.lattice.code_count + k) for k in range(self.lattice.ancilla_count)],
        )


if __name__ == "__main__":
    unittest.main()

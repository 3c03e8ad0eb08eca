#!/usr/bin/env python


import sys
import unittest

sys.path.append("..")

import numpy as np

from xcubeprep.errors import ColoringError, InconsistentRecordError, InvalidErrorEventError
from xcubeprep.lattice import Lattice, LatticeSpec
from xcubeprep.pauli import PauliString
from xcubeprep.protocol import (
    Simulation,
    cluster_operators,
    cube_operator,
    ground_space_dimension,
    measure_ancillae,
    prepare_cluster,
    run_protocol,
    solve_correction,
    star_operator,
    verify_xcube,
)
from xcubeprep.records import CorrectionFrame, ErrorEvent, MeasurementRecord
from xcubeprep.scheduler import CircuitForm, Strategy, build_schedule, emit_circuit

LATTICES = (
    LatticeSpec(2, 2, 1),
    LatticeSpec(2, 2, 2),
    LatticeSpec(3, 3, 3),
    LatticeSpec(3, 3, 1, "one-storey"),
)


class TestClusterState(unittest.TestCase):
    def test_cluster_operators_are_fixed(self) -> None:
        for spec in LATTICES:
            lattice = Lattice(spec)
            code, ancilla = cluster_operators(lattice)
            for strategy in Strategy:
                with self.subTest(spec=spec.dims, boundary=spec.boundary, strategy=strategy):
                    tableau = prepare_cluster(lattice, strategy)
                    for pauli in code + ancilla:
                        self.assertEqual(tableau.expectation(pauli), 1)

    def test_stars_fixed_before_readout(self) -> None:
        for spec in LATTICES:
            lattice = Lattice(spec)
            tableau = prepare_cluster(lattice)
            with self.subTest(spec=spec.dims, boundary=spec.boundary):
                for star in lattice.star_sites:
                    self.assertEqual(tableau.expectation(star_operator(lattice, star)), 1)

    def test_strategies_prepare_the_same_state(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 2))
        self.assertEqual(
            prepare_cluster(lattice, "movement").state_key(),
            prepare_cluster(lattice, "cz12").state_key(),
        )

    def test_cz12_on_odd_periodic_lattice(self) -> None:
        lattice = Lattice(LatticeSpec(3, 3, 3))
        with self.assertRaises(ColoringError):
            build_schedule(lattice, "cz12")
        with self.assertLogs("xcubeprep.protocol", "WARNING") as cm:
            tableau = prepare_cluster(lattice, "cz12")
        self.assertIn("27 rounds", cm.output[0])
        self.assertEqual(tableau.state_key(), prepare_cluster(lattice, "movement").state_key())


class TestReadoutAndCorrection(unittest.TestCase):
    def setUp(self) -> None:
        self.lattice = Lattice(LatticeSpec(2, 2, 2))
        self.cluster = prepare_cluster(self.lattice)

    def test_many_seeds(self) -> None:
        lattice = self.lattice
        for seed in range(100):
            with self.subTest(seed=seed):
                sim = Simulation(lattice, seed=seed, cluster=self.cluster)
                record = sim.measure()
                before = sim.verify()
                for aid, value in record.outcomes.items():
                    self.assertEqual(before.cube_eigenvalues[aid], value)
                self.assertEqual(record.product, 1)
                self.assertEqual(record.violated_layers(lattice), ())
                self.assertTrue(all(v == 1 for v in record.layer_products(lattice).values()))

                frame = sim.correct()
                self.assertIsNotNone(frame)
                self.assertEqual(sim.stage, "corrected")
                self.assertTrue(sim.verify().all_plus)

    def test_layer_products_on_three_cubed(self) -> None:
        lattice = Lattice(LatticeSpec(3, 3, 3))
        cluster = prepare_cluster(lattice)
        for seed in range(100):
            with self.subTest(seed=seed):
                record = Simulation(lattice, seed=seed, cluster=cluster).measure()
                self.assertEqual(record.product, 1)
                products = record.layer_products(lattice)
                self.assertEqual(len(products), 9)
                self.assertTrue(all(v == 1 for v in products.values()))

    def test_cube_values_equal_outcomes(self) -> None:
        tableau = self.cluster.copy()
        _, record = measure_ancillae(tableau, self.lattice, np.random.default_rng(4))
        for aid in self.lattice.ancilla_ids:
            self.assertEqual(
                tableau.expectation(cube_operator(self.lattice, aid)),
                record.outcomes[aid],
            )

    def test_pauli_frame(self) -> None:
        for seed in range(10):
            sim = Simulation(self.lattice, seed=seed, cluster=self.cluster, pauli_frame=True)
            record = sim.measure()
            frame = sim.correct()
            self.assertIsNone(sim.applied_frame)
            self.assertEqual(sim.tracked_frame, frame)
            self.assertTrue(sim.verify().all_plus)
            # the tableau itself still carries the raw outcomes
            raw = verify_xcube(sim.tableau, self.lattice)
            self.assertEqual(raw.cube_eigenvalues, record.outcomes)

    def test_flipped_outcome_is_inconsistent(self) -> None:
        sim = Simulation(self.lattice, seed=3, cluster=self.cluster)
        record = sim.measure()
        flipped = record.flipped((0, 0, 0))
        with self.assertRaises(InconsistentRecordError) as cm:
            solve_correction(self.lattice, flipped)
        self.assertEqual(
            sorted(cm.exception.violated_layers),
            [("x", 0), ("y", 0), ("z", 0)],
        )
        self.assertIsNone(sim.correct(flipped))
        self.assertFalse(sim.record_consistent)
        self.assertEqual(sim.stage, "measured")

    def test_recorrect_with_replacement_record(self) -> None:
        sim = Simulation(self.lattice, seed=8, cluster=self.cluster)
        record = sim.measure()
        sim.correct()
        self.assertIsNotNone(sim.correct(record))
        self.assertTrue(sim.verify().all_plus)

    def test_stage_order(self) -> None:
        sim = Simulation(self.lattice, cluster=self.cluster)
        with self.assertRaises(InvalidErrorEventError):
            sim.correct()
        with self.assertRaises(InvalidErrorEventError):
            sim.expected_cube_values()
        sim.measure()
        with self.assertRaises(InvalidErrorEventError):
            sim.measure()

    def test_solution_flips_exactly_the_minus_cubes(self) -> None:
        lattice = self.lattice
        values = [1] * lattice.ancilla_count
        values[0] = values[1] = values[2] = values[3] = -1
        record = MeasurementRecord.from_values(lattice, values)
        frame = solve_correction(lattice, record)
        flips = (lattice.cube_incidence().astype(np.int64) @ frame.bits(lattice)) % 2
        np.testing.assert_array_equal(flips, record.syndrome_bits(lattice))
        self.assertEqual(CorrectionFrame.from_bits(lattice, frame.bits(lattice)), frame)


class TestCircuitForms(unittest.TestCase):
    def test_forms_agree(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 2))
        schedule = build_schedule(lattice, Strategy.MOVEMENT)
        cz_form = emit_circuit(schedule, CircuitForm.CZ)
        dynamic = emit_circuit(schedule, CircuitForm.DYNAMIC_CNOT)
        code = list(range(lattice.code_count))
        for seed in range(5):
            with self.subTest(seed=seed):
                a = cz_form.run(np.random.default_rng(seed))
                b = dynamic.run(np.random.default_rng(seed))
                self.assertEqual(a.outcomes, b.outcomes)
                self.assertEqual(
                    a.tableau.canonical_form(keep=code),
                    b.tableau.canonical_form(keep=code),
                )


class TestRunProtocol(unittest.TestCase):
    def test_periodic_run(self) -> None:
        report = run_protocol(Lattice(LatticeSpec(2, 2, 2)), seed=0)
        self.assertTrue(report.all_plus)
        self.assertIsNotNone(report.correction)
        self.assertTrue(report.syndromes.is_clean)
        self.assertEqual(set(report.timing), {"prepare", "measure", "correct", "verify"})
        document = report.to_document(include_timing=False)
        self.assertNotIn("timing", document)
        self.assertEqual(document["lattice"], {"lx": 2, "ly": 2, "lz": 2, "boundary": "periodic"})

    def test_one_storey_run(self) -> None:
        lattice = Lattice(LatticeSpec(3, 3, 1, "one-storey"))
        for strategy in Strategy:
            report = run_protocol(lattice, strategy, seed=5)
            self.assertTrue(report.all_plus)
            self.assertEqual(report.stabilizers.skipped_stars, lattice.undefined_stars)
            self.assertEqual(report.violated_layers, ())

    def test_ancilla_readout_error(self) -> None:
        event = ErrorEvent((0, 0, 0), "Z", "pre")
        report = run_protocol(Lattice(LatticeSpec(2, 2, 2)), seed=1, events=[event])
        self.assertIsNone(report.correction)
        self.assertEqual(len(report.violated_layers), 3)
        self.assertEqual(report.events, (event,))

    def test_same_seed_same_document(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 2))
        first = run_protocol(lattice, seed=12).to_document(include_timing=False)
        second = run_protocol(lattice, seed=12).to_document(include_timing=False)
        self.assertEqual(first, second)


class TestGroundSpace(unittest.TestCase):
    def test_cubic_lattice(self) -> None:
        lattice = Lattice(LatticeSpec(3, 3, 3))
        self.assertEqual(ground_space_dimension(lattice, "packed"), 15)
        self.assertEqual(ground_space_dimension(lattice, "dense"), 15)

    def test_methods_agree(self) -> None:
        for spec in (
            LatticeSpec(2, 2, 1),
            LatticeSpec(2, 2, 2),
            LatticeSpec(2, 3, 4),
            LatticeSpec(4, 3, 1, "one-storey"),
        ):
            lattice = Lattice(spec)
            with self.subTest(spec=spec.dims):
                self.assertEqual(
                    ground_space_dimension(lattice, "packed"),
                    ground_space_dimension(lattice, "dense"),
                )

    def test_extra_generators_reduce_dimension(self) -> None:
        lattice = Lattice(LatticeSpec(3, 3, 3))
        # Z along a full x line of edges commutes with every star
        line = [lattice.code_index[((x, 0, 0), "x")] for x in range(3)]
        logical = PauliString.from_support(lattice.code_count, z=line)
        self.assertEqual(ground_space_dimension(lattice, extra=[logical]), 14)

    def test_unknown_method(self) -> None:
        with self.assertRaises(ValueError):
            ground_space_dimension(Lattice(LatticeSpec(2, 2, 2)), "sparse")


if __name__ == "__main__":
    unittest.main()

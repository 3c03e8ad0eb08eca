#!/usr/bin/env python


import io
import os
import sys
import tempfile
import unittest

sys.path.append("..")

import numpy as np

from xcubeprep import circuit as circuits
from xcubeprep.circuit import Circuit, GateKind, GateOp
from xcubeprep.errors import CircuitFormatError, InvalidGateError
from xcubeprep.lattice import Lattice, LatticeSpec
from xcubeprep.scheduler import CircuitForm, Strategy, build_schedule, emit_circuit
from xcubeprep.tableau import Tableau

FRAGMENT = """\
# one ancilla (qubit 2) entangled with two code qubits
QUBITS 3
H q0
H q1
H a2
TICK
CZ12 a2 : c0 c1
TICK
MX q2 -> m0
"""


class TestGateOp(unittest.TestCase):
    def test_arity(self) -> None:
        for kind, qubits in (
            ("H", (0, 1)),
            ("CZ", (0,)),
            ("CNOT", (0, 1, 2)),
            ("CZ12", (0,)),
            ("CZ12", tuple(range(14))),
        ):
            with self.subTest(kind=kind, qubits=qubits):
                with self.assertRaises(InvalidGateError):
                    GateOp(kind, qubits)

    def test_operands(self) -> None:
        with self.assertRaises(InvalidGateError):
            GateOp("CZ", (1, 1))
        with self.assertRaises(InvalidGateError):
            GateOp("H", (-1,))
        with self.assertRaises(InvalidGateError):
            GateOp("MX", (0,))
        with self.assertRaises(InvalidGateError):
            GateOp("H", (0,), record=0)
        with self.assertRaises(ValueError):
            GateOp("SWAP", (0, 1))

    def test_text(self) -> None:
        self.assertEqual(GateOp("CZ12", (4, 0, 1, 2)).to_text(), "CZ12 a4 : c0 c1 c2")
        self.assertEqual(GateOp("MZ", (3,), record=7).to_text(), "MZ q3 -> m7")
        self.assertEqual(GateOp("CNOT", (0, 5)).to_text(), "CNOT q0 q5")
        self.assertEqual(GateOp("CZ12", (4, 0, 1, 2)), GateOp(GateKind.CZ12, [4, 0, 1, 2]))


class TestCircuit(unittest.TestCase):
    def test_moments(self) -> None:
        circuit = Circuit(3)
        circuit.add("H", 0)
        circuit.add("H", 1)
        circuit.tick()
        circuit.tick()
        circuit.add("CZ", 0, 1)
        self.assertEqual(circuit.depth, 2)
        self.assertEqual(circuit.count("H"), 2)
        self.assertEqual(circuit.num_records, 0)
        self.assertEqual([op.kind for op in circuit.ops()], [GateKind.H, GateKind.H, GateKind.CZ])

    def test_out_of_range(self) -> None:
        circuit = Circuit(2)
        with self.assertRaises(InvalidGateError):
            circuit.add("CZ", 0, 2)
        with self.assertRaises(InvalidGateError):
            Circuit(0)

    def test_parse_fragment(self) -> None:
        circuit = Circuit.from_text(FRAGMENT)
        self.assertEqual(circuit.num_qubits, 3)
        self.assertEqual(circuit.depth, 3)
        self.assertEqual(circuit.num_records, 1)
        self.assertEqual(circuit.moments[1], [GateOp("CZ12", (2, 0, 1))])
        self.assertEqual(Circuit.from_text(circuit.to_text()), circuit)

    def test_qubit_count_inferred(self) -> None:
        circuit = Circuit.from_text("H q0\nCZ q0 q4\n")
        self.assertEqual(circuit.num_qubits, 5)
        self.assertEqual(circuit.depth, 1)

    def test_header_lines(self) -> None:
        text = Circuit.from_text(FRAGMENT).to_text(("made by a test",))
        self.assertTrue(text.startswith("# made by a test\nQUBITS 3\n"))

    def test_parse_errors_report_line(self) -> None:
        for text, number in (
            ("H q0\nFOO q1\n", 2),
            ("QUBITS 2\n\nCZ q0 q0\n", 3),
            ("H q0\nQUBITS 2\n", 2),
            ("MX q0 m0\n", 1),
            ("CZ12 a0 c1 c2\n", 1),
            ("H x0\n", 1),
            ("TICK q0\n", 1),
        ):
            with self.subTest(text=text):
                with self.assertRaises(CircuitFormatError) as cm:
                    Circuit.from_text(text)
                self.assertEqual(cm.exception.line_number, number)

    def test_load_and_dump(self) -> None:
        circuit = Circuit.from_text(FRAGMENT)
        self.assertEqual(circuits.load(io.StringIO(FRAGMENT)), circuit)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "fragment.circ")
            circuits.dump(circuit, path, ("fragment",))
            self.assertEqual(circuits.load(path), circuit)

    def test_emitted_text_round_trip(self) -> None:
        lattice = Lattice(LatticeSpec(2, 2, 1))
        for strategy in Strategy:
            for form in CircuitForm:
                with self.subTest(strategy=strategy, form=form):
                    circuit = emit_circuit(build_schedule(lattice, strategy), form)
                    text = circuit.to_text()
                    self.assertEqual(Circuit.from_text(text), circuit)
                    self.assertEqual(Circuit.from_text(text).to_text(), text)


class TestCircuitRun(unittest.TestCase):
    def test_fragment_forms_agree(self) -> None:
        cz_form = Circuit.from_text(FRAGMENT)
        dynamic = Circuit.from_text(
            "QUBITS 3\nH q0\nH q1\nTICK\nCNOT q0 q2\nCNOT q1 q2\nTICK\nMZ q2 -> m0\n",
        )
        for seed in range(8):
            a = cz_form.run(np.random.default_rng(seed))
            b = dynamic.run(np.random.default_rng(seed))
            self.assertEqual(a.outcomes, b.outcomes)
            self.assertEqual(
                a.tableau.canonical_form(keep=[0, 1]),
                b.tableau.canonical_form(keep=[0, 1]),
            )

    def test_fragment_state(self) -> None:
        result = Circuit.from_text(FRAGMENT).run(np.random.default_rng(3))
        m = result.outcomes[0]
        # the ancilla outcome fixes Z0 Z1 on the code qubits
        self.assertEqual(
            set(result.tableau.canonical_form(keep=[0, 1])),
            {"+XX", "+ZZ" if m == 1 else "-ZZ"},
        )

    def test_run_on_given_tableau(self) -> None:
        with self.assertRaises(InvalidGateError):
            Circuit.from_text(FRAGMENT).run(np.random.default_rng(), Tableau(2))


if __name__ == "__main__":
    unittest.main()

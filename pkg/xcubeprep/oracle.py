"""
Dense statevector oracle
========================

A small, slow and independent simulator used to cross-check the tableau.
Amplitudes are kept as an ``n``-axis complex tensor; qubit 0 is axis 0, so
it is the most significant bit of a flattened basis index.

"""

import logging
from collections.abc import Mapping
from typing import Optional

import numpy as np

from xcubeprep.circuit import Circuit, GateKind, GateOp
from xcubeprep.errors import OracleSizeError
from xcubeprep.pauli import PauliString

logger = logging.getLogger(__name__)

MAX_QUBITS = 20

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class StatevectorOracle:
    """Dense simulation of ``n <= 20`` qubits starting from ``|0...0>``."""

    n: int

    def __init__(self, n: int) -> None:
        if n > MAX_QUBITS:
            raise OracleSizeError(
                f"the statevector oracle supports at most {MAX_QUBITS} qubits, got {n}",
                n,
                MAX_QUBITS,
            )
        if n < 1:
            raise ValueError(f"the oracle needs at least one qubit, got {n}")
        self.n = n
        self._state = np.zeros((2,) * n, dtype=complex)
        self._state[(0,) * n] = 1.0

    @classmethod
    def from_circuit(
        cls,
        circuit: Circuit,
        rng: Optional[np.random.Generator] = None,
        forced: Optional[Mapping[int, int]] = None,
    ) -> tuple["StatevectorOracle", dict[int, int]]:
        """Run ``circuit``; ``forced`` fixes outcomes by record slot.

        :returns: the oracle and the outcome of every record slot.
        """
        oracle = cls(circuit.num_qubits)
        forced = forced or {}
        outcomes = {}
        for op in circuit.ops():
            if op.kind.is_measurement:
                outcomes[op.record] = oracle.measure(
                    op.qubits[0],
                    op.kind.value[1],
                    rng,
                    forced.get(op.record),  # type: ignore[arg-type]
                )
            else:
                oracle.apply(op)
        return oracle, outcomes

    def _slice(self, *pairs: tuple[int, int]) -> tuple:
        index: list = [slice(None)] * self.n
        for qubit, value in pairs:
            index[qubit] = value
        return tuple(index)

    def h(self, q: int) -> None:
        moved = np.moveaxis(self._state, q, 0)
        self._state = np.moveaxis(np.tensordot(_H, moved, axes=([1], [0])), 0, q)

    def x(self, q: int) -> None:
        self._state = np.flip(self._state, axis=q).copy()

    def z(self, q: int) -> None:
        self._state[self._slice((q, 1))] *= -1

    def cz(self, a: int, b: int) -> None:
        self._state[self._slice((a, 1), (b, 1))] *= -1

    def cnot(self, control: int, target: int) -> None:
        on = self._slice((control, 1))
        # the target axis shifts down by one once the control axis is sliced out
        axis = target - 1 if target > control else target
        self._state[on] = np.flip(self._state[on], axis=axis).copy()

    def apply(self, op: GateOp) -> None:
        """Apply a unitary gate operation."""
        kind = op.kind
        q = op.qubits
        if kind is GateKind.H:
            self.h(q[0])
        elif kind is GateKind.X:
            self.x(q[0])
        elif kind is GateKind.Z:
            self.z(q[0])
        elif kind is GateKind.CZ:
            self.cz(q[0], q[1])
        elif kind is GateKind.CNOT:
            self.cnot(q[0], q[1])
        elif kind is GateKind.CZ12:
            for t in q[1:]:
                self.cz(q[0], t)
        else:
            raise ValueError(f"{kind.value} is not a unitary gate")

    def measure(
        self,
        q: int,
        basis: str = "Z",
        rng: Optional[np.random.Generator] = None,
        forced: Optional[int] = None,
    ) -> int:
        """Projective measurement returning +1 or -1.

        :raises ValueError: if ``forced`` names an outcome of zero probability.
        """
        if basis == "X":
            self.h(q)
        elif basis != "Z":
            raise ValueError(f"unknown measurement basis {basis!r}")
        p_minus = float(np.sum(np.abs(self._state[self._slice((q, 1))]) ** 2))
        if forced is not None:
            bit = 0 if forced == 1 else 1
        else:
            if rng is None:
                rng = np.random.default_rng()
            bit = int(rng.random() < p_minus)
        probability = p_minus if bit else 1.0 - p_minus
        if probability < 1e-12:
            raise ValueError(f"outcome {1 - 2 * bit:+d} on qubit {q} has zero probability")
        self._state[self._slice((q, 1 - bit))] = 0.0
        self._state /= np.sqrt(probability)
        if basis == "X":
            self.h(q)
        return 1 - 2 * bit

    def amplitudes(self) -> np.ndarray:
        """Flattened amplitudes, qubit 0 most significant."""
        return self._state.reshape(-1).copy()

    def expectation(self, pauli: PauliString) -> float:
        """``<psi| pauli |psi>`` as a real number."""
        if pauli.n != self.n:
            raise ValueError(f"qubit counts differ: {pauli.n} vs {self.n}")
        phi = self._state.copy()
        y_count = 0
        for q in range(self.n):
            xb, zb = pauli.x_bit(q), pauli.z_bit(q)
            if zb:
                phi[self._slice((q, 1))] *= -1
            if xb:
                phi = np.flip(phi, axis=q)
            y_count += xb & zb
        # X·Z = -iY, so each Y factor needs an extra i
        factor = 1j ** ((pauli.phase + y_count) % 4)
        value = factor * np.vdot(self._state.reshape(-1), phi.reshape(-1))
        return float(value.real)


__all__ = ["MAX_QUBITS", "StatevectorOracle"]

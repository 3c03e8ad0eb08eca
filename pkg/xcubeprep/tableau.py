"""
==================
Stabilizer Tableau
==================

Exact Clifford simulation of stabilizer states with destabilizers, in the
style of the CHP algorithm, over bit-packed rows.

Rows ``0..n-1`` are destabilizers and rows ``n..2n-1`` stabilizers. Each row
is a Pauli string with a sign bit; global phases of the state are not
tracked.

"""

import logging
from collections.abc import Sequence
from typing import Optional

import numpy as np

from xcubeprep.errors import InvalidGateError
from xcubeprep.gf2 import get_bit, num_words, pack_bits, parity
from xcubeprep.pauli import PauliString, product_phase

logger = logging.getLogger(__name__)

_ONE = np.uint64(1)


class Tableau:
    """A stabilizer state on ``n`` qubits.

    A tableau has a single writer; :py:meth:`expectation` and
    :py:meth:`canonical_form` do not mutate and may run concurrently.
    """

    n: int

    def __init__(self, n: int) -> None:
        """Create the ``|0...0>`` state (stabilizers ``Z_i``)."""
        if n < 1:
            raise ValueError(f"a tableau needs at least one qubit, got {n}")
        self.n = n
        words = num_words(n)
        eye = pack_bits(np.eye(n, dtype=np.uint8))
        self._x = np.zeros((2 * n, words), dtype=np.uint64)
        self._z = np.zeros((2 * n, words), dtype=np.uint64)
        self._r = np.zeros(2 * n, dtype=np.uint8)
        self._x[:n] = eye
        self._z[n:] = eye

    @classmethod
    def plus_state(cls, n: int) -> "Tableau":
        """The ``|+...+>`` state: stabilizers ``+X_i``, destabilizers ``Z_i``."""
        tableau = cls(n)
        tableau._x, tableau._z = tableau._z, tableau._x
        return tableau

    def copy(self) -> "Tableau":
        """An independent copy."""
        other = Tableau.__new__(Tableau)
        other.n = self.n
        other._x = self._x.copy()
        other._z = self._z.copy()
        other._r = self._r.copy()
        return other

    # -- row access ---------------------------------------------------------

    def stabilizers(self) -> list[PauliString]:
        """The stabilizer generators as Pauli strings."""
        return [self._row(i) for i in range(self.n, 2 * self.n)]

    def destabilizers(self) -> list[PauliString]:
        """The destabilizer generators as Pauli strings."""
        return [self._row(i) for i in range(self.n)]

    def _row(self, i: int) -> PauliString:
        return PauliString(self.n, self._x[i], self._z[i], phase=2 * int(self._r[i]))

    # -- gates --------------------------------------------------------------

    def _check_qubits(self, *qubits: int) -> None:
        for q in qubits:
            if not 0 <= q < self.n:
                raise InvalidGateError(f"qubit {q} is out of range for {self.n} qubits")
        if len(set(qubits)) != len(qubits):
            raise InvalidGateError(f"duplicate operands {qubits}")

    def _bits(self, q: int) -> tuple[np.ndarray, np.ndarray]:
        return get_bit(self._x, q), get_bit(self._z, q)

    def _toggle(self, table: np.ndarray, q: int, values: np.ndarray) -> None:
        table[:, q >> 6] ^= values << np.uint64(q & 63)

    def h(self, q: int) -> None:
        """Hadamard: X <-> Z, Y -> -Y."""
        self._check_qubits(q)
        x, z = self._bits(q)
        self._r ^= (x & z).astype(np.uint8)
        swap = x ^ z
        self._toggle(self._x, q, swap)
        self._toggle(self._z, q, swap)

    def x(self, q: int) -> None:
        """Pauli X: flips the sign of rows with a Z or Y on ``q``."""
        self._check_qubits(q)
        self._r ^= get_bit(self._z, q).astype(np.uint8)

    def z(self, q: int) -> None:
        """Pauli Z: flips the sign of rows with an X or Y on ``q``."""
        self._check_qubits(q)
        self._r ^= get_bit(self._x, q).astype(np.uint8)

    def y(self, q: int) -> None:
        """Pauli Y."""
        self._check_qubits(q)
        x, z = self._bits(q)
        self._r ^= (x ^ z).astype(np.uint8)

    def cz(self, a: int, b: int) -> None:
        """Controlled-Z; conjugates ``X_a -> X_a Z_b``."""
        self._check_qubits(a, b)
        xa, za = self._bits(a)
        xb, zb = self._bits(b)
        self._r ^= (xa & xb & (za ^ zb)).astype(np.uint8)
        self._toggle(self._z, a, xb)
        self._toggle(self._z, b, xa)

    def cnot(self, control: int, target: int) -> None:
        """Controlled-NOT."""
        self._check_qubits(control, target)
        xc, zc = self._bits(control)
        xt, zt = self._bits(target)
        self._r ^= (xc & zt & (xt ^ zc ^ _ONE)).astype(np.uint8)
        self._toggle(self._x, target, xc)
        self._toggle(self._z, control, zt)

    def cz_multi(self, control: int, targets: Sequence[int]) -> None:
        """Multi-target controlled-Z, equal to one CZ per target."""
        self._check_qubits(control, *targets)
        for t in targets:
            self.cz(control, t)

    def apply_pauli(self, pauli: PauliString) -> None:
        """Apply a Pauli operator as a gate (signs only)."""
        if pauli.n != self.n:
            raise ValueError(f"qubit counts differ: {pauli.n} vs {self.n}")
        self._r ^= self._anticommutes(pauli.x, pauli.z)

    # -- measurement --------------------------------------------------------

    def measure(
        self,
        qubit: int,
        basis: str,
        rng: np.random.Generator,
    ) -> tuple[int, bool]:
        """Measure ``qubit`` in the X or Z basis.

        Random outcomes draw one fair bit from ``rng``.

        :returns: ``(outcome, deterministic)`` with outcome +1 or -1.
        """
        if basis == "X":
            self.h(qubit)
            try:
                return self.measure_z(qubit, rng)
            finally:
                self.h(qubit)
        if basis == "Z":
            return self.measure_z(qubit, rng)
        raise ValueError(f"unknown measurement basis {basis!r}")

    def measure_z(self, q: int, rng: np.random.Generator) -> tuple[int, bool]:
        """Measure ``Z_q``, updating the state."""
        self._check_qubits(q)
        n = self.n
        xq = get_bit(self._x, q)
        hits = np.flatnonzero(xq[n:])
        if hits.size == 0:
            product = self._product_of_stabilizers(np.flatnonzero(xq[:n]))
            return product.sign, True

        p = n + int(hits[0])
        rows = np.flatnonzero(xq)
        rows = rows[rows != p]
        if rows.size:
            self._rowsum(rows, p)
        self._x[p - n] = self._x[p]
        self._z[p - n] = self._z[p]
        self._r[p - n] = self._r[p]
        self._x[p] = 0
        self._z[p] = 0
        self._toggle(self._z[p : p + 1], q, np.array([_ONE], dtype=np.uint64))
        bit = int(rng.integers(0, 2))
        self._r[p] = bit
        return (-1 if bit else 1), False

    def _rowsum(self, rows: np.ndarray, p: int) -> None:
        """Replace each row ``h`` in ``rows`` by ``row_p * row_h``."""
        g = product_phase(self._x[p], self._z[p], self._x[rows], self._z[rows])
        total = (2 * self._r[rows].astype(np.int64) + 2 * int(self._r[p]) + g) & 3
        self._r[rows] = (total >> 1).astype(np.uint8)
        self._x[rows] ^= self._x[p]
        self._z[rows] ^= self._z[p]

    def _product_of_stabilizers(self, indices: np.ndarray) -> PauliString:
        product = PauliString.identity(self.n)
        for i in indices:
            product = product * self._row(self.n + int(i))
        return product

    def _anticommutes(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        return parity((self._x & z) ^ (self._z & x))

    # -- queries ------------------------------------------------------------

    def expectation(self, pauli: PauliString) -> int:
        """``<pauli>`` on this state: +1, -1, or 0 when it is not determined."""
        if pauli.n != self.n:
            raise ValueError(f"qubit counts differ: {pauli.n} vs {self.n}")
        anti = self._anticommutes(pauli.x, pauli.z)
        if anti[self.n :].any():
            return 0
        product = self._product_of_stabilizers(np.flatnonzero(anti[: self.n]))
        if not (np.array_equal(product.x, pauli.x) and np.array_equal(product.z, pauli.z)):
            raise AssertionError("tableau lost symplectic consistency")
        return product.sign * pauli.sign

    def is_valid(self) -> bool:
        """Check the symplectic invariants of the generator matrix."""
        n = self.n
        x, z = self._x, self._z
        for i in range(2 * n):
            anti = parity((x & z[i]) ^ (z & x[i]))
            expected = np.zeros(2 * n, dtype=np.uint8)
            if i < n:
                expected[i + n] = 1
            else:
                expected[i - n] = 1
            if not np.array_equal(anti, expected):
                return False
        return True

    def canonical_form(self, keep: Optional[Sequence[int]] = None) -> tuple[str, ...]:
        """Deterministic generator labels of the stabilizer group.

        The stabilizer rows are brought to reduced row echelon form with
        deterministic pivoting. With ``keep``, only the subgroup supported
        on those qubits is returned, labelled over ``keep`` in order; this is
        how two states are compared after other qubits are measured out.
        """
        n = self.n
        keep = list(range(n)) if keep is None else list(keep)
        keep_set = set(keep)
        dropped = [q for q in range(n) if q not in keep_set]
        columns = [(0, q) for q in dropped] + [(1, q) for q in dropped]
        columns += [(0, q) for q in keep] + [(1, q) for q in keep]
        x = self._x[n:].copy()
        z = self._z[n:].copy()
        r = self._r[n:].copy()
        boundary = 2 * len(dropped)

        rank = 0
        labels = []
        for index, (kind, q) in enumerate(columns):
            if rank == n:
                break
            table = x if kind == 0 else z
            hits = np.flatnonzero(get_bit(table[rank:], q)) + rank
            if hits.size == 0:
                continue
            p = int(hits[0])
            if p != rank:
                for arr in (x, z, r):
                    arr[[rank, p]] = arr[[p, rank]]
            others = np.flatnonzero(get_bit(table, q))
            others = others[others != rank]
            if others.size:
                g = product_phase(x[rank], z[rank], x[others], z[others])
                total = (2 * r[others].astype(np.int64) + 2 * int(r[rank]) + g) & 3
                r[others] = (total >> 1).astype(np.uint8)
                x[others] ^= x[rank]
                z[others] ^= z[rank]
            if index >= boundary:
                labels.append(rank)
            rank += 1

        return tuple(
            str(PauliString(n, x[i], z[i], phase=2 * int(r[i])).restricted(keep))
            for i in labels
        )

    def state_key(self) -> bytes:
        """Compact byte form of :py:meth:`canonical_form` for equality tests."""
        return "\n".join(self.canonical_form()).encode()

    def __repr__(self) -> str:
        return f"{self.__module__}.Tableau(n={self.n})"


def new_plus_state(n: int) -> Tableau:
    """The ``|+>^n`` product state."""
    return Tableau.plus_state(n)


__all__ = ["Tableau", "new_plus_state"]

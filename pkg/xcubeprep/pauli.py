"""
Pauli strings
=============

A :py:class:`PauliString` is ``i**k`` times a tensor product of I, X, Y, Z.
The qubit ``j`` factor is encoded by bits ``(x_j, z_j)``: ``(0,0)=I``,
``(1,0)=X``, ``(1,1)=Y``, ``(0,1)=Z``. Bits are packed into 64-bit words
(see :py:mod:`xcubeprep.gf2`).

Only real signs are part of the public surface; products keep the full
``{1, i, -1, -i}`` phase so that intermediate results stay exact.

"""

from collections.abc import Iterable
from typing import Optional

import numpy as np

from xcubeprep.gf2 import get_bit, num_words, pack_bits, unpack_bits

_LABELS = "IXZY"


def product_phase(
    x1: np.ndarray,
    z1: np.ndarray,
    x2: np.ndarray,
    z2: np.ndarray,
) -> np.ndarray:
    """Exponent of ``i`` picked up when multiplying ``P1 * P2`` qubit-wise.

    Works on packed words and broadcasts over leading axes; the result is
    reduced mod 4.
    """
    nx1 = ~x1
    nz1 = ~z1
    nx2 = ~x2
    nz2 = ~z2
    plus = (x1 & nz1 & x2 & z2) | (x1 & z1 & nx2 & z2) | (nx1 & z1 & x2 & nz2)
    minus = (x1 & nz1 & nx2 & z2) | (x1 & z1 & x2 & nz2) | (nx1 & z1 & x2 & z2)
    count = np.bitwise_count(plus).sum(axis=-1, dtype=np.int64) - np.bitwise_count(
        minus,
    ).sum(axis=-1, dtype=np.int64)
    return count & 3


class PauliString:
    """A phased Pauli operator on ``n`` qubits.

    :ivar n: Number of qubits
    :ivar x: Packed X bits
    :ivar z: Packed Z bits

    """

    __slots__ = ("_phase", "n", "x", "z")

    def __init__(
        self,
        n: int,
        x: Optional[np.ndarray] = None,
        z: Optional[np.ndarray] = None,
        sign: int = 1,
        *,
        phase: Optional[int] = None,
    ) -> None:
        if n < 1:
            raise ValueError(f"a Pauli string needs at least one qubit, got {n}")
        words = num_words(n)
        self.n = n
        self.x = np.zeros(words, dtype=np.uint64) if x is None else np.array(x, dtype=np.uint64)
        self.z = np.zeros(words, dtype=np.uint64) if z is None else np.array(z, dtype=np.uint64)
        if self.x.shape != (words,) or self.z.shape != (words,):
            raise ValueError(f"packed rows must have {words} words")
        if phase is None:
            if sign not in (1, -1):
                raise ValueError(f"sign must be +1 or -1, got {sign}")
            phase = 0 if sign == 1 else 2
        self._phase = phase & 3

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a label such as ``"+XZI"`` or ``"-YY"``; qubit 0 is leftmost."""
        sign = 1
        if label[:1] in "+-":
            sign = -1 if label[0] == "-" else 1
            label = label[1:]
        xs = np.zeros(len(label), dtype=np.uint8)
        zs = np.zeros(len(label), dtype=np.uint8)
        for j, ch in enumerate(label.upper()):
            if ch not in _LABELS:
                raise ValueError(f"unknown Pauli {ch!r} in {label!r}")
            xs[j] = ch in "XY"
            zs[j] = ch in "ZY"
        return cls(len(label), pack_bits(xs), pack_bits(zs), sign)

    @classmethod
    def from_support(
        cls,
        n: int,
        x: Iterable[int] = (),
        z: Iterable[int] = (),
        sign: int = 1,
    ) -> "PauliString":
        """Build from qubit lists; repeated indices cancel pairwise.

        A qubit in both lists carries Y (not ``X·Z``).
        """
        xs = np.zeros(n, dtype=np.uint8)
        zs = np.zeros(n, dtype=np.uint8)
        for q in x:
            xs[q] ^= 1
        for q in z:
            zs[q] ^= 1
        return cls(n, pack_bits(xs), pack_bits(zs), sign)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        """The identity on ``n`` qubits."""
        return cls(n)

    # -- algebra ------------------------------------------------------------

    @property
    def phase(self) -> int:
        """Exponent ``k`` of the overall ``i**k`` factor."""
        return self._phase

    @property
    def is_hermitian(self) -> bool:
        """True when the overall factor is real."""
        return self._phase % 2 == 0

    @property
    def sign(self) -> int:
        """The real sign, +1 or -1.

        :raises ValueError: if the overall factor is imaginary.
        """
        if not self.is_hermitian:
            raise ValueError(f"{self} has an imaginary phase")
        return 1 if self._phase == 0 else -1

    def __mul__(self, other: "PauliString") -> "PauliString":
        self._check_size(other)
        phase = self._phase + other._phase + int(product_phase(self.x, self.z, other.x, other.z))
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, phase=phase)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, phase=self._phase + 2)

    def commutes(self, other: "PauliString") -> bool:
        """Symplectic test: even overlap of ``x1·z2 + z1·x2``."""
        self._check_size(other)
        overlap = (self.x & other.z) ^ (self.z & other.x)
        return int(np.bitwise_count(overlap).sum()) % 2 == 0

    def x_bit(self, q: int) -> int:
        """X bit of qubit ``q``."""
        return int(get_bit(self.x, q))

    def z_bit(self, q: int) -> int:
        """Z bit of qubit ``q``."""
        return int(get_bit(self.z, q))

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return int(np.bitwise_count(self.x | self.z).sum())

    def unsigned(self) -> "PauliString":
        """The same Pauli factors with sign +1."""
        return PauliString(self.n, self.x, self.z)

    def restricted(self, qubits: Iterable[int]) -> "PauliString":
        """The factors on ``qubits`` only, in the given order, same phase."""
        qubits = list(qubits)
        xs = unpack_bits(self.x, self.n)[qubits]
        zs = unpack_bits(self.z, self.n)[qubits]
        return PauliString(len(qubits), pack_bits(xs), pack_bits(zs), phase=self._phase)

    # -- dunder -------------------------------------------------------------

    def _check_size(self, other: "PauliString") -> None:
        if other.n != self.n:
            raise ValueError(f"qubit counts differ: {self.n} vs {other.n}")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PauliString)
            and self.n == other.n
            and self._phase == other._phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.n, self._phase, self.x.tobytes(), self.z.tobytes()))

    def __str__(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self._phase]
        codes = unpack_bits(self.x, self.n) + 2 * unpack_bits(self.z, self.n)
        return prefix + "".join(_LABELS[c] for c in codes)

    def __repr__(self) -> str:
        return f"{self.__module__}.PauliString.from_label({str(self)!r})"

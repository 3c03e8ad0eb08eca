#!/usr/bin/env python


import sys
import unittest

sys.path.append("..")

from hypothesis import given, settings
from hypothesis import strategies as st

from xcubeprep.pauli import PauliString

# products of single-qubit Paulis as "i**k P"
_TABLE = {
    ("I", "I"): (0, "I"),
    ("I", "X"): (0, "X"),
    ("I", "Y"): (0, "Y"),
    ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"),
    ("X", "X"): (0, "I"),
    ("X", "Y"): (1, "Z"),
    ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"),
    ("Y", "X"): (3, "Z"),
    ("Y", "Y"): (0, "I"),
    ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"),
    ("Z", "X"): (1, "Y"),
    ("Z", "Y"): (3, "X"),
    ("Z", "Z"): (0, "I"),
}


def paulis(n: int):
    return st.tuples(
        st.sampled_from("+-"),
        st.text(alphabet="IXYZ", min_size=n, max_size=n),
    ).map(lambda t: PauliString.from_label(t[0] + t[1]))


pauli_triples = st.integers(min_value=1, max_value=70).flatmap(
    lambda n: st.tuples(paulis(n), paulis(n), paulis(n)),
)


class TestPauliString(unittest.TestCase):
    def test_single_qubit_table(self) -> None:
        for (a, b), (phase, label) in _TABLE.items():
            with self.subTest(a=a, b=b):
                product = PauliString.from_label(a) * PauliString.from_label(b)
                self.assertEqual(product.phase, phase)
                self.assertEqual(product.unsigned(), PauliString.from_label(label))

    def test_two_qubit_product(self) -> None:
        # (X Z) (Z X) = (XZ) (ZX) = (-iY)(iY) = +YY
        product = PauliString.from_label("XZ") * PauliString.from_label("ZX")
        self.assertEqual(product, PauliString.from_label("YY"))

    def test_label_round_trip(self) -> None:
        for label in ("+XYZI", "-ZZ", "+I"):
            self.assertEqual(str(PauliString.from_label(label)), label)
        self.assertEqual(str(-PauliString.from_label("X") * PauliString.from_label("Y")), "-iZ")

    def test_from_support_cancels(self) -> None:
        self.assertEqual(
            PauliString.from_support(4, x=[0, 0, 1], z=[1, 3]),
            PauliString.from_label("IYIZ"),
        )

    def test_sign(self) -> None:
        self.assertEqual(PauliString.from_label("-X").sign, -1)
        imaginary = PauliString.from_label("X") * PauliString.from_label("Z")
        self.assertFalse(imaginary.is_hermitian)
        with self.assertRaises(ValueError):
            _ = imaginary.sign

    def test_weight_and_bits(self) -> None:
        pauli = PauliString.from_label("XIYZ")
        self.assertEqual(pauli.weight, 3)
        self.assertEqual([pauli.x_bit(q) for q in range(4)], [1, 0, 1, 0])
        self.assertEqual([pauli.z_bit(q) for q in range(4)], [0, 0, 1, 1])

    def test_restricted(self) -> None:
        pauli = PauliString.from_label("-XIYZ")
        self.assertEqual(pauli.restricted([3, 0]), PauliString.from_label("-ZX"))

    def test_size_mismatch(self) -> None:
        with self.assertRaises(ValueError):
            _ = PauliString.from_label("X") * PauliString.from_label("XX")

    def test_many_words(self) -> None:
        label = "X" * 64 + "Z" * 6
        a = PauliString.from_label(label)
        b = PauliString.from_label("Z" + "I" * 69)
        self.assertFalse(a.commutes(b))
        self.assertEqual(str(a * a), "+" + "I" * 70)

    @settings(max_examples=200)
    @given(pauli_triples)
    def test_commutation_matches_products(self, triple) -> None:
        p, q, _ = triple
        if p.commutes(q):
            self.assertEqual(p * q, q * p)
        else:
            self.assertEqual(p * q, -(q * p))

    @settings(max_examples=200)
    @given(pauli_triples)
    def test_associative(self, triple) -> None:
        p, q, r = triple
        self.assertEqual((p * q) * r, p * (q * r))

    @given(pauli_triples)
    def test_hermitian_squares_to_identity(self, triple) -> None:
        p = triple[0]
        self.assertEqual(p * p, PauliString.identity(p.n))


if __name__ == "__main__":
    unittest.main()

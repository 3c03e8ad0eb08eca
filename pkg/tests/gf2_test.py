#!/usr/bin/env python


import sys
import unittest

sys.path.append("..")

import galois
import numpy as np

from xcubeprep import gf2


class TestPacking(unittest.TestCase):
    def test_pack_unpack(self) -> None:
        rng = np.random.default_rng(1)
        bits = rng.integers(0, 2, size=(3, 130), dtype=np.uint8)
        words = gf2.pack_bits(bits)
        self.assertEqual(words.shape, (3, 3))
        self.assertEqual(words.dtype, np.uint64)
        np.testing.assert_array_equal(gf2.unpack_bits(words, 130), bits)
        for j in (0, 63, 64, 129):
            np.testing.assert_array_equal(gf2.get_bit(words, j), bits[:, j])

    def test_parity(self) -> None:
        bits = np.zeros((2, 70), dtype=np.uint8)
        bits[0, [1, 65, 69]] = 1
        bits[1, [3, 4]] = 1
        np.testing.assert_array_equal(gf2.parity(gf2.pack_bits(bits)), [1, 0])

    def test_num_words(self) -> None:
        self.assertEqual(gf2.num_words(0), 1)
        self.assertEqual(gf2.num_words(64), 1)
        self.assertEqual(gf2.num_words(65), 2)


class TestElimination(unittest.TestCase):
    def test_rank_small(self) -> None:
        self.assertEqual(gf2.rank(np.eye(5, dtype=np.uint8)), 5)
        self.assertEqual(gf2.rank(np.array([[1, 1], [1, 1]], dtype=np.uint8)), 1)
        self.assertEqual(gf2.rank(np.zeros((3, 4), dtype=np.uint8)), 0)
        self.assertEqual(gf2.rank(np.zeros((0, 4), dtype=np.uint8)), 0)

    def test_rank_agrees_with_galois(self) -> None:
        rng = np.random.default_rng(7)
        for shape in ((5, 9), (20, 20), (40, 70), (70, 40)):
            with self.subTest(shape=shape):
                for _ in range(5):
                    matrix = rng.integers(0, 2, size=shape, dtype=np.uint8)
                    matrix[-1] = matrix[0] ^ matrix[1]
                    expected = int(np.linalg.matrix_rank(galois.GF(2)(matrix)))
                    self.assertEqual(gf2.rank(matrix), expected)

    def test_solve(self) -> None:
        rng = np.random.default_rng(3)
        matrix = rng.integers(0, 2, size=(12, 30), dtype=np.uint8)
        x = rng.integers(0, 2, size=30, dtype=np.uint8)
        rhs = (matrix.astype(np.int64) @ x) % 2
        solution = gf2.solve(matrix, rhs)
        self.assertIsNotNone(solution)
        np.testing.assert_array_equal((matrix.astype(np.int64) @ solution) % 2, rhs)

    def test_solve_inconsistent(self) -> None:
        matrix = np.array([[1, 1, 0], [1, 1, 0]], dtype=np.uint8)
        self.assertIsNone(gf2.solve(matrix, np.array([1, 0], dtype=np.uint8)))
        np.testing.assert_array_equal(
            gf2.solve(matrix, np.array([1, 1], dtype=np.uint8)),
            [1, 0, 0],
        )

    def test_row_reduce_is_deterministic(self) -> None:
        bits = np.array([[0, 1, 1], [1, 1, 0], [1, 0, 1]], dtype=np.uint8)
        rows, pivots = gf2.row_reduce(gf2.pack_bits(bits), [0, 1, 2])
        self.assertEqual(pivots, [0, 1])
        np.testing.assert_array_equal(
            gf2.unpack_bits(rows, 3),
            [[1, 0, 1], [0, 1, 1], [0, 0, 0]],
        )


if __name__ == "__main__":
    unittest.main()

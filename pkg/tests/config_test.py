#!/usr/bin/env python


import argparse
import os
import sys
import tempfile
import unittest

sys.path.append("..")

from xcubeprep.config import RunConfig, target_kinds
from xcubeprep.errors import InvalidConfigError
from xcubeprep.lattice import Boundary, LatticeSpec
from xcubeprep.records import ErrorEvent
from xcubeprep.scheduler import CircuitForm, Strategy

EXAMPLE = """\
[xcubeprep]
lx = 4
ly = 2
boundary = periodic
strategy = cz12
seed = 7
inject = X:0,0,0,x:post Z:1,1,0:pre
pauli_frame = yes
sweep = x, z
"""


class TestRunConfig(unittest.TestCase):
    def test_defaults(self) -> None:
        config = RunConfig()
        self.assertEqual(config.spec, LatticeSpec(2, 2, 2))
        self.assertIs(config.strategy, Strategy.MOVEMENT)
        self.assertIs(config.form, CircuitForm.CZ)
        self.assertEqual(config.sweep, ["X", "Y", "Z"])
        self.assertEqual(config.events, [])

    def test_one_storey_default_height(self) -> None:
        config = RunConfig(3, 3, boundary="one-storey")
        self.assertEqual(config.resolved_lz, 1)
        self.assertEqual(config.spec, LatticeSpec(3, 3, 1, Boundary.ONE_STOREY_OPEN))
        self.assertEqual(config.to_dict()["lz"], 1)

    def test_invalid_values(self) -> None:
        for kwargs, key in (
            ({"strategy": "greedy"}, "strategy"),
            ({"boundary": "open"}, "boundary"),
            ({"form": "cz-only"}, "form"),
            ({"workers": 0}, "workers"),
            ({"sweep": ["W"]}, "sweep"),
            ({"targets": "both"}, "targets"),
        ):
            with self.subTest(kwargs=kwargs):
                with self.assertRaises(InvalidConfigError) as cm:
                    RunConfig(**kwargs)
                self.assertEqual(cm.exception.key, key)

    def test_invalid_lattice(self) -> None:
        config = RunConfig(lx=1)
        with self.assertRaises(InvalidConfigError) as cm:
            _ = config.spec
        self.assertEqual(cm.exception.key, "lx")
        with self.assertRaises(InvalidConfigError) as cm:
            _ = RunConfig(lz=2, boundary="one-storey").spec
        self.assertEqual(cm.exception.key, "lz")

    def test_target_kinds(self) -> None:
        self.assertEqual(target_kinds("all"), ("code", "ancilla"))
        self.assertEqual(target_kinds("ancilla"), ("ancilla",))


class TestConfigFile(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, text: str) -> str:
        path = os.path.join(self.tmp.name, "xcubeprep.ini")
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_read(self) -> None:
        config = RunConfig.from_file(self.write(EXAMPLE))
        self.assertEqual(config.spec, LatticeSpec(4, 2, 2))
        self.assertIs(config.strategy, Strategy.CZ12)
        self.assertEqual(config.seed, 7)
        self.assertTrue(config.pauli_frame)
        self.assertEqual(config.sweep, ["X", "Z"])
        self.assertEqual(
            config.events,
            [ErrorEvent(((0, 0, 0), "x"), "X"), ErrorEvent((1, 1, 0), "Z", "pre")],
        )
        self.assertEqual(config.to_dict()["inject"], ["X:0,0,0,x:post", "Z:1,1,0:pre"])

    def test_errors(self) -> None:
        for text, key in (
            ("[xcubeprep]\ncolour = red\n", "colour"),
            ("[xcubeprep]\nlx = two\n", "lx"),
            ("[xcubeprep]\nvalidate = maybe\n", "validate"),
            ("[xcubeprep]\ninject = X:0,0,0\n", "inject"),
            ("[xcubeprep]\nstrategy = greedy\n", "strategy"),
            ("[other]\nlx = 2\n", None),
            ("lx = 2\n", None),
        ):
            with self.subTest(text=text):
                with self.assertRaises(InvalidConfigError) as cm:
                    RunConfig.from_file(self.write(text))
                self.assertEqual(cm.exception.key, key)

    def test_missing_file(self) -> None:
        with self.assertRaises(InvalidConfigError):
            RunConfig.from_file(os.path.join(self.tmp.name, "absent.ini"))

    def test_flags_override_file(self) -> None:
        config = RunConfig.from_file(self.write(EXAMPLE))
        namespace = argparse.Namespace(
            lx=6,
            ly=None,
            strategy=None,
            seed=9,
            inject=["Y:0,1,0,z:post"],
            verbosity=None,
        )
        merged = config.overlay(namespace)
        self.assertEqual(merged.spec, LatticeSpec(6, 2, 2))
        self.assertIs(merged.strategy, Strategy.CZ12)
        self.assertEqual(merged.seed, 9)
        self.assertEqual(merged.events, [ErrorEvent(((0, 1, 0), "z"), "Y")])
        self.assertEqual(merged.verbosity, 0)
        # the original is untouched
        self.assertEqual(config.seed, 7)


if __name__ == "__main__":
    unittest.main()

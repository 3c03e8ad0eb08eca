"""
=============
Configuration
=============

Run settings shared by every command. A config file is an INI file with a
single ``[xcubeprep]`` section whose keys mirror the long flags::

    [xcubeprep]
    lx = 2
    ly = 2
    lz = 2
    boundary = periodic
    strategy = cz12
    seed = 7
    inject = X:0,0,0,x:post Z:1,1,0:pre
    pauli_frame = no

Flags given on the command line override file values.

"""

import argparse
import configparser
import logging
import os
from collections.abc import Sequence
from typing import Any, Optional, Union

from xcubeprep.errors import InvalidConfigError, InvalidLatticeError, XCubePrepError
from xcubeprep.lattice import Boundary, LatticeSpec
from xcubeprep.records import ErrorEvent
from xcubeprep.scheduler import CircuitForm, Strategy

logger = logging.getLogger(__name__)

SECTION = "xcubeprep"

_INT_KEYS = ("lx", "ly", "lz", "seed", "verbosity", "workers")
_BOOL_KEYS = ("validate", "pauli_frame")
_KEYS = (
    *_INT_KEYS,
    *_BOOL_KEYS,
    "boundary",
    "strategy",
    "form",
    "inject",
    "out",
    "sweep",
    "targets",
)
_TARGETS = {"all": ("code", "ancilla"), "code": ("code",), "ancilla": ("ancilla",)}


class RunConfig:
    """Settings for one command.

    :ivar lx: Cubes along x
    :ivar ly: Cubes along y
    :ivar lz: Cubes along z; None means 1 on the one-storey lattice and 2
      otherwise
    :ivar boundary: The :py:class:`xcubeprep.lattice.Boundary`
    :ivar strategy: The :py:class:`xcubeprep.scheduler.Strategy`
    :ivar seed: Seed of the measurement randomness
    :ivar form: The :py:class:`xcubeprep.scheduler.CircuitForm` to emit
    :ivar events: Injected :py:class:`xcubeprep.records.ErrorEvent` list
    :ivar out: Output path, or None for standard output
    :ivar validate: Re-parse and re-simulate emitted circuits
    :ivar pauli_frame: Track the correction classically
    :ivar workers: Processes used by sweeps
    :ivar sweep: Pauli types swept by ``sweep-errors``
    :ivar targets: Qubits swept: ``all``, ``code`` or ``ancilla``
    :ivar verbosity: 0 (warnings), 1 (info) or 2 (debug)

    """

    # pylint: disable=too-many-instance-attributes,too-many-arguments,too-many-locals

    def __init__(
        self,
        lx: int = 2,
        ly: int = 2,
        lz: Optional[int] = None,
        boundary: Union[Boundary, str] = Boundary.PERIODIC_3D,
        strategy: Union[Strategy, str] = Strategy.MOVEMENT,
        seed: int = 0,
        *,
        form: Union[CircuitForm, str] = CircuitForm.CZ,
        events: Sequence[ErrorEvent] = (),
        out: Optional[str] = None,
        validate: bool = False,
        pauli_frame: bool = False,
        workers: int = 1,
        sweep: Optional[Sequence[str]] = None,
        targets: str = "all",
        verbosity: int = 0,
    ) -> None:
        self.lx = lx
        self.ly = ly
        self.lz = lz
        self.boundary = _enum(Boundary, boundary, "boundary")
        self.strategy = _enum(Strategy, strategy, "strategy")
        self.seed = seed
        self.form = _enum(CircuitForm, form, "form")
        self.events = list(events)
        self.out = out
        self.validate = validate
        self.pauli_frame = pauli_frame
        if workers < 1:
            raise InvalidConfigError(f"workers must be at least 1, got {workers}", "workers")
        self.workers = workers
        if sweep is None:
            sweep = ["X", "Y", "Z"]
        sweep = [p.upper() for p in sweep]
        for pauli in sweep:
            if pauli not in ("X", "Y", "Z"):
                raise InvalidConfigError(f"cannot sweep Pauli {pauli!r}", "sweep")
        self.sweep = sweep
        if targets not in _TARGETS:
            raise InvalidConfigError(
                f"bad targets {targets!r}; expected one of {', '.join(_TARGETS)}",
                "targets",
            )
        self.targets = targets
        self.verbosity = verbosity

    @property
    def resolved_lz(self) -> int:
        """``lz`` with the boundary's default filled in."""
        if self.lz is not None:
            return self.lz
        return 1 if self.boundary is Boundary.ONE_STOREY_OPEN else 2

    @property
    def spec(self) -> LatticeSpec:
        """The lattice these settings describe.

        :raises InvalidConfigError: if the dimensions are not valid.
        """
        try:
            return LatticeSpec(self.lx, self.ly, self.resolved_lz, self.boundary)
        except InvalidLatticeError as ex:
            raise InvalidConfigError(str(ex), ex.field) from ex

    @classmethod
    def from_file(cls, path: Union[str, os.PathLike]) -> "RunConfig":
        """Read settings from an INI file.

        :raises InvalidConfigError: if the file is missing, unreadable or
          holds an unknown key or a malformed value.
        """
        parser = configparser.ConfigParser()
        try:
            with open(path, encoding="utf-8") as f:
                parser.read_file(f)
        except (OSError, configparser.Error) as ex:
            raise InvalidConfigError(f"cannot read config file {path}: {ex}") from ex
        if not parser.has_section(SECTION):
            raise InvalidConfigError(f"config file {path} has no [{SECTION}] section")
        section = parser[SECTION]
        values: dict[str, Any] = {}
        for key in section:
            if key not in _KEYS:
                raise InvalidConfigError(f"unknown config key {key!r}", key)
            try:
                if key in _INT_KEYS:
                    values[key] = section.getint(key)
                elif key in _BOOL_KEYS:
                    values[key] = section.getboolean(key)
                else:
                    values[key] = section[key]
            except ValueError as ex:
                raise InvalidConfigError(f"bad value for {key}: {ex}", key) from ex
        logger.debug("read %d settings from %s", len(values), path)
        return cls(**_normalize(values))

    def overlay(self, namespace: argparse.Namespace) -> "RunConfig":
        """A copy with every flag that was explicitly given applied on top.

        Flags left at None (the parser default for every overridable flag)
        keep the current value.
        """
        values = {key: getattr(self, key) for key in _KEYS if hasattr(self, key)}
        values["events"] = self.events
        for key in _KEYS:
            value = getattr(namespace, key, None)
            if value is not None:
                values[key] = value
        return RunConfig(**_normalize(values))

    def to_dict(self) -> dict[str, Any]:
        """The settings as flag-named builtins."""
        return {
            "lx": self.lx,
            "ly": self.ly,
            "lz": self.resolved_lz,
            "boundary": self.boundary.value,
            "strategy": self.strategy.value,
            "seed": self.seed,
            "form": self.form.value,
            "inject": [e.to_text() for e in self.events],
            "out": self.out,
            "validate": self.validate,
            "pauli_frame": self.pauli_frame,
            "workers": self.workers,
            "sweep": list(self.sweep),
            "targets": self.targets,
            "verbosity": self.verbosity,
        }

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items())
        return f"{self.__module__}.{self.__class__.__name__}({args})"


def _enum(cls: Any, value: Any, key: str) -> Any:
    try:
        return cls(value)
    except ValueError as ex:
        choices = ", ".join(member.value for member in cls)
        raise InvalidConfigError(
            f"bad {key} {value!r}; expected one of {choices}",
            key,
        ) from ex


def _normalize(values: dict[str, Any]) -> dict[str, Any]:
    """Turn file and flag spellings into constructor arguments."""
    values = dict(values)
    inject = values.pop("inject", None)
    if inject is not None:
        items = inject.split() if isinstance(inject, str) else list(inject)
        try:
            values["events"] = [ErrorEvent.parse(item) for item in items]
        except XCubePrepError as ex:
            raise InvalidConfigError(str(ex), "inject") from ex
    sweep = values.get("sweep")
    if isinstance(sweep, str):
        values["sweep"] = [p for p in sweep.replace(",", " ").split() if p]
    return values


def target_kinds(targets: str) -> tuple[str, ...]:
    """The qubit kinds a ``targets`` setting selects."""
    return _TARGETS[targets]

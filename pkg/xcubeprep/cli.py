"""
======================
Command-line interface
======================

::

    xcubeprep prepare --lx 2 --ly 2 --lz 2 --periodic --seed 7 --out run.json
    xcubeprep sweep-errors --lx 2 --ly 2 --lz 2 --sweep X --targets code
    xcubeprep emit --lx 3 --ly 3 --one-storey --strategy cz12 --validate

``prepare`` writes a run report and exits 0 only when the final state is
the X-cube ground state. ``sweep-errors`` writes one JSON line per
injected error followed by a summary line. ``emit`` writes the circuit in
the text format and prints a JSON summary.

Usage and validation errors exit 2; protocol failures (an inconsistent
record, a state that is not the ground state, a validation mismatch)
exit 1.

"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from typing import IO, Any, Optional

import numpy as np

import xcubeprep
from xcubeprep import circuit as circuits
from xcubeprep import faults
from xcubeprep.circuit import Circuit
from xcubeprep.config import RunConfig, target_kinds
from xcubeprep.errors import (
    InconsistentRecordError,
    InvalidConfigError,
    XCubePrepError,
)
from xcubeprep.lattice import Lattice
from xcubeprep.models import StabilizerReport
from xcubeprep.protocol import apply_correction, run_protocol, solve_correction, verify_xcube
from xcubeprep.records import MeasurementRecord
from xcubeprep.scheduler import build_schedule, emit_circuit, validate_schedule

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def _dump(document: Any) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _write(text: str, out: Optional[str], stdout: IO[str]) -> None:
    if out is None:
        stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as f:
        f.write(text)


# -- commands -------------------------------------------------------------


def cmd_prepare(config: RunConfig, stdout: IO[str]) -> int:
    """Run the pipeline and write the run report.

    :raises InconsistentRecordError: after the report is written, when the
      measurement record admits no correction.
    """
    lattice = Lattice(config.spec)
    report = run_protocol(
        lattice,
        config.strategy,
        config.seed,
        config.events,
        config.pauli_frame,
    )
    logger.info("stage timing: %s", report.timing)
    _write(_dump(report.to_document(include_timing=False)), config.out, stdout)
    if report.correction is None:
        raise InconsistentRecordError(
            "measurement record admits no correction "
            f"(violated dual layers: {list(report.violated_layers)})",
            report.violated_layers,
        )
    if not report.all_plus:
        print(
            f"error: not the X-cube ground state; failing cubes "
            f"{report.stabilizers.failing_cubes}, failing stars "
            f"{report.stabilizers.failing_stars}",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    return EXIT_OK


def cmd_sweep_errors(config: RunConfig, stdout: IO[str], *, scripted: bool) -> int:
    """Inject every single error (or the given script) and decode each."""
    lattice = Lattice(config.spec)
    if scripted:
        events = config.events
    else:
        events = faults.single_error_events(
            lattice,
            config.sweep,
            target_kinds(config.targets),
        )
    lines, summary = faults.sweep_single_errors(
        lattice,
        events,
        strategy=config.strategy,
        master_seed=config.seed,
        workers=config.workers,
    )
    text = "".join(json.dumps(line.to_dict(), sort_keys=True) + "\n" for line in lines)
    document = summary.to_dict()
    document["all_handled"] = summary.all_handled
    text += json.dumps({"summary": document}, sort_keys=True) + "\n"
    _write(text, config.out, stdout)
    return EXIT_OK


def circuit_report(circuit: Circuit, lattice: Lattice, seed: int) -> StabilizerReport:
    """Simulate an emitted circuit, correct it and verify the code qubits.

    Record slot ``k`` holds the outcome of ancilla ``k``.
    """
    result = circuit.run(np.random.default_rng(seed))
    record = MeasurementRecord.from_values(
        lattice,
        [result.outcomes[k] for k in range(lattice.ancilla_count)],
        seed,
    )
    tableau = result.tableau
    apply_correction(tableau, solve_correction(lattice, record), lattice)
    return verify_xcube(tableau, lattice)


def cmd_emit(config: RunConfig, stdout: IO[str]) -> int:
    """Write the preparation circuit and print a JSON summary."""
    lattice = Lattice(config.spec)
    schedule = validate_schedule(build_schedule(lattice, config.strategy), lattice)
    circuit = emit_circuit(schedule, config.form)
    s = config.spec
    header = (
        f"xcubeprep {xcubeprep.__version__}",
        f"lattice {s.lx}x{s.ly}x{s.lz} {s.boundary.value}",
        f"strategy {schedule.strategy.value}, form {config.form.value}",
    )
    text = circuit.to_text(header)
    out = config.out or f"xcube-{config.form.value}.circ"
    _write(text, out, stdout)

    document: dict[str, Any] = {
        "schema_version": schedule.to_dict()["schema_version"],
        "path": out,
        "strategy": schedule.strategy.value,
        "form": config.form.value,
        "depth": schedule.depth,
        "timesteps": circuit.depth,
        "num_qubits": circuit.num_qubits,
        "operations": {kind.value: circuit.count(kind) for kind in _gate_kinds(circuit)},
    }
    status = EXIT_OK
    if config.validate:
        parsed = circuits.load(out)
        original = circuit_report(circuit, lattice, config.seed)
        reparsed = circuit_report(parsed, lattice, config.seed)
        valid = parsed == circuit and original == reparsed and original.all_plus
        document["validated"] = valid
        if not valid:
            print("error: re-parsed circuit does not reproduce the report", file=sys.stderr)
            status = EXIT_FAILURE
    stdout.write(_dump(document))
    return status


def _gate_kinds(circuit: Circuit) -> list:
    kinds = {op.kind for op in circuit.ops()}
    return sorted(kinds, key=lambda kind: kind.value)


# -- argument parsing -----------------------------------------------------


def _common_arguments() -> argparse.ArgumentParser:
    # every overridable flag defaults to None so a config file can fill it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with an [xcubeprep] section")
    common.add_argument("--lx", type=int, help="cubes along x")
    common.add_argument("--ly", type=int, help="cubes along y")
    common.add_argument("--lz", type=int, help="cubes along z")
    boundary = common.add_mutually_exclusive_group()
    boundary.add_argument(
        "--periodic",
        dest="boundary",
        action="store_const",
        const="periodic",
        help="periodic in all three directions (default)",
    )
    boundary.add_argument(
        "--one-storey",
        dest="boundary",
        action="store_const",
        const="one-storey",
        help="a single open layer of cubes",
    )
    common.add_argument("--strategy", choices=("movement", "cz12"))
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument(
        "-v",
        "--verbose",
        dest="verbosity",
        action="count",
        help="log INFO, or DEBUG when repeated",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """The ``xcubeprep`` argument parser."""
    common = _common_arguments()
    parser = argparse.ArgumentParser(
        prog="xcubeprep",
        description="Prepare and probe X-cube ground states from cluster states.",
    )
    parser.add_argument("--version", action="version", version=xcubeprep.__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    prepare = commands.add_parser("prepare", parents=[common], help="run the pipeline")
    prepare.add_argument(
        "--inject",
        action="append",
        metavar="PAULI:TARGET:STAGE",
        help="inject an error, e.g. X:0,0,0,x:post or Z:1,0,0:pre (repeatable)",
    )
    prepare.add_argument(
        "--pauli-frame",
        dest="pauli_frame",
        action="store_true",
        default=None,
        help="track the correction classically instead of applying it",
    )

    sweep = commands.add_parser(
        "sweep-errors",
        parents=[common],
        help="inject and decode every single error",
    )
    sweep.add_argument(
        "--inject",
        action="append",
        metavar="PAULI:TARGET:STAGE",
        help="sweep only these errors (repeatable)",
    )
    sweep.add_argument(
        "--sweep",
        action="append",
        choices=("X", "Y", "Z"),
        help="Pauli types to sweep (repeatable; default all)",
    )
    sweep.add_argument("--targets", choices=("all", "code", "ancilla"))
    sweep.add_argument("--workers", type=int)

    emit = commands.add_parser("emit", parents=[common], help="write the circuit")
    emit.add_argument("--form", choices=("cz", "dynamic-cnot"))
    emit.add_argument(
        "--validate",
        action="store_true",
        default=None,
        help="re-parse and re-simulate the written circuit",
    )
    return parser


def configure_logging(verbosity: int) -> None:
    """Send log records to standard error at the requested level."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format=_LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[IO[str]] = None) -> int:
    """Entry point; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    stdout = stdout if stdout is not None else sys.stdout
    try:
        config = RunConfig.from_file(args.config) if args.config else RunConfig()
        config = config.overlay(args)
        configure_logging(config.verbosity)
        logger.debug("running %s with %r", args.command, config)
        if args.command == "prepare":
            return cmd_prepare(config, stdout)
        if args.command == "sweep-errors":
            return cmd_sweep_errors(config, stdout, scripted=args.inject is not None)
        return cmd_emit(config, stdout)
    except InvalidConfigError as ex:
        parser.print_usage(sys.stderr)
        print(f"xcubeprep: error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except InconsistentRecordError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_FAILURE
    except XCubePrepError as ex:
        print(f"xcubeprep: error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as ex:
        print(f"xcubeprep: error: {ex}", file=sys.stderr)
        return EXIT_FAILURE

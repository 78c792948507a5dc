#!/usr/bin/env python3
"""
lopsim Runner
=============
Post-selected photonic gates on MZI meshes. One command per invocation:

  verify     published CZ / CNOT / CCZ / Toffoli settings, end to end
  solve      multi-start search over the permanent conditions
  simulate   push a state through a network file
  cascade    chain CZ or CCZ blocks on a larger register
  export     write a gate network as JSON or as its matrix
  calibrate  phase settings for a four-phase-shifter MZI

Exit codes: 0 ok, 1 usage, 2 a check failed, 3 the solver found nothing.
"""

import argparse
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from config import (DEFAULT_SEED, DEFAULT_STARTS, DEFAULT_TRIALS, EXIT_CODES, GATES,
                    PHOTON_CAP, PROBLEMS, SCHEMES)
from errors import LopsimError, UsageError
from models import RunConfig
import report_store
from pipeline import calibrate, cascade, export, simulate, solve, verify

STEPS = {
    "verify": verify,
    "solve": solve,
    "simulate": simulate,
    "cascade": cascade,
    "export": export,
    "calibrate": calibrate,
}

# (default format, allowed formats) per command
FORMATS = {
    "verify": ("json", ("json",)),
    "solve": ("json", ("json",)),
    "simulate": ("csv", ("csv", "json")),
    "cascade": ("json", ("json", "csv")),
    "export": ("json", ("json", "matrix_csv")),
    "calibrate": ("json", ("json",)),
}


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors raise instead of exiting with argparse's code 2."""

    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected integers, got {!r}".format(text))


def build_parser():
    parser = ArgumentParser(prog="runner.py", description="lopsim: post-selected photonic gates")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=ArgumentParser)

    common = ArgumentParser(add_help=False)
    common.add_argument("--gate", choices=GATES)
    common.add_argument("--scheme", choices=SCHEMES, default="clements")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=None,
                        help="Override the command's check tolerance")
    common.add_argument("--photon-cap", type=int, default=PHOTON_CAP)
    common.add_argument("--out", default=None, help="Report path (default output/<command>.<ext>)")
    common.add_argument("--format", default=None)
    common.add_argument("--deterministic", action="store_true",
                        help="Omit timestamps so repeated runs are byte-identical")

    p = sub.add_parser("verify", parents=[common], help="Verify published gate settings")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--refine", action="store_true",
                   help="Refine the printed settings to ‖r‖ < 1e-10 first")

    p = sub.add_parser("solve", parents=[common], help="Solve the permanent conditions")
    p.add_argument("--problem", choices=PROBLEMS, default=None)
    p.add_argument("--k", type=int, default=1, help="Auxiliary photons per auxiliary rail")
    p.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed-file", default=None)
    p.add_argument("--ascend", action="store_true", help="Climb |A| along the solution set")
    p.add_argument("--free-phases", action="store_true", help="Let every MZI carry a phase")

    p = sub.add_parser("simulate", parents=[common], help="Simulate a network file")
    p.add_argument("--network", required=True)
    p.add_argument("--occupations", type=_int_list, default=None)
    p.add_argument("--register", default=None,
                   help="Bits ('01') or amplitude pairs ('1,0;0.6,0.8j')")
    p.add_argument("--aux-photons", type=int, default=1)
    p.add_argument("--postselect", action="store_true")

    p = sub.add_parser("cascade", parents=[common], help="Chain CZ or CCZ blocks")
    p.add_argument("--placement", type=_int_list, default=None,
                   help="First qubit of each block, e.g. '0,2'")

    p = sub.add_parser("export", parents=[common], help="Export a gate network")
    p.add_argument("--refine", action="store_true")

    p = sub.add_parser("calibrate", parents=[common], help="Phase settings for a hardware MZI")
    p.add_argument("--target-t", type=float, required=True)
    p.add_argument("--theta1-0", type=float, default=0.0)
    p.add_argument("--theta2-0", type=float, default=0.0)
    p.add_argument("--arm", choices=("upper", "lower"), default="upper")
    return parser


def parse_config(argv):
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("no command given (one of {})".format(", ".join(STEPS)))
    known = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in known})

    if cfg.command in ("verify", "cascade", "export") and cfg.gate is None:
        raise UsageError("{} needs --gate".format(cfg.command))
    if cfg.command == "solve" and cfg.problem is None:
        if cfg.gate in ("cz", "ccz"):
            cfg.problem = cfg.gate
        else:
            raise UsageError("solve needs --problem (or --gate cz / ccz)")
    if cfg.trials < 1:
        raise UsageError("--trials must be at least 1")
    if cfg.starts < 1:
        raise UsageError("--starts must be at least 1")
    if cfg.k < 1 or cfg.aux_photons < 1:
        raise UsageError("auxiliary photon counts must be at least 1")
    if cfg.photon_cap < 1:
        raise UsageError("--photon-cap must be at least 1")

    default, allowed = FORMATS[cfg.command]
    cfg.format = cfg.format or default
    if cfg.format not in allowed:
        raise UsageError("{} writes {}, not {!r}".format(cfg.command, " or ".join(allowed), cfg.format))
    return cfg


def output_path(cfg):
    if cfg.out:
        return Path(cfg.out)
    ext = "csv" if cfg.format in ("csv", "matrix_csv") else "json"
    return Path("output") / "{}.{}".format(cfg.command, ext)


def write_output(cfg, payload, report):
    path = output_path(cfg)
    if cfg.format == "matrix_csv":
        return report_store.write_csv(path, None, payload["rows"])
    if cfg.format == "csv":
        rows = payload.get("csv_rows", payload.get("rows"))
        return report_store.write_csv(path, payload["header"], rows)
    if cfg.command == "export":
        # a bare network file, loadable by simulate --network
        return report_store.write_json(path, payload)

    document = {
        "command": cfg.command,
        "status": report.status,
        "config": cfg.to_dict(),
        "result": payload,
        "checks": {"run": report.checks_run, "passed": report.checks_passed,
                   "failed": report.checks_failed, "notes": report.notes},
    }
    if not cfg.deterministic:
        document["timestamp"] = datetime.now(timezone.utc).isoformat()
    return report_store.write_json(path, document)


def main(argv=None):
    try:
        cfg = parse_config(argv)
    except LopsimError as e:
        print("ERROR: {}".format(e), file=sys.stderr)
        return EXIT_CODES["usage"]

    start_time = time.time()
    print("=" * 70)
    print("LOPSIM {}".format(cfg.command.upper()))
    print("=" * 70)

    try:
        payload, report = STEPS[cfg.command].run(cfg)
        path = write_output(cfg, payload, report)
        report_store.record_run(path, cfg.command, report.status, report.summary(),
                                cfg.deterministic)
    except LopsimError as e:
        print("ERROR: {}".format(e), file=sys.stderr)
        return EXIT_CODES["usage"]

    print("\nReport: {}".format(path))
    print("\n" + "=" * 70)
    print("RUN REPORT")
    print("=" * 70)
    print("  " + report.summary())
    if not cfg.deterministic:
        print("  Total runtime: {}s".format(int(time.time() - start_time)))
    print("=" * 70)
    return EXIT_CODES.get(report.status, EXIT_CODES["check_failed"])


if __name__ == "__main__":
    sys.exit(main())

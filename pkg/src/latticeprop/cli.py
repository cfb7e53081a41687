"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys

from . import __version__, helmholtz, kernel, scenario, specfun, verify
from .errors import ConfigError, LatticePropError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_COMPUTE = 3


def _fmt_complex(z):
    # adding 0.0 folds a negative zero into "0"
    return f"{z.real + 0.0:.15g} {z.imag + 0.0:.15g}"


def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (run) or JSON report path (verify)")
    common.add_argument("--threads", type=int, default=1, help="worker threads, 0 = one per CPU")
    common.add_argument("--seed", type=int, default=verify.DEFAULT_SEED, help="seed for randomised checks")
    common.add_argument("--tol-scale", type=float, default=1.0, help="multiply every verify tolerance")
    return common


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="latticeprop",
        description="Exact lattice propagators, shutter and edge diffraction.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="evaluate a scenario file and write CSV/PGM")
    run.add_argument("scenario", help="path to a scenario JSON file, or the name of a bundled one")

    sub.add_parser("scenarios", parents=[common], help="list bundled scenarios")

    ver = sub.add_parser("verify", parents=[common], help="run the identity suite")
    ver.add_argument("suite", nargs="?", default="all", choices=("all", *verify.SUITES))
    ver.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    ker = sub.add_parser("kernel", parents=[common], help="evaluate one kernel value")
    ker.add_argument("--n", type=int, required=True, help="target site")
    ker.add_argument("--m", type=int, required=True, help="source site")
    ker.add_argument("--t", type=float, help="time for the lattice Schrodinger kernel")
    ker.add_argument("--z", type=float, help="distance for the discrete Helmholtz kernel")
    ker.add_argument("--E", type=float, help="band parameter for the discrete Helmholtz kernel")

    hel = sub.add_parser("helmholtz", parents=[common], help="evaluate the continuous edge kernel")
    hel.add_argument("--dx", type=float, required=True, help="transverse separation x - x'")
    hel.add_argument("--z", type=float, required=True, help="distance behind the screen")
    hel.add_argument("--E", type=float, required=True, help="squared wavenumber")
    hel.add_argument("--form", choices=("closed", "quadrature", "paraxial"), default="closed")
    return parser


def _resolve_scenario(name):
    if os.path.exists(name):
        return name
    if name in scenario.bundled_names():
        return scenario.bundled_path(name)
    raise ConfigError("no such file or bundled scenario", name)


def _cmd_run(args):
    path = _resolve_scenario(args.scenario)
    grid, written = scenario.run_scenario(path, args.out, args.threads)
    for item in written:
        print(item)
    return EXIT_OK


def _cmd_verify(args):
    guard = specfun.inject_series_fault(1) if args.inject_fault else contextlib.nullcontext()
    with guard:
        report = verify.run_suite(args.suite, seed=args.seed, tol_scale=args.tol_scale)
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{status} {c['check_id']:<42} residual={c['residual']:.3e} tol={c['tolerance']:.1e}")
    print(f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks passed (seed {report['seed']})")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def _cmd_kernel(args, parser):
    lattice = args.t is not None
    helm = args.z is not None or args.E is not None
    if lattice == helm:
        parser.error("kernel needs either --t, or both --z and --E")
    if lattice:
        value = kernel.k1d(args.n, args.m, args.t)
    else:
        if args.z is None or args.E is None:
            parser.error("the Helmholtz kernel needs both --z and --E")
        value = helmholtz.discrete_kernel_quadrature(args.n - args.m, args.z, args.E)
    print(_fmt_complex(value))
    return EXIT_OK


def _cmd_helmholtz(args):
    func = {
        "closed": helmholtz.continuous_kernel_closed,
        "quadrature": helmholtz.continuous_kernel_quadrature,
        "paraxial": helmholtz.paraxial_kernel,
    }[args.form]
    print(_fmt_complex(func(args.dx, args.z, args.E)))
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "scenarios":
            for name in scenario.bundled_names():
                print(name)
            return EXIT_OK
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "kernel":
            return _cmd_kernel(args, parser)
        return _cmd_helmholtz(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LatticePropError, ArithmeticError) as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())

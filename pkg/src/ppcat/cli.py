"""Command line entry point: ``ppcat {coeffs,wigner,sweep,verify}``.

Exit status: 0 success, 1 invalid input, 2 numerical-consistency failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import verify as vf
from .errors import NumericalError, ValidationError
from .propagator import CouplingConfig, commutator_defects, propagator_coeffs
from .scenario import METHODS, OUTPUT_KINDS, SWEEP_PARAMS, Scenario, load_config, run_scenario, run_sweep

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _add_coupling(p):
    p.add_argument("--zeta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--phi2", type=float)


def _add_scenario(p):
    p.add_argument("--config", help="TOML file with scenario keys; flags override it")
    p.add_argument("--case", help="input case I..IX")
    p.add_argument("--state1", choices=("vacuum", "coherent", "cat"), help="custom mode-1 state (no --case)")
    p.add_argument("--state3", choices=("vacuum", "coherent", "cat"), help="custom mode-3 state (no --case)")
    p.add_argument("--alpha1", help="mode-1 amplitude, e.g. sqrt12@pi/3 or 1+2i")
    p.add_argument("--alpha3", help="mode-3 amplitude")
    _add_coupling(p)
    p.add_argument("--mode", choices=("mode1", "mode3", "both"))
    p.add_argument("--grid", nargs=2, type=int, metavar=("NX", "NY"))
    p.add_argument("--range", nargs=4, type=float, metavar=("XMIN", "XMAX", "PMIN", "PMAX"))
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--beta-extent", type=float, dest="beta_extent")
    p.add_argument("--cutoff", nargs=2, type=int, metavar=("N1", "N3"), dest="cutoffs",
                   help="starting Fock cutoffs (fock method grows them until converged)")
    p.add_argument("--outputs", nargs="+", choices=OUTPUT_KINDS)
    p.add_argument("--name", help="file stem for outputs")
    p.add_argument("--force", action="store_true", default=None, help="allow fock runs above the amplitude bound")
    p.add_argument("--out", default=".", help="output directory")


_SCENARIO_KEYS = (
    "case", "state1", "state3", "alpha1", "alpha3", "zeta", "gamma", "phi2", "mode",
    "grid", "range", "method", "beta_extent", "cutoffs", "outputs", "name", "force",
)


def scenario_from_args(args) -> Scenario:
    data = load_config(args.config) if args.config else {}
    for key in _SCENARIO_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            data[key] = v
    if "case" not in data and ("state1" in data or "state3" in data):
        data["case"] = None
    return Scenario.from_mapping(data)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ppcat", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coeffs", help="print the eight propagator coefficients and four defects")
    _add_coupling(p)
    p.add_argument("--json", action="store_true")

    _add_scenario(sub.add_parser("wigner", help="compute reduced Wigner fields and write outputs"))

    p = sub.add_parser("sweep", help="one metrics row per value of zeta or gamma")
    _add_scenario(p)
    p.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    p.add_argument("--values", nargs="+", type=float, required=True)

    p = sub.add_parser("verify", help="run the self-check suites")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--fast", dest="level", action="store_const", const="fast")
    g.add_argument("--full", dest="level", action="store_const", const="full")
    p.add_argument("--out", help="also write the JSON report to this file")
    return ap


def _cmd_coeffs(args):
    c = CouplingConfig(args.zeta or 0.0, 0.0 if args.gamma is None else args.gamma, args.phi2 or 0.0)
    p = propagator_coeffs(c)
    d = commutator_defects(p)
    if args.json:
        rec = {k: [v.real, v.imag] for k, v in zip(("k1", "k2", "k3", "k4", "m1", "m2", "m3", "m4"), p.as_array())}
        rec["defects"] = dict(zip(("d11", "d33", "d13", "e13"), d))
        print(json.dumps(rec, indent=2))
    else:
        for name, v in zip(("k1", "k2", "k3", "k4", "m1", "m2", "m3", "m4"), p.as_array()):
            print(f"{name} = {v.real:+.15e} {v.imag:+.15e}i")
        for name, v in zip(("d11", "d33", "d13", "e13"), d):
            print(f"{name} = {v:.3e}")
    return EXIT_OK


def _cmd_wigner(args):
    rec = run_scenario(scenario_from_args(args), args.out)
    print(json.dumps(rec, indent=2))
    return EXIT_OK


def _cmd_sweep(args):
    rows = run_sweep(scenario_from_args(args), args.param, args.values, args.out)
    print(json.dumps(rows, indent=2))
    return EXIT_OK


def _cmd_verify(args):
    report = vf.verify(args.level or "fast")
    text = vf.dumps(report)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return EXIT_OK if report["passed"] else EXIT_NUMERICAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"coeffs": _cmd_coeffs, "wigner": _cmd_wigner, "sweep": _cmd_sweep, "verify": _cmd_verify}
    try:
        return handler[args.command](args)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

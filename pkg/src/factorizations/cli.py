"""Command-line harness: ``generate``, ``verify`` and ``classify``.

Exit codes: 0 success, 2 invalid input or capacity, 3 a law failed or two
routes disagreed numerically (the law is named on stderr and in the report).
"""

import argparse
import json
import sys
import time

import numpy as np

from . import __version__, _kernels
from .errors import (CapacityError, ContractViolation, FactorizationError,
                     NumericalInconsistency, UnitCertificationError)
from .fock import classify_to_fock
from .matcore import DEFAULT_TOL, matrix_to_json
from .suites import (SUITE_FUNCS, SUITES, UNIT_MODES, Context, Instance, generate_instance,
                     standard_instances)

EXIT_OK, EXIT_INPUT, EXIT_LAW = 0, 2, 3


class InputError(Exception):
    pass


def _parse_sites(text):
    try:
        dims = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise InputError(f"bad --sites value {text!r}") from None
    if not dims:
        raise InputError("--sites is empty")
    return dims


def _round(v):
    return float(f"{float(v):.3e}")


def _emit(obj, out):
    text = json.dumps(obj, sort_keys=True, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _load_instance(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read instance {path!r}: {exc}") from None
    return Instance.from_json(obj)


def _versions():
    return {"factorizations": __version__, "numpy": np.__version__,
            "backend": "numba" if _kernels.USE_NUMBA else "numpy"}


def cmd_generate(args):
    sites = _parse_sites(args.sites)
    mode = "discover" if args.withhold_unit else args.unit
    inst = generate_instance(sites, seed=args.seed, unit_mode=mode,
                             conjugate_seed=args.conjugate_seed)
    _emit(inst.to_json(), args.out)
    return EXIT_OK


def run_suites(inst, names, factor=1.0):
    """Suites for one instance; returns ``(entry, failing_laws)``."""
    tol = DEFAULT_TOL.scaled(factor) if factor != 1.0 else DEFAULT_TOL
    ctx = Context(inst, tol) if inst is not None else None
    suites, failing = [], []
    for name in names:
        try:
            if ctx is None and name != "lemmas":
                raise InputError(f"suite {name!r} needs an instance")
            checks = SUITE_FUNCS[name](ctx, factor)
        except (NumericalInconsistency, UnitCertificationError) as exc:
            checks = [{"law": exc.law or name, "max_deviation": None, "tolerance": None,
                       "pass": False, "error": str(exc)}]
        for c in checks:
            if c["max_deviation"] is not None:
                c["max_deviation"] = _round(c["max_deviation"])
                c["tolerance"] = _round(c["tolerance"])
            if not c["pass"]:
                failing.append(f"{name}:{c['law']}")
        suites.append({"name": name, "checks": checks})
    entry = {"instance": inst.to_json() if inst is not None else None,
             "suites": sorted(suites, key=lambda s: s["name"])}
    return entry, failing


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    if args.tol <= 0:
        raise InputError("--tol must be positive")
    start = time.perf_counter()
    if args.standard:
        insts = standard_instances()
    elif args.instance:
        insts = [_load_instance(args.instance)]
    elif names == ("lemmas",):
        insts = [None]
    else:
        raise InputError("verify needs an instance path or --standard")
    entries, failing = [], []
    for inst in insts:
        entry, bad = run_suites(inst, names, args.tol)
        entries.append(entry)
        failing.extend(bad)
    report = {"instances": entries, "versions": _versions(),
              "wall_time": round(time.perf_counter() - start, 3)}
    _emit(report, args.out)
    if failing:
        sys.stderr.write("failing laws: " + ", ".join(failing) + "\n")
        return EXIT_LAW
    return EXIT_OK


def cmd_classify(args):
    inst = _load_instance(args.instance)
    tol = DEFAULT_TOL.scaled(args.tol) if args.tol != 1.0 else DEFAULT_TOL
    ctx = Context(inst, tol)
    discovered = inst.unit is None
    cls = classify_to_fock(ctx.u, ctx.r, tol, seed=inst.seed)
    report = {"legs": list(cls.fock.leg_dims), "masses": list(cls.fock.masses),
              "unit_discovered": discovered,
              "deviations": {k: _round(v) for k, v in sorted(cls.deviations.items())},
              "fock": cls.fock.to_json(), "instance": inst.to_json()}
    if args.unitary_out:
        _emit(matrix_to_json(cls.unitary), args.unitary_out)
    else:
        report["unitary"] = matrix_to_json(cls.unitary)
    _emit(report, args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="factorizations",
                                description="Finite Boolean algebras of type I factors.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance JSON")
    g.add_argument("--sites", required=True, help="comma-separated site dimensions, e.g. 2,3")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--unit", choices=[m for m in UNIT_MODES if m not in ("explicit", "discover")],
                   default="product")
    g.add_argument("--conjugate-seed", type=int, default=None,
                   help="scramble the factorization by a seeded global unitary")
    g.add_argument("--withhold-unit", action="store_true",
                   help="leave the unit out; it is discovered when needed")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("instance", nargs="?", default=None)
    v.add_argument("--standard", action="store_true", help="use the built-in instance set")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--tol", type=float, default=1.0, help="multiplier on every tolerance")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="classify an instance onto Fock form")
    c.add_argument("instance")
    c.add_argument("--tol", type=float, default=1.0)
    c.add_argument("--out", default=None)
    c.add_argument("--unitary-out", default=None)
    c.set_defaults(func=cmd_classify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CapacityError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (NumericalInconsistency, UnitCertificationError) as exc:
        sys.stderr.write(f"law failed: {exc.law}: {exc}\n")
        return EXIT_LAW
    except ContractViolation as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except FactorizationError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_LAW


if __name__ == "__main__":
    sys.exit(main())

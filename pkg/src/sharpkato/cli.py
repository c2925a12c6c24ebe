"""Command line entry point: ``sharpkato {kappa,jet,verify,fig,regularity,certificate}``.

Exit codes: 0 success, 1 a verification found a violation, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import kernels, reports, suites
from .config import DEFAULT_SEED
from .errors import DomainError, NoFeasibleN
from .gamma import find_certificate
from .jets import build_extremal_jet, kato_ratio, verify_p_harmonic
from .kato_core import kappa, kappa_oracle
from .regularity import CSV_HEADER, max_p_regular, verdict

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

DEFAULT_SAMPLES = {"kato_sampling": 100_000, "mixed_kcs": 100_000, "rayleigh": 20, "regions": 0}


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True, allow_nan=True))


def cmd_kappa(args) -> int:
    k = kappa(args.p, args.n)
    out = k.to_dict()
    if args.oracle:
        value, a_min = kappa_oracle(args.p, args.n)
        out.update(oracle=value, oracle_a=a_min, discrepancy=abs(value - k.value))
    _dump(out)
    return EXIT_OK


def cmd_jet(args) -> int:
    jet = build_extremal_jet(args.p, args.n)
    k = kappa(args.p, args.n).value
    ratio = kato_ratio(jet)
    out = jet.to_dict()
    out.update(p=args.p, residual=verify_p_harmonic(jet, args.p), ratio=ratio, kappa=k, gap=ratio - k)
    _dump(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    samples = DEFAULT_SAMPLES[args.suite] if args.samples is None else args.samples
    if samples < 0:
        raise DomainError("--samples must be nonnegative")
    if args.suite == "kato_sampling":
        configs = suites.KATO_CONFIGS
        if args.p is not None or args.n is not None or args.d is not None:
            if None in (args.p, args.n, args.d):
                raise DomainError("--p, --n and --d must be given together")
            configs = ((args.p, args.n, args.d),)
        result = suites.kato_sampling(samples, args.seed, configs, kappa_shift=args.kappa_shift)
    else:
        result = suites.SUITES[args.suite](samples=samples, seed=args.seed)
    result["backend"] = kernels.backend()
    result["seed"] = args.seed
    _dump(result)
    return EXIT_OK if result["passed"] else EXIT_VIOLATION


def cmd_fig(args) -> int:
    params = {}
    if args.name == "kappa_curve":
        params["n"] = args.n if args.n is not None else 3
    if args.steps is not None:
        params["steps"] = args.steps if args.name != "gamma_region" else (args.steps, args.steps)
    paths = reports.emit_figure(args.name, args.out, **params)
    for path in paths:
        print(path)
    return EXIT_OK


def cmd_regularity(args) -> int:
    if args.max_p:
        _dump({"n": args.n, "d": args.d, "max_p_regular": max_p_regular(args.n, args.d)})
        return EXIT_OK
    if args.p is None:
        raise DomainError("--p is required unless --max-p is given")
    v = verdict(args.p, args.n, args.d)
    if args.format == "csv":
        sys.stdout.write(reports.to_csv(CSV_HEADER, [v.csv_row()]))
    else:
        _dump(v.to_dict())
    return EXIT_OK


def cmd_certificate(args) -> int:
    cert = find_certificate(args.p)
    if cert is None:
        _dump({"p": args.p, "admissible": False})
        return EXIT_VIOLATION
    _dump(cert.to_dict())
    return EXIT_OK


def _finite(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpkato", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", choices=kernels.available_backends(), help="kernel backend override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kappa", help="Kato constant kappa(p, n)")
    p.add_argument("--p", type=_finite, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="also minimize f(a) numerically")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("jet", help="extremal p-harmonic jet")
    p.add_argument("--p", type=_finite, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_jet)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", choices=sorted(suites.SUITES), required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--p", type=_finite, default=None, help="kato_sampling only")
    p.add_argument("--n", type=int, default=None, help="kato_sampling only")
    p.add_argument("--d", type=int, default=None, help="kato_sampling only")
    p.add_argument("--kappa-shift", type=_finite, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fig", help="write figure data as CSV")
    p.add_argument("name", choices=reports.FIGURES)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=None, help="dimension for kappa_curve (default 3)")
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(func=cmd_fig)

    p = sub.add_parser("regularity", help="regularity verdict for (p, n, d)")
    p.add_argument("--p", type=_finite, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-p", action="store_true", help="largest p keeping both gates")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_regularity)

    p = sub.add_parser("certificate", help="admissible gamma for p in [2, 3)")
    p.add_argument("--p", type=_finite, required=True)
    p.set_defaults(func=cmd_certificate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.backend:
        kernels.use_backend(args.backend)
    try:
        return args.func(args)
    except (DomainError, NoFeasibleN, ValueError) as exc:
        print(f"sharpkato: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Batch front-end: sequence generation, metrics, Carleson tests, seminorms,
interpolation, and the theorem-level experiment harness.

Every run writes a JSON report (envelope: tool, version, subcommand, the fully
echoed config, result) and optionally a CSV of per-level classifier data.
Identical config and seed produce byte-identical JSON (pass --no-timestamp).

Exit codes: 0 success, 2 parameter or input rejection, 3 success with
non-convergence verdicts present, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .carleson import (ClassifierConfig, box_constant, bps_carleson_ratio,
                       kernel_constant, weights_from_sequence)
from .blaschke import BlaschkeProduct, inner_membership_test
from .earl import EarlError, InterpolationProblem, earl_interpolate
from .mobius import DiskDomainError
from .sequences import (DiskSequence, gen_bwy_candidate, gen_clustered,
                        gen_perturbed_radial, gen_radial, gen_stolz,
                        sequence_metrics)
from .spaces import (ParameterError, QuadratureConfig, SpaceParams, blaschke_fn,
                     bloch_seminorm, bps_norm, const_fn, fpps_seminorm,
                     hinf_norm, log_branch_fn, monomial_fn, multiplier_test,
                     power_series_fn, test_function)
from .verify import (check_prop22, check_theorem21, check_theorem32,
                     closure_test, log_tempered_test, validate_forelli_rudin,
                     validate_zhu_estimate)

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_INCONCLUSIVE = 3
EXIT_INTERNAL = 4

FAMILIES = ("radial", "clustered", "bwy", "stolz", "perturbed")


def _classifier_from(args) -> ClassifierConfig:
    return ClassifierConfig(slope_bounded=args.slope_bounded,
                            slope_divergent=args.slope_divergent)


def _quad_from(args) -> QuadratureConfig:
    return QuadratureConfig(boundary_levels=args.levels,
                            rel_tol=args.rel_tol,
                            zero_refinement_depth=args.refine_depth)


def _load_sequence(path: str) -> DiskSequence:
    p = Path(path)
    if not p.exists():
        raise ParameterError(f"input file does not exist: {path}")
    try:
        return DiskSequence.load(p)
    except (ValueError, KeyError, json.JSONDecodeError) as err:
        raise ParameterError(f"malformed sequence file {path}: {err}") from err


def _parse_fn(spec: str):
    """Analytic function specs: log | monomial:K | blaschke:PATH | const:C |
    series:c0,c1,... | testfn:re,im,p,s"""
    kind, _, rest = spec.partition(":")
    if kind == "log":
        return log_branch_fn()
    if kind == "monomial":
        return monomial_fn(int(rest))
    if kind == "const":
        return const_fn(complex(rest))
    if kind == "blaschke":
        return blaschke_fn(BlaschkeProduct(_load_sequence(rest).values))
    if kind == "series":
        return power_series_fn([complex(c) for c in rest.split(",")])
    if kind == "testfn":
        re_, im_, p_, s_ = (float(x) for x in rest.split(","))
        return test_function(complex(re_, im_), p_, s_)
    raise ParameterError(f"unknown function spec: {spec!r}")


def _has_inconclusive(obj) -> bool:
    if isinstance(obj, dict):
        for key, val in obj.items():
            if key in ("classification", "verdict") and val == "INCONCLUSIVE":
                return True
            if key in ("converged", "quadrature_converged", "converged_all") \
                    and val is False:
                return True
            if _has_inconclusive(val):
                return True
        return False
    if isinstance(obj, (list, tuple)):
        return any(_has_inconclusive(v) for v in obj)
    return False


def _collect_levels(obj, path="result", rows=None):
    if rows is None:
        rows = []
    if isinstance(obj, dict):
        lv = obj.get("levels")
        if isinstance(lv, list) and lv and all(
                isinstance(e, (list, tuple)) and len(e) == 2 for e in lv):
            for x, v in lv:
                rows.append((path, float(x), float(v)))
        for key, val in obj.items():
            if key != "levels":
                _collect_levels(val, f"{path}.{key}", rows)
    elif isinstance(obj, (list, tuple)):
        for i, val in enumerate(obj):
            _collect_levels(val, f"{path}[{i}]", rows)
    return rows


def _jsonable(obj):
    if hasattr(obj, "to_json_dict"):
        return _jsonable(obj.to_json_dict())
    if hasattr(obj, "to_json_obj"):
        return _jsonable(obj.to_json_obj())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _emit(args, subcommand: str, config: dict, result) -> int:
    envelope = {
        "tool": "diskinterp",
        "version": __version__,
        "subcommand": subcommand,
        "config": _jsonable(config),
        "result": _jsonable(result),
    }
    if not args.no_timestamp:
        envelope["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        rows = _collect_levels(envelope["result"])
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["series", "level", "value"])
            writer.writerows(rows)
    return EXIT_INCONCLUSIVE if _has_inconclusive(envelope["result"]) else EXIT_OK


def _add_common(sub):
    sub.add_argument("-o", "--output", help="JSON report path (stdout if omitted)")
    sub.add_argument("--csv", help="CSV path for per-level classifier data")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit the timestamp (deterministic output)")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--rel-tol", type=float, default=1e-3, dest="rel_tol")
    sub.add_argument("--levels", type=int, default=12,
                     help="quadrature boundary levels")
    sub.add_argument("--refine-depth", type=int, default=8, dest="refine_depth")
    sub.add_argument("--slope-bounded", type=float, default=0.02,
                     dest="slope_bounded")
    sub.add_argument("--slope-divergent", type=float, default=0.1,
                     dest="slope_divergent")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="diskinterp",
        description="numerics for interpolating sequences and Carleson "
                    "measures on the unit disk")
    ap.add_argument("--jobs", type=int,
                    default=int(os.environ.get("DISKINTERP_JOBS", "1")),
                    help="worker cap for parallel maps (default: "
                         "DISKINTERP_JOBS or 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a test family")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--q", type=float, default=0.5)
    g.add_argument("--n", type=int, default=12)
    g.add_argument("--s", type=float, default=0.5)
    g.add_argument("--growth", type=float, default=0.9)
    g.add_argument("--depth-levels", type=int, default=10, dest="depth_levels")
    g.add_argument("--magnitude", type=float, default=0.1)
    g.add_argument("--slope", type=float, default=0.5)
    g.add_argument("--calibration", type=float, default=1.0)
    _add_common(g)

    m = sub.add_parser("metrics", help="separation statistics of a sequence")
    m.add_argument("--in", dest="infile", required=True)
    _add_common(m)

    c = sub.add_parser("carleson", help="s-Carleson tests of a point-mass measure")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--s", type=float, required=True)
    c.add_argument("--t", type=float, default=None)
    c.add_argument("--test", choices=("box", "kernel", "ratio", "all"),
                   default="all")
    c.add_argument("--generations", type=int, default=None)
    _add_common(c)

    i = sub.add_parser("inner", help="inner-function membership test")
    i.add_argument("--zeros", required=True)
    i.add_argument("--p", type=float, required=True)
    i.add_argument("--s", type=float, required=True)
    _add_common(i)

    se = sub.add_parser("seminorm", help="space (semi)norms of a function")
    se.add_argument("--fn", required=True,
                    help="log | monomial:K | const:C | blaschke:PATH | "
                         "series:c0,c1,... | testfn:re,im,p,s")
    se.add_argument("--p", type=float, default=1.0)
    se.add_argument("--s", type=float, default=0.5)
    se.add_argument("--space", choices=("fpps", "besov", "bloch", "hinf",
                                        "multiplier"), default="fpps")
    _add_common(se)

    ip = sub.add_parser("interpolate", help="constructive interpolation")
    ip.add_argument("--problem", required=True,
                    help="JSON file: {nodes: {points: [[re,im],...]}, "
                         "values: [[re,im],...]}")
    ip.add_argument("--tol", type=float, default=1e-9)
    _add_common(ip)

    t1 = sub.add_parser("theorem21", help="interpolation equivalence battery")
    t1.add_argument("--in", dest="infile", required=True)
    t1.add_argument("--p", type=float, required=True)
    t1.add_argument("--s", type=float, required=True)
    t1.add_argument("--t", type=float, default=1.0)
    t1.add_argument("--trials", type=int, default=10)
    _add_common(t1)

    t3 = sub.add_parser("theorem32", help="log-derivative L^p description battery")
    t3.add_argument("--zeros", required=True)
    t3.add_argument("--p", type=float, required=True)
    t3.add_argument("--s", type=float, required=True)
    _add_common(t3)

    z = sub.add_parser("zhu", help="kernel-integral asymptotics validation")
    z.add_argument("--c", type=float, required=True)
    z.add_argument("--t", type=float, required=True)
    z.add_argument("--max-depth", type=int, default=14, dest="max_depth")
    _add_common(z)

    f = sub.add_parser("forelli", help="two-center kernel inequality validation")
    f.add_argument("--s", type=float, required=True)
    f.add_argument("--r", type=float, required=True)
    f.add_argument("--t", type=float, required=True)
    f.add_argument("--pairs", type=int, default=200)
    _add_common(f)

    cl = sub.add_parser("closure", help="closure-in-Bloch criterion")
    cl.add_argument("--zeros", required=True)
    cl.add_argument("--s", type=float, required=True)
    cl.add_argument("--t", type=float, default=2.0)
    cl.add_argument("--epsilons", default="0.05,0.1,0.2,0.4")
    _add_common(cl)

    lt = sub.add_parser("logtempered", help="log-tempered kernel test")
    lt.add_argument("--in", dest="infile", required=True)
    lt.add_argument("--s", type=float, required=True)
    _add_common(lt)

    p2 = sub.add_parser("prop22", help="multiplier identity battery")
    p2.add_argument("--p", type=float, required=True)
    p2.add_argument("--s", type=float, required=True)
    p2.add_argument("--zeros", default=None,
                    help="optional zero-set file for the Blaschke member")
    _add_common(p2)

    return ap


def _cmd_gen(args) -> int:
    if args.family == "radial":
        seq = gen_radial(args.q, args.n)
    elif args.family == "clustered":
        seq = gen_clustered(args.s, args.growth, args.depth_levels)
    elif args.family == "bwy":
        seq = gen_bwy_candidate(args.s, args.depth_levels,
                                calibration=args.calibration)
    elif args.family == "stolz":
        seq = gen_stolz(args.q, args.n, slope=args.slope)
    else:
        seq = gen_perturbed_radial(args.q, args.n, magnitude=args.magnitude,
                                   seed=args.seed)
    if args.output:
        seq.save(args.output)
        meta = {"family": args.family, "size": len(seq), "file": args.output}
        sys.stdout.write(json.dumps(_jsonable(meta), sort_keys=True) + "\n")
        return EXIT_OK
    payload = seq.to_json_obj()
    sys.stdout.write(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_metrics(args) -> int:
    seq = _load_sequence(args.infile)
    rep = sequence_metrics(seq)
    return _emit(args, "metrics", {"in": args.infile}, rep)


def _cmd_carleson(args) -> int:
    seq = _load_sequence(args.infile)
    if args.s <= 0:
        raise ParameterError(f"s must be positive, got s={args.s}")
    mu = weights_from_sequence(seq, args.s)
    classifier = _classifier_from(args)
    result = {}
    if args.test in ("box", "all"):
        result["box"] = box_constant(mu, args.s, max_generation=args.generations,
                                     config=classifier)
    if args.test in ("kernel", "all"):
        t = args.t if args.t is not None else args.s
        result["kernel"] = kernel_constant(mu, args.s, t, config=classifier)
    if args.test in ("ratio", "all"):
        result["ratio"] = bps_carleson_ratio(mu, args.s, config=classifier)
    cfg = {"in": args.infile, "s": args.s, "t": args.t, "test": args.test,
           "generations": args.generations, "seed": args.seed}
    return _emit(args, "carleson", cfg, result)


def _cmd_inner(args) -> int:
    seq = _load_sequence(args.zeros)
    rep = inner_membership_test(BlaschkeProduct(seq.values), args.p, args.s,
                                config=_classifier_from(args))
    cfg = {"zeros": args.zeros, "p": args.p, "s": args.s}
    return _emit(args, "inner", cfg, rep)


def _cmd_seminorm(args) -> int:
    fn = _parse_fn(args.fn)
    quad = _quad_from(args)
    params = SpaceParams(args.p, args.s)
    if args.space == "fpps":
        result = fpps_seminorm(fn, params, config=quad,
                               classifier=_classifier_from(args))
    elif args.space == "besov":
        result = bps_norm(fn, params, config=quad)
    elif args.space == "bloch":
        result = {"value": bloch_seminorm(fn)}
    elif args.space == "hinf":
        result = hinf_norm(fn, classifier=_classifier_from(args))
    else:
        result = multiplier_test(fn, params, config=quad,
                                 classifier=_classifier_from(args))
    cfg = {"fn": args.fn, "p": args.p, "s": args.s, "space": args.space,
           "rel_tol": args.rel_tol, "levels": args.levels}
    return _emit(args, "seminorm", cfg, result)


def _cmd_interpolate(args) -> int:
    path = Path(args.problem)
    if not path.exists():
        raise ParameterError(f"problem file does not exist: {args.problem}")
    try:
        problem = InterpolationProblem.from_json_obj(json.loads(path.read_text()))
    except (KeyError, ValueError, json.JSONDecodeError) as err:
        raise ParameterError(f"malformed problem file: {err}") from err
    sol = earl_interpolate(problem, tol=args.tol)
    cfg = {"problem": args.problem, "tol": args.tol}
    return _emit(args, "interpolate", cfg, sol)


def _cmd_theorem21(args) -> int:
    seq = _load_sequence(args.infile)
    rep = check_theorem21(seq, args.p, args.s, args.t, trials=args.trials,
                          seed=args.seed, classifier=_classifier_from(args))
    cfg = {"in": args.infile, "p": args.p, "s": args.s, "t": args.t,
           "trials": args.trials, "seed": args.seed}
    return _emit(args, "theorem21", cfg, rep)


def _cmd_theorem32(args) -> int:
    seq = _load_sequence(args.zeros)
    rep = check_theorem32(seq, args.p, args.s,
                          classifier=_classifier_from(args))
    cfg = {"zeros": args.zeros, "p": args.p, "s": args.s}
    return _emit(args, "theorem32", cfg, rep)


def _cmd_zhu(args) -> int:
    rep = validate_zhu_estimate(args.c, args.t,
                                z_depths=list(range(1, args.max_depth + 1)))
    cfg = {"c": args.c, "t": args.t, "max_depth": args.max_depth}
    return _emit(args, "zhu", cfg, rep)


def _cmd_forelli(args) -> int:
    rep = validate_forelli_rudin(args.s, args.r, args.t, n_pairs=args.pairs,
                                 seed=args.seed, n_jobs=args.jobs)
    cfg = {"s": args.s, "r": args.r, "t": args.t, "pairs": args.pairs,
           "seed": args.seed}
    return _emit(args, "forelli", cfg, rep)


def _cmd_closure(args) -> int:
    seq = _load_sequence(args.zeros)
    eps = [float(x) for x in args.epsilons.split(",")]
    fn = blaschke_fn(BlaschkeProduct(seq.values))
    rep = closure_test(fn, eps, args.t, args.s,
                       classifier=_classifier_from(args))
    cfg = {"zeros": args.zeros, "s": args.s, "t": args.t, "epsilons": eps}
    return _emit(args, "closure", cfg, rep)


def _cmd_logtempered(args) -> int:
    seq = _load_sequence(args.infile)
    rep = log_tempered_test(seq, args.s, classifier=_classifier_from(args))
    cfg = {"in": args.infile, "s": args.s}
    return _emit(args, "logtempered", cfg, rep)


def _cmd_prop22(args) -> int:
    family = [const_fn(2.0), log_branch_fn()]
    if args.zeros:
        family.insert(1, blaschke_fn(BlaschkeProduct(_load_sequence(args.zeros).values)))
    else:
        family.insert(1, blaschke_fn(BlaschkeProduct(gen_radial(0.5, 10).values)))
    rep = check_prop22(family, args.p, args.s,
                       classifier=_classifier_from(args))
    cfg = {"p": args.p, "s": args.s, "zeros": args.zeros}
    return _emit(args, "prop22", cfg, rep)


_COMMANDS = {
    "gen": _cmd_gen,
    "metrics": _cmd_metrics,
    "carleson": _cmd_carleson,
    "inner": _cmd_inner,
    "seminorm": _cmd_seminorm,
    "interpolate": _cmd_interpolate,
    "theorem21": _cmd_theorem21,
    "theorem32": _cmd_theorem32,
    "zhu": _cmd_zhu,
    "forelli": _cmd_forelli,
    "closure": _cmd_closure,
    "logtempered": _cmd_logtempered,
    "prop22": _cmd_prop22,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_PARAM if err.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (ParameterError, DiskDomainError, ValueError) as err:
        sys.stderr.write(f"parameter error: {err}\n")
        return EXIT_PARAM
    except EarlError as err:
        sys.stderr.write(f"solver error: {err}\n")
        return EXIT_PARAM if err.code == "NOT_UNIFORMLY_SEPARATED" else EXIT_INCONCLUSIVE
    except Exception as err:          # noqa: BLE001 - CLI boundary
        sys.stderr.write(f"internal error: {type(err).__name__}: {err}\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line interface.

Subcommands: basis, f0, ideal, lift, mixedchar, verify.  Flags mirror the
flat config-file keys; flags win.  All rationals in the JSON output are
exact strings.  Exit codes: 0 pass, 1 assertion failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .config import (RunConfig, ConfigError, load_config_file, parse_alphas,
                     build_field, build_algebra, build_series, build_aut,
                     save_basis_cache)
from .freelie import witt_dimension
from . import ramgen
from . import lifts
from .checks import SUITES, run_suite


def _fraction_str(x) -> str:
    return str(Fraction(x))


def _emit(args, payload: dict) -> None:
    if args.out == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for key, val in sorted(payload.items()):
            print(f"{key}: {val}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chram",
        description="Exact engine for free nilpotent Lie algebras of class "
                    "< p over F_{p^n0}: CH group law, splitting operators, "
                    "ramification generators and lift recurrences.")
    ap.add_argument("--config", help="flat key = value config file")
    ap.add_argument("--p", type=int)
    ap.add_argument("--n0", type=int)
    ap.add_argument("--c0", type=int)
    ap.add_argument("--amax", type=int)
    ap.add_argument("--alpha", help="h coefficients over k: '1,0;2,1'")
    ap.add_argument("--depth", type=int)
    ap.add_argument("--policy", choices=("m1",))
    ap.add_argument("--out", choices=("json", "text"))
    ap.add_argument("--seed", type=int)
    ap.add_argument("--cache-dir")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("basis", help="build the Hall basis; report dims")
    sp.add_argument("--max-deg", type=int, default=None)

    sp = sub.add_parser("f0", help="ramification generator element")
    sp.add_argument("gamma", help="exact rational, e.g. 7/3")
    sp.add_argument("N", type=int, help="depth")

    sp = sub.add_parser("ideal", help="ramification ideal report")
    sp.add_argument("v", help="exact rational threshold")
    sp.add_argument("N", type=int, help="depth")

    sub.add_parser("lift", help="solve the lift recurrences; emit the data")

    sp = sub.add_parser("mixedchar", help="mixed-characteristic summary")
    sp.add_argument("p", type=int)
    sp.add_argument("e_K", type=int)
    sp.add_argument("N0", type=int)

    sp = sub.add_parser("verify", help="run a named verification suite")
    sp.add_argument("suite", choices=sorted(SUITES) + ["all"])
    return ap


def config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    file_vals = load_config_file(args.config) if args.config else {}
    int_keys = {"p": "p", "n0": "n0", "c0": "c0", "amax": "a_max",
                "depth": "depth", "seed": "seed"}
    for key, attr in int_keys.items():
        if key in file_vals:
            setattr(cfg, attr, int(file_vals[key]))
    for key in ("policy", "out", "cache_dir"):
        if key in file_vals:
            setattr(cfg, key, file_vals[key])
    if "alpha" in file_vals:
        cfg.alphas = parse_alphas(file_vals["alpha"], cfg.n0)
    for key, attr in int_keys.items():
        val = getattr(args, key if key != "amax" else "amax", None)
        if key == "amax":
            val = args.amax
        if val is not None:
            setattr(cfg, attr, val)
    if args.policy:
        cfg.policy = args.policy
    if args.out:
        cfg.out = args.out
    if args.cache_dir:
        cfg.cache_dir = args.cache_dir
    if args.alpha:
        cfg.alphas = parse_alphas(args.alpha, cfg.n0)
    cfg.validate()
    args.out = cfg.out
    return cfg


def cmd_basis(args, cfg: RunConfig) -> int:
    alg = build_algebra(cfg)
    dims = alg.eager_build(args.max_deg)
    q = alg.num_gens()
    witt = [witt_dimension(q, n) for n in range(1, len(dims) + 1)]
    save_basis_cache(cfg, alg)
    _emit(args, {"p": cfg.p, "N0": cfg.n0, "c0": cfg.c0, "a_max": cfg.a_max_eff,
                 "generators": q, "dims": dims, "witt": witt,
                 "total": alg.num_words()})
    return 0 if dims == witt else 1


def cmd_f0(args, cfg: RunConfig) -> int:
    alg = build_algebra(cfg)
    gamma = Fraction(args.gamma)
    elem = ramgen.ram_generator(alg, gamma, args.N)
    _emit(args, {"gamma": _fraction_str(gamma), "N": args.N,
                 "elem": alg.elem_to_json(elem)})
    return 0


def cmd_ideal(args, cfg: RunConfig) -> int:
    alg = build_algebra(cfg)
    v = Fraction(args.v)
    ideal = ramgen.ramification_ideal(alg, v, args.N)
    _emit(args, {"v": _fraction_str(v), "N": args.N,
                 "ideal_dim": ideal.dim,
                 "generators_used": ideal.generators_used,
                 "ambient_dim": alg.num_words() * alg.n0})
    return 0


def cmd_lift(args, cfg: RunConfig) -> int:
    f = build_field(cfg)
    alg = build_algebra(cfg, f)
    sctx = build_series(cfg, alg)
    aut = build_aut(cfg, f)
    lin = lifts.solve_linearized(sctx, aut)
    minus, zero, plus = lin.c1_split(sctx)
    depth = cfg.depth if cfg.depth is not None else 2
    ideal = ramgen.ramification_ideal(alg, Fraction(cfg.c0), depth)
    arith = lifts.is_arithmetical(alg, ideal, zero, aut, depth + 1)
    payload = {
        "p": cfg.p, "N0": cfg.n0, "c0": cfg.c0, "a_max": cfg.a_max_eff,
        "alphas": [list(a) for a in aut.alphas],
        "eps_coeffs": [list(a) for a in aut.eps_coeffs()],
        "degrees": [
            {"s": s, "defect": sctx.to_json(b), "shift": sctx.to_json(x)}
            for s, (b, x) in enumerate(zip(lin.b_records, lin.x_records), 1)
        ],
        "V": {str(a): alg.elem_to_json(x) for a, x in sorted(lin.ad_images.items())},
        "ad_D0": alg.elem_to_json(lin.ad_d0),
        "c1": {
            "minus": sctx.to_json(minus),
            "zero": alg.elem_to_json(zero),
            "plus": sctx.to_json(plus),
        },
        "arithmetical": arith,
        "N_used": depth,
        "seed": cfg.seed,
    }
    _emit(args, payload)
    return 0


def cmd_mixedchar(args, cfg: RunConfig) -> int:
    try:
        rep = ramgen.mixed_char_summary(args.p, args.e_K, args.N0)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = {"p": rep["p"], "e_K": rep["e_K"], "N0": rep["N0"],
               "c0": rep["c0"], "generators": rep["generators"],
               "v": {str(s): _fraction_str(val) for s, val in rep["v"].items()}}
    _emit(args, payload)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    all_ok = True
    report = {}
    for name in names:
        ok, lines = run_suite(name, cfg)
        all_ok = all_ok and ok
        report[name] = {"passed": ok, "detail": lines}
        if cfg.out == "text":
            print(f"[{'PASS' if ok else 'FAIL'}] {name}")
            for line in lines:
                print(f"    {line}")
    if cfg.out == "json":
        print(json.dumps(report, sort_keys=True, separators=(",", ":")))
    return 0 if all_ok else 1


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ConfigError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    handlers = {
        "basis": cmd_basis, "f0": cmd_f0, "ideal": cmd_ideal,
        "lift": cmd_lift, "mixedchar": cmd_mixedchar, "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

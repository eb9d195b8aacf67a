"""Command-line front end.

    wsndct run SCENARIO|CONFIG [--seed S] [--trials T] [--out DIR] [--threads N] [--strict]
    wsndct analytic --formula NAME [parameters]
    wsndct inspect {deploy,cluster,compress,route} SCENARIO|CONFIG [--trial I] [--out FILE]

Exit codes: 0 success, 2 configuration error, 3 runtime error,
4 partially connected trials under ``--strict``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
from pathlib import Path

from . import clustering, energy, harness, rng, routing, signals, transform
from .deployment import deploy, to_csv as deployment_csv
from .errors import ConfigError, InvalidArgument, UnsupportedModel, WsnError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_PARTIAL = 4

OUT_ENV = "WSNDCT_OUT"

FORMULAS = {
    "intra_square": ("n", "nc", "L"),
    "intra_disk": ("n", "nc", "R0"),
    "e_d2_square": ("L", "Li"),
    "e_d2_disk": ("R0",),
    "total_direct_square": ("n", "nc", "L", "Li", "K"),
    "total_direct_disk": ("n", "nc", "R0", "K"),
    "total_multihop": ("intra", "hops", "R", "K"),
    "chandler": ("cdf",),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _resolve(target: str) -> harness.ExperimentConfig:
    if target in harness.SCENARIOS:
        return harness.scenario(target)
    path = Path(target)
    if path.is_file():
        return harness.load_config(path)
    raise ConfigError(f"unknown scenario {target!r}; available: {', '.join(harness.SCENARIOS)}")


def _apply_overrides(cfg, args):
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        changes["trials"] = args.trials
    return dataclasses.replace(cfg, **changes) if changes else cfg


def cmd_run(args) -> int:
    cfg = _apply_overrides(_resolve(args.target), args)
    out = args.out or os.environ.get(OUT_ENV) or os.path.join("results", cfg.scenario)
    sweep = harness.run_sweep(cfg, threads=args.threads)
    files = harness.write_results(sweep, out)
    print(f"wrote {', '.join(str(p) for p in files.values())}", file=sys.stderr)
    if sweep.partial_trials:
        print(f"warning: {sweep.partial_trials} trial cells left cluster heads unconnected", file=sys.stderr)
        if args.strict:
            return EXIT_PARTIAL
    return EXIT_OK


def _analytic_value(name: str, p: dict) -> float:
    a = p.get("alpha", 2)
    if name == "intra_square":
        return energy.analytic_intra_square(p["n"], p["nc"], p["L"], a)
    if name == "intra_disk":
        return energy.analytic_intra_disk(p["n"], p["nc"], p["R0"], a)
    if name == "e_d2_square":
        energy._require_alpha2(a)
        return energy.analytic_e_d2_square(p["L"], p["Li"])
    if name == "e_d2_disk":
        energy._require_alpha2(a)
        return energy.analytic_e_d2_disk(p["R0"])
    if name == "total_direct_square":
        return energy.analytic_total_direct_square(p["n"], p["nc"], p["L"], p["Li"], p["K"], a)
    if name == "total_direct_disk":
        return energy.analytic_total_direct_disk(p["n"], p["nc"], p["R0"], p["K"], a)
    if name == "total_multihop":
        return energy.analytic_total_multihop(p["intra"], p["hops"], p["R"], p["K"], a)
    return routing.expected_hops_chandler(p["cdf"], p.get("max_hops"))


def cmd_analytic(args) -> int:
    needed = FORMULAS[args.formula]
    params = {}
    for key in needed:
        val = getattr(args, key)
        if val is None:
            raise ConfigError(f"formula {args.formula} needs --{key}")
        params[key] = val
    params["alpha"] = args.alpha
    if args.max_hops is not None:
        params["max_hops"] = args.max_hops
    try:
        value = _analytic_value(args.formula, params)
    except InvalidArgument as exc:
        raise ConfigError(str(exc)) from exc
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["formula", *needed, "value"])
    shown = [";".join(repr(v) for v in params[k]) if k == "cdf" else params[k] for k in needed]
    w.writerow([args.formula, *shown, repr(float(value))])
    return EXIT_OK


def _stage_output(stage: str, cfg: harness.ExperimentConfig, trial: int) -> dict[str, str]:
    seed = harness.trial_seed(cfg, trial)
    dep = deploy(cfg.geometry, cfg.n_nodes, cfg.bs_Li, rng.child_seed(seed, "deploy"))
    if stage == "deploy":
        return {"": deployment_csv(dep)}
    n_c = cfg.n_c[0]
    cs = clustering.cluster(dep, cfg.algorithms[0], n_c, rng.child_seed(seed, "cluster"), cfg.kmeans_max_iters)
    if stage == "cluster":
        return {"": clustering.to_csv(cs)}
    heads_xy = dep.xy[cs.heads]
    if stage == "route":
        range_R = cfg.range_for(n_c)
        if range_R is None:
            raise ConfigError("inspect route needs a config with a transmission-range schedule")
        tree = routing.build_routing_tree(cs.heads, heads_xy, dep.bs_xy, range_R, cfg.strategy)
        return {"": routing.to_csv(tree)}
    readings = harness.load_readings(cfg, dep, seed)
    readings = signals.add_noise(readings, signals.NoiseSpec(cfg.sigma[0], rng.child_seed(seed, "noise")))
    bs_d2 = ((heads_xy - dep.bs_xy) ** 2).sum(axis=1)
    k_alloc = transform.allocate_coefficients(cs.sizes, cfg.K[0], priority=bs_d2)
    payloads = [
        (ci, transform.compress_cluster(c.members, readings[c.members], int(k), cfg.sort_mode, cfg.selection_mode))
        for ci, (c, k) in enumerate(zip(cs.clusters, k_alloc)) if k > 0
    ]
    coef, perm = transform.payloads_to_csv(payloads)
    return {"": coef, ".perm": perm}


def cmd_inspect(args) -> int:
    cfg = _apply_overrides(_resolve(args.target), args)
    if not 0 <= args.trial < cfg.trials:
        raise ConfigError(f"trial must lie in [0, {cfg.trials})")
    outputs = _stage_output(args.stage, cfg, args.trial)
    if args.out is None:
        sys.stdout.write(outputs[""])
        if ".perm" in outputs:
            print("permutation table omitted; pass --out to write it", file=sys.stderr)
        return EXIT_OK
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    for suffix, text in outputs.items():
        path = out if not suffix else out.with_name(out.stem + suffix + out.suffix)
        path.write_text(text)
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cdf(text: str):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad CDF list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wsndct", description="Distributed-DCT data collection in clustered WSNs")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a named scenario or a manifest/config file")
    run.add_argument("target", help=f"scenario ({', '.join(harness.SCENARIOS)}) or config path")
    run.add_argument("--seed", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--out", help=f"output directory (default ${OUT_ENV} or results/<scenario>)")
    run.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    run.add_argument("--strict", action="store_true", help="exit 4 if any trial is partially connected")
    run.set_defaults(func=cmd_run)

    an = sub.add_parser("analytic", help="evaluate a closed-form expression")
    an.add_argument("--formula", required=True, choices=sorted(FORMULAS))
    an.add_argument("-n", type=int, dest="n")
    an.add_argument("--nc", type=int)
    an.add_argument("-L", type=float, dest="L")
    an.add_argument("--Li", type=float)
    an.add_argument("--R0", type=float)
    an.add_argument("-K", type=int, dest="K")
    an.add_argument("--R", type=float)
    an.add_argument("--hops", type=float)
    an.add_argument("--intra", type=float)
    an.add_argument("--cdf", type=_cdf)
    an.add_argument("--max-hops", type=int, dest="max_hops")
    an.add_argument("--alpha", type=int, default=2)
    an.set_defaults(func=cmd_analytic)

    ins = sub.add_parser("inspect", help="export one pipeline stage of one trial as CSV")
    ins.add_argument("stage", choices=["deploy", "cluster", "compress", "route"])
    ins.add_argument("target")
    ins.add_argument("--trial", type=int, default=0)
    ins.add_argument("--seed", type=int)
    ins.add_argument("--out")
    ins.set_defaults(func=cmd_inspect)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedModel as exc:
        print(f"unsupported model: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WsnError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

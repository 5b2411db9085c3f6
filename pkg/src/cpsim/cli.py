"""Command-line front end: run, sweep, compare, reserve, validate.

Exit codes: 0 success, 2 parse/validation/config error, 3 scale limit.
"""
from __future__ import annotations

import argparse
import json
import sys

from .benchmarks import analytic_reserve_gain, numeric_reserve_gain
from .economy import Economy, MultiEconomy
from .errors import CpsimError, ScaleLimit
from .experiments import (SamplerSpec, compare_mechanisms, derive_seed,
                          mean_stderr, parse_mechanism, run_mechanism,
                          run_sweep, sample_profile, write_csv, SweepRecord)
from .typemodels import model_from_dict, model_to_dict

PROFILE_VERSION = 1


# ---------------------------------------------------------------- profiles

def load_profile(path: str) -> Economy | MultiEconomy:
    with open(path) as fh:
        data = json.load(fh)
    return profile_from_dict(data)


def profile_from_dict(data: dict) -> Economy | MultiEconomy:
    if data.get("version") != PROFILE_VERSION:
        raise CpsimError(f"unsupported profile version {data.get('version')!r}")
    if "resources" in data:
        resources = list(data["resources"])
        rows = [[model_from_dict(agent["models"][r]) for r in resources]
                for agent in data["agents"]]
        return MultiEconomy(resources, rows)
    return Economy([model_from_dict(agent["model"]) for agent in data["agents"]])


def profile_to_dict(e: Economy | MultiEconomy) -> dict:
    if isinstance(e, MultiEconomy):
        return {"version": PROFILE_VERSION,
                "resources": list(e.resources),
                "agents": [{"models": {r: model_to_dict(e.models[i][j])
                                       for j, r in enumerate(e.resources)}}
                           for i in range(e.n_agents)]}
    return {"version": PROFILE_VERSION,
            "agents": [{"model": model_to_dict(m)} for m in e.agents]}


def dump_profile(e: Economy | MultiEconomy, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(profile_to_dict(e), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------- helpers

_FAMILY_ALIASES = {"exp": "exponential", "exponential": "exponential",
                   "uniform": "uniform", "wp": "wp"}


def _parse_family(args) -> SamplerSpec:
    family = _FAMILY_ALIASES.get(args.family)
    if family is None:
        raise CpsimError(f"unknown family {args.family!r}")
    return SamplerSpec(family, args.param, args.n_agents[0], args.resources)


def _parse_n(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if sep:
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _out(args):
    return open(args.output, "w") if args.output else sys.stdout


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    economy = load_profile(args.profile)
    winner, ut, rev = run_mechanism(args.mechanism, economy, args.seed)
    name, pname, value = parse_mechanism(args.mechanism)
    multi = isinstance(economy, MultiEconomy)
    n_agents = economy.n_agents if multi else len(economy)
    n_res = len(economy.resources) if multi else 1
    rows = [("mechanism", name), ("param", f"{pname}={value}" if pname else "-"),
            ("winner", winner or "-"), ("utilization", f"{ut:.12g}"),
            ("revenue", f"{rev:.12g}")]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")
    if args.csv:
        rec = SweepRecord(0, args.seed, name, pname,
                          "" if value is None else repr(value),
                          n_agents, n_res, winner, ut, rev, 0)
        fh = _out(args)
        try:
            write_csv([rec], fh)
        finally:
            if fh is not sys.stdout:
                fh.close()
    return 0


def cmd_sweep(args) -> int:
    records = []
    for n in args.n_agents:
        spec = SamplerSpec(_FAMILY_ALIASES.get(args.family, args.family),
                           args.param, n, args.resources)
        if args.emit_profile:
            dump_profile(sample_profile(spec, derive_seed(args.seed, 0)),
                         args.emit_profile)
        records.extend(run_sweep(spec, args.mechanisms.split(","),
                                 args.profiles, args.seed, timings=args.timings))
    fh = _out(args)
    try:
        write_csv(records, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    by_mech: dict[tuple, list[float]] = {}
    for r in records:
        by_mech.setdefault((r.mechanism, r.param_value, r.n_agents), []).append(r.utilization)
    for (mech, pval, n), vals in sorted(by_mech.items()):
        mean, se = mean_stderr(vals)
        tag = f"{mech}:{pval}" if pval else mech
        print(f"# {tag} n={n} mean_utilization={mean:.6f} stderr={se:.2g}",
              file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    spec = SamplerSpec(_FAMILY_ALIASES.get(args.family, args.family),
                       args.param, args.n_agents[0], args.resources)
    rec_a = run_sweep(spec, [args.a], args.profiles, args.seed)
    rec_b = run_sweep(spec, [args.b], args.profiles, args.seed)
    frac_a, frac_b, paired = compare_mechanisms(rec_a, rec_b)
    fh = _out(args)
    try:
        fh.write("profile_id,seed,utilization_a,utilization_b\n")
        for pid, seed, ua, ub in paired:
            fh.write(f"{pid},{seed},{ua!r},{ub!r}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    print(f"# frac_{args.a}_strict={frac_a:.6f} frac_{args.b}_strict={frac_b:.6f}",
          file=sys.stderr)
    return 0


def cmd_reserve(args) -> int:
    lo, sep, hi = args.r.partition("..")
    if sep:
        lo_f, hi_f = float(lo), float(hi)
        grid = [lo_f + (hi_f - lo_f) * k / (args.steps - 1) for k in range(args.steps)]
    else:
        grid = [float(args.r)]
    family = _FAMILY_ALIASES.get(args.family, args.family)
    fh = _out(args)
    try:
        fh.write("r,analytic_gain,mc_gain,mc_stderr\n")
        for r in grid:
            analytic = analytic_reserve_gain(family, r, args.param)
            mc, se = numeric_reserve_gain(family, r, args.trials, args.seed, args.param)
            fh.write(f"{r!r},{analytic!r},{mc!r},{se!r}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_validate(args) -> int:
    economy = load_profile(args.profile)
    multi = isinstance(economy, MultiEconomy)
    n = economy.n_agents if multi else len(economy)
    kind = f"{n} agents x {len(economy.resources)} resources" if multi else f"{n} agents"
    print(f"OK: valid profile ({kind})")
    return 0


# ---------------------------------------------------------------- parser

def _add_sampler_args(p: argparse.ArgumentParser, multi_n: bool = False):
    p.add_argument("--family", required=True,
                   help="exponential (alias exp), uniform, or wp")
    p.add_argument("--param", type=float, default=10.0,
                   help="family scale: L / a1_max / w_max (default 10)")
    p.add_argument("--n", dest="n_agents", type=_parse_n, default=[2],
                   help="agent count, or a range like 2..15" if multi_n
                        else "agent count")
    p.add_argument("--resources", type=int, default=1,
                   help="resource count (default 1)")
    p.add_argument("--profiles", type=int, default=10_000,
                   help="profiles per configuration (default 10000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpsim",
        description="Simulate contingent-payment allocation mechanisms.")
    parser.add_argument("--seed", type=int, default=0,
                        help="base seed for all randomness (default 0)")
    parser.add_argument("--quick", action="store_true",
                        help="cap sweeps at 500 profiles for fast runs")
    parser.add_argument("--threads", type=int, default=1,
                        help="parallelism cap; output is identical at any value")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one mechanism on a profile file")
    p_run.add_argument("--mechanism", required=True)
    p_run.add_argument("--profile", required=True)
    p_run.add_argument("--csv", action="store_true", help="also emit one CSV row")
    p_run.add_argument("--output")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sample profiles and sweep mechanisms")
    _add_sampler_args(p_sweep, multi_n=True)
    p_sweep.add_argument("--mechs", dest="mechanisms", required=True,
                         help="comma-separated, e.g. sp,csp,random,firstbest,p1p5")
    p_sweep.add_argument("--timings", action="store_true",
                         help="record wall-clock runtime_ns per record")
    p_sweep.add_argument("--emit-profile", metavar="PATH",
                         help="also write the first sampled profile as JSON")
    p_sweep.add_argument("--output")
    p_sweep.set_defaults(func=cmd_sweep)

    p_cmp = sub.add_parser("compare", help="paired comparison of two mechanisms")
    _add_sampler_args(p_cmp)
    p_cmp.add_argument("--a", required=True)
    p_cmp.add_argument("--b", required=True)
    p_cmp.add_argument("--output")
    p_cmp.set_defaults(func=cmd_compare)

    p_res = sub.add_parser("reserve", help="reserve-penalty gain: analytic vs MC")
    p_res.add_argument("--family", required=True)
    p_res.add_argument("--param", type=float, default=1.0,
                       help="scale L for the exponential family (default 1)")
    p_res.add_argument("--r", required=True, help="reserve value or range lo..hi")
    p_res.add_argument("--steps", type=int, default=11)
    p_res.add_argument("--trials", type=int, default=100_000)
    p_res.add_argument("--output")
    p_res.set_defaults(func=cmd_reserve)

    p_val = sub.add_parser("validate", help="check a profile file's assumptions")
    p_val.add_argument("--profile", required=True)
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.quick and hasattr(args, "profiles"):
        args.profiles = min(args.profiles, 500)
    try:
        return args.func(args)
    except ScaleLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (CpsimError, OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

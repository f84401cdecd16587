"""``rsic`` command line. Exit codes: 0 ok, 2 input error, 3 configuration
error (bad policy or grid), 4 internal inconsistency."""

from __future__ import annotations

import argparse
import json
import sys

from .adversary import run_deterministic_adversary, run_randomized_dd
from .algorithms import PolicyError, parse_policy, resolve, run_policy
from .bench import BenchGrid, run_grid, to_csv
from .bounds import JobLimitExceeded, brute_force_opt, opt_lower_bound, ratio_of_averages, \
    simple_lower_bound
from .core import (InternalInconsistency, InvalidInstance, dump_json, instance_to_dict,
                   load_instance, require_valid, schedule_to_dict, span, utilization,
                   verify_schedule)
from .gen import GenParams, uniform_instance
from .plot import MalformedCSV, plot_csv

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _read_instance(path):
    try:
        return require_valid(load_instance(path))
    except InvalidInstance:
        raise
    except (OSError, ValueError) as exc:  # json errors are ValueErrors
        raise InputError(f"{path}: {exc}") from exc


def cmd_run(args) -> int:
    inst = _read_instance(args.instance)
    spec = parse_policy(args.policy)
    resolve(spec, inst)
    sched, _ = run_policy(inst, spec, trace=False, arrivals_first=args.arrivals_first)
    bad = verify_schedule(inst, sched, arrivals_first=args.arrivals_first)
    if bad:
        raise InternalInconsistency(f"policy produced an invalid schedule: {bad[0]}")
    if args.out:
        dump_json(schedule_to_dict(sched), args.out)
    lb = opt_lower_bound(inst)
    ratio = ratio_of_averages([sched.total_cost], [lb], places=4) if lb > 0 else "n/a"
    print(f"{sched.policy} {sched.total_cost} {lb} {ratio}")
    return EXIT_OK


def cmd_gen(args) -> int:
    p = GenParams(args.d, args.n, args.T, args.mu, args.E, args.seed)
    doc = instance_to_dict(uniform_instance(p), p.metadata())
    if args.out:
        dump_json(doc, args.out)
    else:
        json.dump(doc, sys.stdout, indent=1)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.svg and not args.out:
        raise InputError("--svg needs --out")
    grid = BenchGrid(tuple(p for p in args.policies.split(",") if p), args.d, args.T, args.mu,
                     args.n, args.E, args.trials, args.seed, args.arrivals_first)
    text = to_csv(run_grid(grid, workers=args.jobs))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        plot_csv(args.out, args.svg)
    return EXIT_OK


def cmd_lb(args) -> int:
    inst = _read_instance(args.instance)
    print(f"opt_lower_bound {opt_lower_bound(inst)}")
    print(f"simple_lower_bound {simple_lower_bound(inst)}")
    print(f"span {span(inst)}")
    print(f"utilization {utilization(inst)}")
    return EXIT_OK


def cmd_opt(args) -> int:
    inst = _read_instance(args.instance)
    try:
        cost, sched = brute_force_opt(inst, job_limit=args.limit)
    except JobLimitExceeded as exc:
        raise InputError(str(exc)) from exc
    if args.out:
        dump_json(schedule_to_dict(sched), args.out)
    print(f"opt {cost} servers {len(sched.servers)}")
    return EXIT_OK


def cmd_adversary(args) -> int:
    spec = parse_policy(args.policy)
    if args.k < 1 or args.mu < 1:
        raise PolicyError("need --k >= 1 and --mu >= 1")
    if args.rand_seed is None:
        res = run_deterministic_adversary(args.k, args.mu, spec)
    else:
        res = run_randomized_dd(args.k, args.mu, args.rand_seed, spec)
    doc = res.to_dict(embed=args.embed)
    if args.out:
        dump_json(doc, args.out)
    else:
        print(json.dumps(doc, sort_keys=True))
    print(f"alg_bins {res.alg_bin_count} adv_servers {res.adv_server_count} "
          f"ratio {res.empirical_ratio}")
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        plot_csv(args.csv, args.out)
    except (OSError, MalformedCSV) as exc:
        raise InputError(str(exc)) from exc
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rsic", description="server-rental bin packing toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one policy on an instance file")
    p.add_argument("instance")
    p.add_argument("--policy", required=True)
    p.add_argument("--out")
    p.add_argument("--arrivals-first", action="store_true",
                   help="place arrivals at t before releasing jobs that finish at t")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen", help="generate a uniform random instance")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--E", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="policy x (d, T, mu) grid to CSV")
    p.add_argument("--policies", required=True)
    p.add_argument("--d", type=_ints, default=(1,))
    p.add_argument("--T", type=_ints, default=(1000,))
    p.add_argument("--mu", type=_ints, default=(1, 2, 5, 10, 100))
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--E", type=int, default=1000)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--arrivals-first", action="store_true")
    p.add_argument("--out")
    p.add_argument("--svg", help="also plot the CSV (needs --out)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("lb", help="lower bounds of an instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_lb)

    p = sub.add_parser("opt", help="brute-force optimum of a small instance")
    p.add_argument("instance")
    p.add_argument("--limit", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("adversary", help="play a lower-bound game against a policy")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--rand-seed", type=int)
    p.add_argument("--embed", action="store_true", help="include instance and schedules")
    p.add_argument("--out")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("plot", help="bench CSV to SVG")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PolicyError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidInstance as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:  # parameter validation (GenParams, BenchGrid, ...)
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Benchmark grid: policies x (d, T, mu) cells, ratio of averaged cost to
averaged lower bound over seeded uniform instances, written as CSV."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algorithms import PolicySpec, parse_policy, resolve, run_policy
from .bounds import RatioReport, opt_lower_bound
from .gen import GENERATOR, GenParams, uniform_instance

HEADER = ("policy", "d", "T", "mu", "n", "trials", "base_seed",
          "avg_cost", "avg_lb", "ratio", "notes")


@dataclass(frozen=True)
class BenchGrid:
    policies: tuple[str, ...]
    d: tuple[int, ...]
    T: tuple[int, ...]
    mu: tuple[int, ...]
    n: int = 10000
    E: int = 1000
    trials: int = 20
    seed: int = 0
    arrivals_first: bool = False

    def __post_init__(self):
        if not (self.policies and self.d and self.T and self.mu):
            raise ValueError("every grid axis needs at least one value")
        if self.trials < 1 or self.n < 1 or self.E < 1:
            raise ValueError("trials, n and E must be positive")
        for name in self.policies:
            parse_policy(name)  # PolicyError surfaces as a configuration error

    @property
    def notes(self) -> str:
        tick = "arrivals-first" if self.arrivals_first else "departures-first"
        return ";".join([
            "ratio=sum(cost)/sum(opt_lower_bound)",
            "best_fit/worst_fit load=Linf",
            "classed inner=first_fit",
            f"ticks={tick}",
            f"gen={GENERATOR}",
        ])


def _fmt(q: Fraction) -> str:
    return f"{float(q):.3f}"


def run_cell(grid: BenchGrid, d: int, T: int, mu: int) -> list[list]:
    """All policies on one (d, T, mu) cell; the instances are shared across policies."""
    specs = [parse_policy(p) for p in grid.policies]
    seeds = [grid.seed + t for t in range(grid.trials)]
    try:
        params = [GenParams(d, grid.n, T, mu, grid.E, s) for s in seeds]
    except ValueError as exc:
        return [[p, d, T, mu, grid.n, grid.trials, grid.seed, "", "", "", f"error: {exc}"]
                for p in grid.policies]
    costs: list[list[int]] = [[] for _ in specs]
    errors: list[str | None] = [None] * len(specs)
    lbs = []
    for p in params:
        inst = uniform_instance(p)
        lbs.append(opt_lower_bound(inst))
        for i, spec in enumerate(specs):
            if errors[i]:
                continue
            try:
                resolve(spec, inst)
                sched, _ = run_policy(inst, spec, trace=False, check=False,
                                      arrivals_first=grid.arrivals_first)
            except Exception as exc:  # one broken cell must not sink the grid
                errors[i] = f"error: {type(exc).__name__}: {exc}"
                continue
            costs[i].append(sched.total_cost)
    rows = []
    for name, spec, c, err in zip(grid.policies, specs, costs, errors):
        if err:
            rows.append([name, d, T, mu, grid.n, grid.trials, grid.seed, "", "", "", err])
            continue
        rep = RatioReport.from_runs(spec.name, d, T, mu, grid.n, grid.E, seeds, c, lbs)
        rows.append([name, d, T, mu, grid.n, grid.trials, grid.seed,
                     _fmt(rep.avg_cost), _fmt(rep.avg_lb), rep.ratio, grid.notes])
    return rows


def _cell_job(args):
    return run_cell(*args)


def run_grid(grid: BenchGrid, workers: int = 1) -> list[list]:
    """Rows ordered by (policy as listed, d, T, mu ascending), independent of worker count."""
    cells = [(d, T, mu) for d in sorted(set(grid.d)) for T in sorted(set(grid.T))
             for mu in sorted(set(grid.mu))]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_cell_job, [(grid, *c) for c in cells]))
    else:
        results = [run_cell(grid, *c) for c in cells]
    rows = []
    for i in range(len(grid.policies)):
        rows.extend(res[i] for res in results)
    return rows


def to_csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    w.writerows(rows)
    return buf.getvalue()


def cell_ratio(policy: str | PolicySpec, d: int, T: int, mu: int, *, n: int = 10000,
               trials: int = 20, seed: int = 0, E: int = 1000,
               arrivals_first: bool = True) -> float:
    """Convenience wrapper for one table cell; used by the acceptance suite and scripts."""
    name = policy if isinstance(policy, str) else policy.name
    grid = BenchGrid((name,), (d,), (T,), (mu,), n, E, trials, seed, arrivals_first)
    row = run_cell(grid, d, T, mu)[0]
    if not row[9]:
        raise RuntimeError(row[10])
    return float(row[9])

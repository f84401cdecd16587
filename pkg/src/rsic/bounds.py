"""Lower bounds on the optimal cost, windowed arrival mass, and a brute-force optimum."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction
from typing import Sequence

from .core import Instance, Job, Schedule, load_profile, span, utilization


def opt_lower_bound(inst: Instance) -> int:
    """Integral over time of the servers any packing needs at that moment.

    At each instant at least ceil(max_j load_j / D) servers must be open.
    """
    D = inst.denominator
    return sum(seg.length * -(-max(seg.load) // D) for seg in load_profile(inst))


def simple_lower_bound(inst: Instance) -> Fraction:
    """max(span, utilization / d)."""
    if not inst.jobs:
        return Fraction(0)
    return max(Fraction(span(inst)), utilization(inst) / inst.dimension)


class ArrivalMass:
    """Prefix sums of per-job peak sizes, indexed by arrival tick."""

    def __init__(self, inst: Instance):
        self.denominator = inst.denominator
        self.arrivals = [j.arrival for j in inst.jobs]
        self.prefix = [0]
        for j in inst.jobs:
            self.prefix.append(self.prefix[-1] + j.peak)

    def between(self, lo: int, hi: int) -> int:
        """Sum of peaks (numerators over D) for arrivals with lo < a < hi."""
        if hi <= lo + 1:
            return 0
        i = bisect.bisect_right(self.arrivals, lo)
        k = bisect.bisect_left(self.arrivals, hi)
        return self.prefix[k] - self.prefix[i] if k > i else 0

    def trailing(self, t: int, w: int) -> int:
        """Mass of arrivals in (t - w, t]: the window value just after tick t."""
        return self.between(t - w, t + 1)


def windowed_arrival_mass(inst: Instance, t: int, w: int) -> Fraction:
    """Sum of ||s_i||_inf over jobs arriving strictly inside (t - w, t)."""
    if w < 0:
        raise ValueError("window must be non-negative")
    return Fraction(ArrivalMass(inst).between(t - w, t), inst.denominator)


def window_mass_integral(inst: Instance, w: int, start: int = 0, stop: int | None = None) -> Fraction:
    """Exact integral of s_inf(t - w, t) dt over [start, stop).

    With integer arrivals the window mass is constant on every open unit
    interval (tau, tau + 1), where it counts arrivals in (tau - w, tau].
    """
    if stop is None:
        stop = (max(j.arrival for j in inst.jobs) if inst.jobs else 0) + w
    mass = ArrivalMass(inst)
    total = sum(mass.trailing(tau, w) for tau in range(start, stop))
    return Fraction(total, inst.denominator)


# -- brute force ----------------------------------------------------------------

class JobLimitExceeded(ValueError):
    pass


def _components(jobs: Sequence[Job]) -> list[list[Job]]:
    """Split jobs into runs that one single-use server can carry back to back.

    Intervals only chain when they strictly overlap: a server whose last job
    leaves at t is closed before an arrival at t is placed.
    """
    runs: list[list[Job]] = []
    reach = None
    for job in sorted(jobs, key=lambda j: (j.arrival, j.id)):
        if reach is None or job.arrival >= reach:
            runs.append([job])
            reach = job.finish
        else:
            runs[-1].append(job)
            reach = max(reach, job.finish)
    return runs


def _group_cost(jobs: Sequence[Job], D: int) -> int | None:
    """Union length of the group's intervals, or None if capacity is ever exceeded."""
    events = sorted({j.arrival for j in jobs} | {j.finish for j in jobs})
    for t in events:
        alive = [j for j in jobs if j.arrival <= t < j.finish]
        if not alive:
            continue
        for k in range(len(jobs[0].size)):
            if sum(j.size[k] for j in alive) > D:
                return None
    return sum(max(j.finish for j in run) - run[0].arrival for run in _components(jobs))


def set_partitions(n: int):
    """All set partitions of range(n) as restricted growth strings, in lexicographic order."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(rgs)
            return
        for b in range(top + 2):
            rgs[i] = b
            yield from rec(i + 1, max(top, b))

    rgs[0] = 0
    yield from rec(1, 0)


def brute_force_opt(inst: Instance, job_limit: int = 8) -> tuple[int, Schedule]:
    """Exact optimum by enumerating every set partition of the jobs.

    A block is feasible when its summed load never exceeds D; its cost is
    the measure of the union of its intervals, split into consecutive
    single-use servers at every gap. The first optimal partition in
    restricted-growth order is returned as the witness.
    """
    jobs = list(inst.jobs)
    n = len(jobs)
    if n > job_limit:
        raise JobLimitExceeded(f"{n} jobs exceed the brute-force limit of {job_limit}")
    if n == 0:
        return 0, Schedule({}, (), 0, "opt")
    D = inst.denominator
    memo: dict[int, int | None] = {}

    def block_cost(mask: int) -> int | None:
        if mask not in memo:
            memo[mask] = _group_cost([jobs[i] for i in range(n) if mask >> i & 1], D)
        return memo[mask]

    best, best_rgs = None, None
    for rgs in set_partitions(n):
        masks = [0] * (max(rgs) + 1 if rgs else 0)
        for i, b in enumerate(rgs):
            masks[b] |= 1 << i
        total = 0
        for m in masks:
            c = block_cost(m)
            if c is None or (best is not None and total + c >= best):
                total = None
                break
            total += c
        if total is not None and (best is None or total < best):
            best, best_rgs = total, rgs

    if best is None:
        raise ValueError("no feasible partition: some job alone exceeds capacity")
    assignment: dict[int, int] = {}
    sid = 0
    blocks = [[jobs[i] for i in range(n) if best_rgs[i] == b] for b in range(max(best_rgs) + 1)]
    for block in blocks:
        for run in _components(block):
            for job in run:
                assignment[job.id] = sid
            sid += 1
    sched = Schedule.from_groups(inst, assignment, "opt")
    return best, sched


# -- ratios -----------------------------------------------------------------------

def ratio_of_averages(costs: Sequence[int], lbs: Sequence[int], places: int = 6) -> Decimal:
    """(sum of costs) / (sum of lower bounds); not the mean of per-instance ratios."""
    if not costs or len(costs) != len(lbs):
        raise ValueError("need equal, non-empty cost and bound sequences")
    total_lb = sum(lbs)
    if total_lb <= 0:
        raise ValueError("lower-bound sum must be positive")
    with localcontext() as ctx:
        ctx.prec = 50
        q = Decimal(sum(costs)) / Decimal(total_lb)
        return q.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)


@dataclass(frozen=True)
class RatioReport:
    policy: str
    d: int
    T: int
    mu: int
    n: int
    D: int
    trials: int
    seeds: tuple[int, ...]
    avg_cost: Fraction
    avg_lb: Fraction
    ratio: str

    @classmethod
    def from_runs(cls, policy: str, d: int, T: int, mu: int, n: int, D: int,
                  seeds: Sequence[int], costs: Sequence[int], lbs: Sequence[int]) -> RatioReport:
        k = len(costs)
        return cls(policy, d, T, mu, n, D, k, tuple(seeds),
                   Fraction(sum(costs), k), Fraction(sum(lbs), k),
                   f"{ratio_of_averages(costs, lbs, places=4)}")

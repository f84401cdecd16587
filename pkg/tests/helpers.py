"""Independent oracles and instance strategies for the test suite.

Nothing here imports the engine or the sweep code: loads are summed per
tick, orderings are recomputed from scratch on every decision, and the
optimum is found by labelling jobs rather than by set partitions.
"""

from __future__ import annotations

import itertools
from math import ceil

import numpy as np
from hypothesis import strategies as st

from rsic.core import Instance, Job


# -- per-tick oracles ---------------------------------------------------------

def tick_loads(inst: Instance) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for job in inst.jobs:
        for t in range(job.arrival, job.finish):
            row = out.setdefault(t, [0] * inst.dimension)
            for k, c in enumerate(job.size):
                row[k] += c
    return out


def tick_lower_bound(inst: Instance) -> int:
    return sum(ceil(max(v) / inst.denominator) for v in tick_loads(inst).values())


def open_server_integral(sched) -> int:
    """Sum over ticks of the number of servers open at that tick."""
    if not sched.servers:
        return 0
    lo = min(s.open for s in sched.servers)
    hi = max(s.close for s in sched.servers)
    return sum(sum(1 for s in sched.servers if s.open <= t < s.close) for t in range(lo, hi))


def label_opt(inst: Instance) -> int:
    """Minimum cost over all labellings of jobs to servers (n <= 6 or so).

    A labelled group is charged the number of ticks covered by its jobs,
    which is what a chain of single-use servers pays for it; it is feasible
    when no tick overloads any coordinate and touching-but-disjoint runs are
    fine because they go to different servers anyway.
    """
    jobs = inst.jobs
    n = len(jobs)
    if n == 0:
        return 0
    best = None
    for labels in itertools.product(range(n), repeat=n):
        # canonical labellings only: first use of each label in order
        seen = -1
        ok = True
        for x in labels:
            if x > seen + 1:
                ok = False
                break
            seen = max(seen, x)
        if not ok:
            continue
        total = 0
        for g in range(seen + 1):
            sub = Instance(inst.dimension, inst.denominator, inst.mu,
                           tuple(j for j, x in zip(jobs, labels) if x == g))
            loads = tick_loads(sub)
            if any(c > inst.denominator for v in loads.values() for c in v):
                total = None
                break
            total += len(loads)
        if total is not None and (best is None or total < best):
            best = total
    return best


# -- naive reference simulator -----------------------------------------------------

class _Srv:
    def __init__(self, sid, t):
        self.id, self.open, self.jobs, self.dead, self.last = sid, t, [], False, -1
        self.sealed = False
        self.key = None


def naive_run(inst: Instance, variant: str, *, arrivals_first: bool = False,
              threshold: int | None = None, tau: int | None = None, b: int = 1,
              alpha: int = 2, hybrid_mu: int | None = None, direct_sum: bool = False):
    """Reference simulator; returns (assignment, {server: (open, close)}).

    Variants: first_fit, last_fit, best_fit, worst_fit, mtf, greedy,
    next_fit, mnf, mff, departure, duration, hybrid. With ``direct_sum`` the
    pool key gains the job's lowest argmax coordinate and loads are read in
    that coordinate only.
    """
    D, d = inst.denominator, inst.dimension
    servers: list[_Srv] = []
    assignment = {}
    seq = 0

    def alive(job, t):
        return job.finish >= t if arrivals_first else job.finish > t

    def load(s, t):
        v = [0] * d
        for j in s.jobs:
            if alive(j, t):
                for k, c in enumerate(j.size):
                    v[k] += c
        return v

    base = {"mnf": "next_fit", "mff": "first_fit", "departure": "first_fit",
            "duration": "first_fit", "hybrid": "first_fit"}.get(variant, variant)

    def key_of(job):
        dur = job.finish - job.arrival
        if variant in ("mnf", "mff"):
            th = threshold if threshold is not None else max(
                1, D // (inst.mu + (1 if variant == "mnf" else 7)))
            k = "large" if max(job.size) > th else "small"
        elif variant == "departure":
            k = job.finish // (tau or inst.mu)
        elif variant == "duration":
            k = 0
            while dur > b * alpha ** k:
                k += 1
        elif variant == "hybrid":
            m = hybrid_mu or inst.mu
            i = 1
            while dur > 2 ** i:
                i += 1
            cap = 1
            while 2 ** (cap - 1) < m:
                cap += 1
            i = min(i, cap)
            k = (i, job.arrival // 2 ** i)
        else:
            k = None
        if direct_sum:
            j = max(range(d), key=lambda q: (job.size[q], -q))
            return (j, k), j
        return k, None

    for job in inst.jobs:
        t = job.arrival
        for s in servers:
            if not s.dead and not any(alive(j, t) for j in s.jobs):
                s.dead = True
        key, coord = key_of(job)
        pool = [s for s in servers if not s.dead and s.key == key]

        def level(s):
            v = load(s, t)
            return max(v) if coord is None else v[coord]

        if base == "first_fit":
            order = sorted(pool, key=lambda s: (s.open, s.id))
        elif base == "last_fit":
            order = sorted(pool, key=lambda s: (-s.open, -s.id))
        elif base == "best_fit":
            order = sorted(pool, key=lambda s: (-level(s), s.open, s.id))
        elif base == "worst_fit":
            order = sorted(pool, key=lambda s: (level(s), s.open, s.id))
        elif base == "mtf":
            order = sorted(pool, key=lambda s: -s.last)
        elif base == "greedy":
            order = sorted(pool, key=lambda s: (-max(j.finish for j in s.jobs), s.open, s.id))
        elif base == "next_fit":
            order = [s for s in pool if not s.sealed]
        else:
            raise ValueError(variant)

        def fits(s):
            v = load(s, t)
            ks = range(d) if coord is None else (coord,)
            return all(v[k] + job.size[k] <= D for k in ks)

        chosen = next((s for s in order if fits(s)), None)
        if chosen is None:
            if base == "next_fit":
                for s in order:
                    s.sealed = True
            chosen = _Srv(len(servers), t)
            chosen.key = key
            servers.append(chosen)
        chosen.jobs.append(job)
        chosen.last = seq
        seq += 1
        assignment[job.id] = chosen.id
    spans = {s.id: (s.open, max(j.finish for j in s.jobs)) for s in servers}
    return assignment, spans


# -- instance generators ---------------------------------------------------------------

@st.composite
def instances(draw, d=None, max_jobs=8, max_mu=5, D=None, max_start=12, min_jobs=0):
    d = draw(st.integers(1, 3)) if d is None else d
    D = draw(st.integers(2, 12)) if D is None else D
    mu = draw(st.integers(1, max_mu))
    n = draw(st.integers(min_jobs, max_jobs))
    jobs = []
    for i in range(n):
        a = draw(st.integers(0, max_start))
        dur = draw(st.integers(1, mu))
        size = draw(st.lists(st.integers(0, D), min_size=d, max_size=d)
                    .filter(lambda v: max(v) > 0))
        jobs.append((a, dur, tuple(size)))
    jobs.sort(key=lambda x: x[0])
    return Instance(d, D, mu, tuple(Job(i, a, a + dur, s) for i, (a, dur, s) in enumerate(jobs)))


def seeded_small(seed: int, *, max_jobs: int = 7, max_mu: int = 5, dims=(1, 2),
                 D: int = 10, horizon: int = 10) -> Instance:
    """Small random instance from a numpy stream; used for the fixed corpora."""
    rng = np.random.default_rng(seed)
    d = int(rng.choice(dims))
    mu = int(rng.integers(1, max_mu + 1))
    n = int(rng.integers(1, max_jobs + 1))
    rows = []
    for _ in range(n):
        a = int(rng.integers(0, horizon))
        dur = int(rng.integers(1, mu + 1))
        size = tuple(int(x) for x in rng.integers(1, D + 1, size=d))
        rows.append((a, dur, size))
    rows.sort(key=lambda r: r[0])
    return Instance(d, D, mu, tuple(Job(i, a, a + dur, s) for i, (a, dur, s) in enumerate(rows)))


def seeded_medium(seed: int, n: int = 200, d: int = 2, mu: int = 5, T: int = 60,
                  D: int = 20) -> Instance:
    rng = np.random.default_rng(10_000 + seed)
    rows = sorted(((int(rng.integers(0, T - mu + 1)), int(rng.integers(1, mu + 1)),
                    tuple(int(x) for x in rng.integers(1, D + 1, size=d))) for _ in range(n)),
                  key=lambda r: r[0])
    return Instance(d, D, mu, tuple(Job(i, a, a + u, s) for i, (a, u, s) in enumerate(rows)))

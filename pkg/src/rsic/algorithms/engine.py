"""Online event engine and the policy catalog.

A policy is a *router* (which server pool a job goes to, and which coordinate
that pool reads) plus an *ordering* of the pool's active servers. Within a
pool the job goes to the first server of the ordering that can host it, or
to a fresh server when none can.

Each ordering has two code paths: ``order`` builds the full ordered list (used
when tracing) and ``pick`` selects straight from the feasible servers (used by
the benchmark loop). Both must agree; the test suite checks this.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..core import InternalInconsistency, Instance, Job, Schedule, ServerSpan, require_valid
from .spec import PolicySpec, resolve


class JobView(NamedTuple):
    """What a policy sees of an arriving job; ``finish`` is None unless clairvoyant."""
    id: int
    arrival: int
    size: tuple[int, ...]
    finish: int | None = None


class Server:
    __slots__ = ("id", "open", "alive", "load", "max_finish", "last_receive",
                 "job_count_total", "close", "pool")

    def __init__(self, sid: int, now: int, d: int, pool: Pool):
        self.id = sid
        self.open = now
        self.alive: set[int] = set()
        self.load = [0] * d
        self.max_finish = now
        self.last_receive = -1
        self.job_count_total = 0
        self.close: int | None = None
        self.pool = pool

    def level(self, coord: int | None) -> int:
        return max(self.load) if coord is None else self.load[coord]

    def __repr__(self) -> str:
        return f"Server({self.id}, open={self.open}, load={self.load})"


class Pool:
    """Disjoint set of servers owned by one router key."""

    __slots__ = ("key", "coord", "active", "recent", "current")

    def __init__(self, key, coord: int | None):
        self.key = key
        self.coord = coord
        self.active: list[Server] = []     # open order
        self.recent: list[Server] = []     # most recently used first
        self.current: Server | None = None  # next_fit's receive-eligible server


def _feasible(servers, lim, coord):
    if coord is not None:
        c = lim[coord]
        return [s for s in servers if s.load[coord] <= c]
    if len(lim) == 1:
        c = lim[0]
        return [s for s in servers if s.load[0] <= c]
    return [s for s in servers if all(map(int.__le__, s.load, lim))]


# -- orderings ------------------------------------------------------------------

class Ordering:
    def order(self, pool: Pool, rng) -> list[Server]:
        raise NotImplementedError

    def pick(self, pool: Pool, lim, rng) -> Server | None:
        fit = _feasible(self.order(pool, rng), lim, pool.coord)
        return fit[0] if fit else None

    def assigned(self, pool: Pool, server: Server, opened: bool) -> None:
        pass


class FirstFit(Ordering):
    def order(self, pool, rng):
        return list(pool.active)

    def pick(self, pool, lim, rng):
        fit = _feasible(pool.active, lim, pool.coord)
        return fit[0] if fit else None


class LastFit(Ordering):
    def order(self, pool, rng):
        return pool.active[::-1]

    def pick(self, pool, lim, rng):
        fit = _feasible(pool.active, lim, pool.coord)
        return fit[-1] if fit else None


class MoveToFront(Ordering):
    def order(self, pool, rng):
        return list(pool.recent)

    def pick(self, pool, lim, rng):
        fit = _feasible(pool.recent, lim, pool.coord)
        return fit[0] if fit else None

    def assigned(self, pool, server, opened):
        if not opened:
            pool.recent.remove(server)
        pool.recent.insert(0, server)


class Greedy(Ordering):
    """Latest maximum finish time first."""

    def order(self, pool, rng):
        return sorted(pool.active, key=lambda s: (-s.max_finish, s.open, s.id))

    def pick(self, pool, lim, rng):
        fit = _feasible(pool.active, lim, pool.coord)
        # max() keeps the first maximum, i.e. the earliest-opened server on ties
        return max(fit, key=lambda s: s.max_finish) if fit else None


class BestFit(Ordering):
    """Fullest first, fullness measured by the L-infinity norm of the load."""

    def order(self, pool, rng):
        c = pool.coord
        return sorted(pool.active, key=lambda s: (-s.level(c), s.open, s.id))

    def pick(self, pool, lim, rng):
        c = pool.coord
        fit = _feasible(pool.active, lim, c)
        return max(fit, key=lambda s: s.level(c)) if fit else None


class WorstFit(Ordering):
    def order(self, pool, rng):
        c = pool.coord
        return sorted(pool.active, key=lambda s: (s.level(c), s.open, s.id))

    def pick(self, pool, lim, rng):
        c = pool.coord
        fit = _feasible(pool.active, lim, c)
        return min(fit, key=lambda s: s.level(c)) if fit else None


class RandomFit(Ordering):
    def order(self, pool, rng):
        perm = rng.permutation(len(pool.active)) if pool.active else ()
        return [pool.active[i] for i in perm]


class NextFit(Ordering):
    """One receive-eligible server per pool; a failed fit seals it for good."""

    def order(self, pool, rng):
        cur = pool.current
        return [cur] if cur is not None and cur.close is None else []

    def assigned(self, pool, server, opened):
        pool.current = server


ORDERINGS = {
    "first_fit": FirstFit, "last_fit": LastFit, "mtf": MoveToFront, "greedy": Greedy,
    "best_fit": BestFit, "worst_fit": WorstFit, "random_fit": RandomFit, "next_fit": NextFit,
    "modified_next_fit": NextFit, "modified_first_fit": FirstFit,
    "departure_strategy": FirstFit, "duration_strategy": FirstFit, "hybrid": FirstFit,
}


# -- routers ----------------------------------------------------------------------

def dimension_class(size) -> int:
    """Lowest coordinate holding the largest component."""
    best = 0
    for j, c in enumerate(size):
        if c > size[best]:
            best = j
    return best


def threshold_split(spec: PolicySpec, job: JobView) -> str:
    """``large`` iff the job's largest component is strictly above the threshold."""
    if spec.variant not in ("modified_next_fit", "modified_first_fit"):
        raise ValueError(f"{spec.variant} does not split by size")
    if spec.threshold is None:
        raise ValueError("threshold unresolved; call resolve() first")
    return "large" if max(job.size) > spec.threshold else "small"


def classed_decision(spec: PolicySpec, job: JobView, now: int | None = None):
    """Class key of a job under a departure/duration/hybrid strategy."""
    if job.finish is None:
        raise ValueError("classed strategies need the finish time (clairvoyant)")
    if spec.variant == "departure_strategy":
        return job.finish // spec.tau
    dur = job.finish - job.arrival
    if spec.variant == "duration_strategy":
        i, top = 0, spec.b
        while dur > top:
            i += 1
            top *= spec.alpha
        return i
    if spec.variant == "hybrid":
        cap = (spec.mu - 1).bit_length() + 1  # ceil(log2 mu) + 1
        i = min(max(1, (dur - 1).bit_length()), cap)
        return (i, job.arrival >> i)
    raise ValueError(f"{spec.variant} is not a classed strategy")


def _router(spec: PolicySpec):
    v = spec.variant
    if v == "direct_sum":
        inner = _router(spec.inner)

        def route(job):
            j = dimension_class(job.size)
            key, _ = inner(job)
            return (j, key), j
        return route
    if v in ("modified_next_fit", "modified_first_fit"):
        return lambda job: (threshold_split(spec, job), None)
    if v in ("departure_strategy", "duration_strategy", "hybrid"):
        return lambda job: (classed_decision(spec, job), None)
    return lambda job: (None, None)


# -- trace ------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceEvent:
    tick: int
    job: int
    order: tuple[int, ...]       # routed pool's ordering just before the decision
    feasible: tuple[int, ...]    # active servers of that pool able to host the job
    chosen: int
    opened_new: bool
    active: int                  # servers alive across all pools after the decision
    pool: object = None


@dataclass(frozen=True)
class Trace:
    policy: str
    events: tuple[TraceEvent, ...]


# -- engine -----------------------------------------------------------------------

class Engine:
    """Stateful online simulation; feed jobs in arrival order.

    ``arrive`` may be given a job without a known finish time (``finish=None``)
    as long as time is not advanced past it; the adversary games rely on this.
    """

    def __init__(self, spec: PolicySpec, dimension: int, denominator: int, *,
                 trace: bool = False, name: str | None = None):
        self.spec = spec
        self.name = name or spec.name
        self.d = dimension
        self.D = denominator
        self.ordering: Ordering = ORDERINGS[spec.inner.variant if spec.variant == "direct_sum"
                                            else spec.variant]()
        self.route = _router(spec)
        self.rng = np.random.default_rng(spec.inner.seed if spec.variant == "direct_sum"
                                         else spec.seed)
        self.pools: dict = {}
        self.servers: list[Server] = []
        self.assignment: dict[int, int] = {}
        self.n_active = 0
        self.now = 0
        self._departures: list = []
        self._seq = 0
        self.events: list[TraceEvent] | None = [] if trace else None

    def advance(self, now: int, *, release_now: bool = True) -> None:
        """Move the clock to ``now`` and release every job with finish <= now.

        With ``release_now=False`` jobs finishing exactly at ``now`` stay put
        until the next call, so arrivals at ``now`` still see them.
        """
        if now < self.now:
            raise InternalInconsistency(f"time went backwards: {now} < {self.now}")
        self.now = now
        cutoff = now if release_now else now - 1
        heap = self._departures
        while heap and heap[0][0] <= cutoff:
            f, _, jid, size, server = heapq.heappop(heap)
            server.alive.remove(jid)
            load = server.load
            for k, c in enumerate(size):
                load[k] -= c
            if not server.alive:
                server.close = server.max_finish
                pool = server.pool
                pool.active.remove(server)
                if server in pool.recent:
                    pool.recent.remove(server)
                if pool.current is server:
                    pool.current = None
                self.n_active -= 1

    def arrive(self, job: Job | JobView, finish: int | None = None) -> int:
        """Place one job arriving at the current tick; returns its server id."""
        if isinstance(job, Job):
            finish = job.finish
        size = tuple(job.size)
        if finish is not None and finish <= self.now:
            raise InternalInconsistency(f"job {job.id} finishes before it is placed")
        view = JobView(job.id, job.arrival, size,
                       finish if self.spec.clairvoyant else None)
        key, coord = self.route(view)
        pool = self.pools.get(key)
        if pool is None:
            pool = self.pools[key] = Pool(key, coord)
        lim = [self.D - c for c in size]
        if min(lim) < 0:
            raise InternalInconsistency(f"job {job.id} exceeds an empty server")

        if self.events is None:
            server = self.ordering.pick(pool, lim, self.rng)
            order = feasible = None
        else:
            order = self.ordering.order(pool, self.rng)
            server = next(iter(_feasible(order, lim, coord)), None)
            feasible = _feasible(pool.active, lim, coord)

        opened = server is None
        if opened:
            server = Server(len(self.servers), self.now, self.d, pool)
            self.servers.append(server)
            pool.active.append(server)
            self.n_active += 1
        server.alive.add(job.id)
        for k, c in enumerate(size):
            server.load[k] += c
        server.job_count_total += 1
        server.last_receive = self._seq
        self._seq += 1
        if finish is not None:
            if finish > server.max_finish:
                server.max_finish = finish
            heapq.heappush(self._departures, (finish, self._seq, job.id, size, server))
        self.ordering.assigned(pool, server, opened)
        self.assignment[job.id] = server.id

        if self.events is not None:
            self.events.append(TraceEvent(
                self.now, job.id, tuple(s.id for s in order),
                tuple(s.id for s in feasible), server.id, opened, self.n_active, key))
        return server.id

    def schedule(self) -> Schedule:
        """Drain all departures and return the finished schedule."""
        if self._departures:
            self.advance(max(f for f, *_ in self._departures))
        spans = []
        for s in self.servers:
            if s.close is None:
                raise InternalInconsistency(f"server {s.id} never closed")
            spans.append(ServerSpan(s.id, s.open, s.close))
        return Schedule(dict(self.assignment), tuple(spans),
                        sum(sp.cost for sp in spans), self.name)

    def trace(self) -> Trace:
        return Trace(self.name, tuple(self.events or ()))


def run_policy(inst: Instance, policy: PolicySpec, *, trace: bool = True,
               check: bool = True, arrivals_first: bool = False) -> tuple[Schedule, Trace | None]:
    """Run one policy over an instance.

    By default departures with finish <= t are processed before arrivals at
    t. ``arrivals_first=True`` places arrivals at t while jobs finishing at t
    still hold their capacity (the tick order behind the published tables).
    Arrivals at the same tick are placed in input order. With ``trace=False``
    the faster selection path is used and no Trace is returned.
    """
    if check:
        require_valid(inst)
    eng = Engine(resolve(policy, inst), inst.dimension, inst.denominator,
                 trace=trace, name=policy.name)
    release_now = not arrivals_first
    for job in inst.jobs:
        if job.arrival != eng.now:
            eng.advance(job.arrival, release_now=release_now)
        eng.arrive(job)
    return eng.schedule(), (eng.trace() if trace else None)


def policy_order(spec: PolicySpec, pool: Pool, rng=None) -> list[int]:
    """Server ids of one pool in the policy's current order."""
    variant = spec.inner.variant if spec.variant == "direct_sum" else spec.variant
    return [s.id for s in ORDERINGS[variant]().order(pool, rng)]


def anyfit_decision(order, job_size, denominator: int, coord: int | None = None):
    """First server of ``order`` (objects with ``.id``/``.load``) that fits, else None."""
    lim = [denominator - c for c in job_size]
    fit = _feasible(order, lim, coord)
    return fit[0].id if fit else None

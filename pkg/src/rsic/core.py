"""Exact domain types for d-dimensional server renting.

Sizes are integer vectors over a per-instance denominator ``D``: a component
``c`` means ``c / D`` of a server's capacity in that dimension. Time is in
integer ticks and a job occupies the half-open interval ``[arrival, finish)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

FORMAT_VERSION = 1

SizeVec = tuple[int, ...]


@dataclass(frozen=True)
class Job:
    id: int
    arrival: int
    finish: int
    size: SizeVec

    @property
    def duration(self) -> int:
        return self.finish - self.arrival

    @property
    def peak(self) -> int:
        """Largest size component (the L-infinity norm, times D)."""
        return max(self.size) if self.size else 0


@dataclass(frozen=True)
class Instance:
    dimension: int
    denominator: int
    mu: int
    jobs: tuple[Job, ...] = ()

    @classmethod
    def build(cls, dimension: int, denominator: int, mu: int,
              jobs: Iterable[tuple[int, int, Sequence[int]] | Job]) -> Instance:
        """Build from ``(arrival, finish, size)`` triples or Jobs.

        Triples get ids in input order. Jobs are stably sorted by arrival.
        """
        out = []
        for i, j in enumerate(jobs):
            if isinstance(j, Job):
                out.append(Job(j.id, j.arrival, j.finish, tuple(j.size)))
            else:
                a, f, s = j
                out.append(Job(i, a, f, tuple(s)))
        out.sort(key=lambda job: job.arrival)
        return cls(dimension, denominator, mu, tuple(out))

    def __len__(self) -> int:
        return len(self.jobs)


@dataclass(frozen=True)
class Violation:
    rule: str
    job: int | None = None
    server: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        where = []
        if self.job is not None:
            where.append(f"job {self.job}")
        if self.server is not None:
            where.append(f"server {self.server}")
        loc = f" ({', '.join(where)})" if where else ""
        return f"{self.rule}{loc}{': ' + self.detail if self.detail else ''}"


class InvalidInstance(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class InternalInconsistency(RuntimeError):
    """A state the model rules out was reached (a bug, not bad input)."""


def validate_instance(inst: Instance) -> list[Violation]:
    """Return every broken instance rule; an empty list means valid."""
    out: list[Violation] = []
    D, d = inst.denominator, inst.dimension
    if d < 1:
        out.append(Violation("bad dimension", detail=f"d={d}"))
    if D < 1:
        out.append(Violation("bad denominator", detail=f"D={D}"))
    if inst.mu < 1:
        out.append(Violation("bad mu", detail=f"mu={inst.mu}"))
    seen: set[int] = set()
    prev = None
    for job in inst.jobs:
        if job.id in seen:
            out.append(Violation("duplicate job id", job.id))
        seen.add(job.id)
        if prev is not None and job.arrival < prev:
            out.append(Violation("unsorted arrivals", job.id,
                                 detail=f"arrival {job.arrival} after {prev}"))
        prev = job.arrival
        if job.arrival < 0:
            out.append(Violation("negative arrival", job.id))
        if not 1 <= job.duration <= inst.mu:
            out.append(Violation("duration out of range", job.id,
                                 detail=f"{job.duration} not in [1, {inst.mu}]"))
        if len(job.size) != d:
            out.append(Violation("dimension mismatch", job.id,
                                 detail=f"size has {len(job.size)} components, d={d}"))
        bad = [c for c in job.size if not 0 <= c <= D]
        if bad:
            out.append(Violation("size component out of range", job.id,
                                 detail=f"{bad[0]} not in [0, {D}]"))
        elif not any(job.size):
            out.append(Violation("zero size vector", job.id))
    return out


def require_valid(inst: Instance) -> Instance:
    bad = validate_instance(inst)
    if bad:
        raise InvalidInstance(bad)
    return inst


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    load: SizeVec

    @property
    def length(self) -> int:
        return self.end - self.start


def _sweep(jobs: Iterable[Job], d: int) -> list[Segment]:
    deltas: dict[int, list[int]] = {}
    for job in jobs:
        up = deltas.setdefault(job.arrival, [0] * (d + 1))
        down = deltas.setdefault(job.finish, [0] * (d + 1))
        up[d] += 1
        down[d] -= 1
        for k, c in enumerate(job.size):
            up[k] += c
            down[k] -= c
    ticks = sorted(deltas)
    load = [0] * (d + 1)
    segments = []
    for t, nxt in zip(ticks, ticks[1:]):
        load = [x + y for x, y in zip(load, deltas[t])]
        if load[d] > 0:
            segments.append(Segment(t, nxt, tuple(load[:d])))
    return segments


def load_profile(inst: Instance) -> list[Segment]:
    """Piecewise-constant total load over the union of job intervals.

    One segment per pair of consecutive distinct event ticks with at least
    one alive job; gaps with nothing alive are skipped.
    """
    return _sweep(inst.jobs, inst.dimension)


def span(inst: Instance) -> int:
    return sum(seg.length for seg in load_profile(inst))


def utilization(inst: Instance) -> Fraction:
    return Fraction(sum(j.duration * j.peak for j in inst.jobs), inst.denominator)


@dataclass(frozen=True)
class ServerSpan:
    id: int
    open: int
    close: int

    @property
    def cost(self) -> int:
        return self.close - self.open


@dataclass(frozen=True)
class Schedule:
    assignment: Mapping[int, int]
    servers: tuple[ServerSpan, ...]
    total_cost: int
    policy: str = ""

    @classmethod
    def from_groups(cls, inst: Instance, assignment: Mapping[int, int],
                    policy: str = "") -> Schedule:
        """Derive server windows and cost from a job -> server map."""
        by_id = {j.id: j for j in inst.jobs}
        windows: dict[int, list[int]] = {}
        for jid, sid in assignment.items():
            job = by_id[jid]
            w = windows.setdefault(sid, [job.arrival, job.finish])
            w[0] = min(w[0], job.arrival)
            w[1] = max(w[1], job.finish)
        servers = tuple(sorted((ServerSpan(s, o, c) for s, (o, c) in windows.items()),
                               key=lambda s: (s.open, s.id)))
        return cls(dict(assignment), servers, sum(s.cost for s in servers), policy)


def schedule_cost(sched: Schedule) -> int:
    return sum(s.close - s.open for s in sched.servers)


def verify_schedule(inst: Instance, sched: Schedule, *,
                    arrivals_first: bool = False) -> list[Violation]:
    """Check feasibility and costing of a schedule; empty list means ok.

    ``arrivals_first`` audits schedules built with that tick order: a job
    also holds capacity at its finish tick, and a server may take a job
    arriving exactly when its previous jobs finish.
    """
    out: list[Violation] = []
    D = inst.denominator
    by_id = {j.id: j for j in inst.jobs}
    spans: dict[int, ServerSpan] = {}
    for s in sched.servers:
        if s.id in spans:
            out.append(Violation("duplicate server id", server=s.id))
        spans[s.id] = s
        if s.close <= s.open:
            out.append(Violation("empty server window", server=s.id,
                                 detail=f"[{s.open}, {s.close})"))
    for jid in sched.assignment:
        if jid not in by_id:
            out.append(Violation("unknown job", jid))
    members: dict[int, list[Job]] = {sid: [] for sid in spans}
    if arrivals_first:
        bounds = sorted({2 * j.arrival for j in inst.jobs} | {2 * j.finish + 1 for j in inst.jobs})
    else:
        bounds = sorted({j.arrival for j in inst.jobs} | {j.finish for j in inst.jobs})
    for job in inst.jobs:
        sid = sched.assignment.get(job.id)
        if sid is None:
            out.append(Violation("job unassigned", job.id))
        elif sid not in spans:
            out.append(Violation("job assigned to unknown server", job.id, sid))
        else:
            members[sid].append(job)

    for sid, jobs in members.items():
        s = spans[sid]
        if not jobs:
            out.append(Violation("server without jobs", server=sid))
            continue
        for job in jobs:
            if job.arrival < s.open or job.finish > s.close:
                out.append(Violation("job outside server window", job.id, sid,
                                     f"[{job.arrival}, {job.finish}) vs [{s.open}, {s.close})"))
        first = min(j.arrival for j in jobs)
        last = max(j.finish for j in jobs)
        if (first, last) != (s.open, s.close):
            out.append(Violation("server window mismatch", server=sid,
                                 detail=f"jobs span [{first}, {last}), declared [{s.open}, {s.close})"))
        reach = None
        for job in sorted(jobs, key=lambda j: (j.arrival, j.id)):
            if reach is not None and (job.arrival > reach or
                                      (job.arrival == reach and not arrivals_first)):
                out.append(Violation("server not contiguous", job.id, sid,
                                     f"server emptied at {reach}, job arrives at {job.arrival}"))
            reach = job.finish if reach is None else max(reach, job.finish)
        if arrivals_first:
            # occupancy [a, f] as [2a, 2f + 1) on a doubled clock
            jobs = [Job(j.id, 2 * j.arrival, 2 * j.finish + 1, j.size) for j in jobs]
        for seg in _sweep(jobs, inst.dimension):
            over = [(k, c) for k, c in enumerate(seg.load) if c > D]
            if not over:
                continue
            # report on the instance's own profile segments
            cuts = [seg.start] + [t for t in bounds if seg.start < t < seg.end] + [seg.end]
            for lo, hi in zip(cuts, cuts[1:]):
                if arrivals_first:
                    lo, hi = lo // 2, (hi + 1) // 2
                for k, c in over:
                    out.append(Violation(
                        "capacity exceeded", server=sid,
                        detail=f"segment [{lo}, {hi}) dimension {k + 1}: {c} > {D}"))

    if sched.total_cost != schedule_cost(sched):
        out.append(Violation("cost mismatch",
                             detail=f"declared {sched.total_cost}, servers sum to {schedule_cost(sched)}"))
    return out


# -- JSON files ---------------------------------------------------------------

def instance_to_dict(inst: Instance, metadata: Mapping | None = None) -> dict:
    jobs = sorted(inst.jobs, key=lambda j: (j.arrival, j.id))
    doc = {
        "version": FORMAT_VERSION,
        "dimension": inst.dimension,
        "denominator": inst.denominator,
        "mu": inst.mu,
        "jobs": [{"id": j.id, "arrival": j.arrival, "finish": j.finish, "size": list(j.size)}
                 for j in jobs],
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def instance_from_dict(doc: Mapping) -> Instance:
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported instance version {doc.get('version')!r}")
    try:
        jobs = tuple(Job(int(j["id"]), int(j["arrival"]), int(j["finish"]),
                         tuple(int(c) for c in j["size"])) for j in doc["jobs"])
        return Instance(int(doc["dimension"]), int(doc["denominator"]), int(doc["mu"]), jobs)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instance document: {exc!r}") from exc


def schedule_to_dict(sched: Schedule) -> dict:
    return {
        "version": FORMAT_VERSION,
        "policy": sched.policy,
        "total_cost": sched.total_cost,
        "assignment": [{"job": j, "server": s} for j, s in sorted(sched.assignment.items())],
        "servers": [{"id": s.id, "open": s.open, "close": s.close}
                    for s in sorted(sched.servers, key=lambda s: (s.open, s.id))],
    }


def schedule_from_dict(doc: Mapping) -> Schedule:
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported schedule version {doc.get('version')!r}")
    try:
        assignment = {int(a["job"]): int(a["server"]) for a in doc["assignment"]}
        servers = tuple(ServerSpan(int(s["id"]), int(s["open"]), int(s["close"]))
                        for s in doc["servers"])
        return Schedule(assignment, servers, int(doc["total_cost"]), str(doc.get("policy", "")))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed schedule document: {exc!r}") from exc


def dump_json(doc: Mapping, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return instance_from_dict(json.load(fh))


def load_schedule(path) -> Schedule:
    with open(path, encoding="utf-8") as fh:
        return schedule_from_dict(json.load(fh))


EXAMPLE_1 = Instance.build(2, 10, 6, [
    (0, 6, (5, 2)),
    (1, 4, (2, 9)),
    (3, 9, (2, 3)),
    (5, 8, (6, 1)),
])
"""Four-job, two-dimensional worked example scaled to D=10 (sizes in tenths)."""

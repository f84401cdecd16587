"""Trace audits: the AnyFit rule, the monotone ordering property, and the
per-tick server-count bound for monotone AnyFit policies."""

from __future__ import annotations

from dataclasses import dataclass

from ..bounds import ArrivalMass
from ..core import Instance
from .engine import Trace, TraceEvent


@dataclass(frozen=True)
class TraceViolation:
    rule: str
    event: int
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.rule} at event {self.event}: {self.detail}"


def check_anyfit(trace: Trace, inst: Instance | None = None) -> list[TraceViolation]:
    """A new server may only open when no active server of the pool could host the job."""
    out = []
    for i, ev in enumerate(trace.events):
        if ev.opened_new and ev.feasible:
            out.append(TraceViolation("opened while feasible", i,
                                      f"job {ev.job} opened server {ev.chosen}, "
                                      f"feasible {list(ev.feasible)}"))
        elif not ev.opened_new and ev.chosen not in ev.feasible:
            out.append(TraceViolation("infeasible choice", i, f"job {ev.job} -> {ev.chosen}"))
    return out


def check_monotone(trace: Trace) -> list[TraceViolation]:
    """Servers that receive nothing may not be overtaken by servers they outranked.

    Checking consecutive snapshots of the same pool suffices: servers never
    reopen, so a violation across a longer interval shows up in some step.
    """
    out = []
    last: dict = {}
    for i, ev in enumerate(trace.events):
        prev = last.get(ev.pool)
        if prev is not None:
            j, before = prev
            receivers = {e.chosen for e in trace.events[j:i] if e.pool == ev.pool}
            pos_now = {sid: p for p, sid in enumerate(ev.order)}
            survivors = [sid for sid in before.order if sid in pos_now]
            for a, s in enumerate(survivors):
                if s in receivers:
                    continue
                for x in survivors[:a]:
                    if pos_now[x] > pos_now[s]:
                        out.append(TraceViolation(
                            "ordering not monotone", i,
                            f"server {x} was above idle server {s} at tick {before.tick}, "
                            f"below it at tick {ev.tick}"))
        last[ev.pool] = (i, ev)
    return out


def check_count_bound(trace: Trace, inst: Instance) -> list[TraceViolation]:
    """Active servers after each decision at tick t are at most
    s_inf(t - 2mu, t) + s_inf(t - mu, t) + 1, taking the window values just
    after t (arrivals at t included), in exact integer arithmetic over D."""
    mass = ArrivalMass(inst)
    D, mu = inst.denominator, inst.mu
    out = []
    for i, ev in enumerate(trace.events):
        rhs = mass.trailing(ev.tick, 2 * mu) + mass.trailing(ev.tick, mu) + D
        if ev.active * D > rhs:
            out.append(TraceViolation("server count above bound", i,
                                      f"{ev.active} servers at tick {ev.tick}, bound {rhs}/{D}"))
    return out

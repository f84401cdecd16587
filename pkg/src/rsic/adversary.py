"""Lower-bound games played against an online policy.

The deterministic game adapts the online graph-coloring adversary: with
``2k`` adversary servers and ``d' = C(2k, k) * k`` jobs, each job is a unit
spike in its own coordinate plus ``1/d'`` entries that make it collide with
every earlier job the adversary kept off the chosen k-subset. The policy
ends up with bins of at most k jobs, so at least d'/k bins, while the
adversary packs everything into 2k servers. Durations are revealed last:
jobs of the adversary server spread over the most bins run for mu ticks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from decimal import Decimal

import numpy as np

from .algorithms.engine import Engine, JobView
from .algorithms.spec import PolicySpec, resolve
from .core import (InternalInconsistency, Instance, Job, Schedule, instance_to_dict,
                   schedule_to_dict, verify_schedule)
from .algorithms import run_policy
from .bounds import ratio_of_averages


@dataclass(frozen=True)
class AdversaryResult:
    k: int
    d_prime: int
    mu: int
    policy: str
    clairvoyant: bool
    instance: Instance
    alg_schedule: Schedule
    adv_schedule: Schedule
    alg_bin_count: int
    adv_server_count: int
    empirical_ratio: Decimal
    bin_sizes: tuple[int, ...] = field(default=(), repr=False)

    def to_dict(self, embed: bool = False) -> dict:
        doc = {
            "k": self.k, "d_prime": self.d_prime, "mu": self.mu, "policy": self.policy,
            "alg_cost": self.alg_schedule.total_cost, "adv_cost": self.adv_schedule.total_cost,
            "alg_bins": self.alg_bin_count, "adv_servers": self.adv_server_count,
            "ratio": str(self.empirical_ratio),
        }
        if embed:
            doc["instance"] = instance_to_dict(self.instance)
            doc["alg_schedule"] = schedule_to_dict(self.alg_schedule)
            doc["adv_schedule"] = schedule_to_dict(self.adv_schedule)
        return doc


def d_prime(k: int) -> int:
    return math.comb(2 * k, k) * k


def _spike(i: int, dim: int, outside: list[int]) -> tuple[int, ...]:
    """Size of job i: full in coordinate i, 1/dim in each listed earlier coordinate."""
    size = [0] * dim
    size[i] = dim
    for j in outside:
        size[j] = 1
    return tuple(size)


def _finish_game(k, mu, policy, clairvoyant, sizes, adv_of, durations, interactive):
    dim = len(sizes)
    jobs = tuple(Job(i, 0, durations[i], sizes[i]) for i in range(dim))
    inst = Instance(dim, dim, mu, jobs)
    alg, _ = run_policy(inst, policy, trace=False)
    if alg.assignment != interactive:
        raise InternalInconsistency("policy replay diverged from the interactive game")
    adv = Schedule.from_groups(inst, {i: adv_of[i] for i in range(dim)}, "adversary")
    bad = verify_schedule(inst, adv)
    if bad:
        raise InternalInconsistency(f"adversary schedule infeasible: {bad[0]}")
    counts: dict[int, int] = {}
    for sid in alg.assignment.values():
        counts[sid] = counts.get(sid, 0) + 1
    return AdversaryResult(
        k=k, d_prime=dim, mu=mu, policy=policy.name, clairvoyant=clairvoyant,
        instance=inst, alg_schedule=alg, adv_schedule=adv,
        alg_bin_count=len(alg.servers), adv_server_count=len(adv.servers),
        empirical_ratio=ratio_of_averages([alg.total_cost], [adv.total_cost], places=4),
        bin_sizes=tuple(counts[s] for s in sorted(counts)))


def run_deterministic_adversary(k: int, mu: int, policy: PolicySpec) -> AdversaryResult:
    """Play the adaptive construction live against ``policy``.

    All jobs arrive at tick 0 in round order. Subsets are taken in
    lexicographic order. The adversary's own server for job i is chosen once
    the policy has placed it: the least loaded member of A_i not already used
    by a job in the same policy bin (lowest id on ties). Choosing blindly
    before the policy moves can put two jobs of one adversary server in the
    same bin, and then that bin keeps growing past k.
    A clairvoyant policy sees every job with duration 1 and no stretching
    happens.
    """
    if k < 1 or mu < 1:
        raise ValueError("need k >= 1 and mu >= 1")
    dim = d_prime(k)
    servers = range(2 * k)
    subsets = list(itertools.combinations(servers, k))
    clairvoyant = policy.clairvoyant
    probe = Instance(dim, dim, mu)
    eng = Engine(resolve(policy, probe), dim, dim, name=policy.name)

    adv_of: list[int] = []
    adv_load = [0] * (2 * k)
    sizes: list[tuple[int, ...]] = []
    members: dict[int, list[int]] = {}  # policy bin -> job indices
    for i in range(dim):
        full = {frozenset(adv_of[j] for j in jobs) for jobs in members.values() if len(jobs) == k}
        chosen = next((a for a in subsets if frozenset(a) not in full), None)
        if chosen is None:
            raise InternalInconsistency(f"no admissible subset left at round {i + 1}")
        inside = set(chosen)
        size = _spike(i, dim, [j for j in range(i) if adv_of[j] not in inside])
        sizes.append(size)
        # durations are unknown during play; a clairvoyant policy is told 1
        bin_id = eng.arrive(JobView(i, 0, size), 1 if clairvoyant else None)
        jobs = members.setdefault(bin_id, [])
        if len(jobs) >= k:
            raise InternalInconsistency(f"policy bin {bin_id} would hold more than {k} jobs")
        # Placing after the policy commits keeps the servers inside each bin
        # distinct; any member of A_i is capacity-safe for the adversary.
        taken = {adv_of[j] for j in jobs}
        free = [q for q in chosen if q not in taken]
        if not free:
            raise InternalInconsistency(f"no adversary server left for job {i}")
        target = min(free, key=lambda q: (adv_load[q], q))
        adv_of.append(target)
        adv_load[target] += 1
        jobs.append(i)

    # the adversary server whose jobs touch the most policy bins gets duration mu
    bin_of = {j: b for b, jobs in members.items() for j in jobs}
    spread = [len({bin_of[j] for j in range(dim) if adv_of[j] == q}) for q in servers]
    stretched = max(servers, key=lambda q: (spread[q], -q))
    durations = [1 if clairvoyant or adv_of[i] != stretched else mu for i in range(dim)]
    return _finish_game(k, mu, policy, clairvoyant, sizes, adv_of, durations, bin_of)


def run_randomized_dd(k: int, mu: int, seed: int, policy: PolicySpec) -> AdversaryResult:
    """Oblivious randomized variant: random k-subsets, random placement inside
    the subset, and duration mu exactly for jobs placed on a server drawn up
    front. None of the coin flips look at the policy's decisions."""
    if k < 1 or mu < 1:
        raise ValueError("need k >= 1 and mu >= 1")
    rng = np.random.default_rng(seed)
    dim = d_prime(k)
    clairvoyant = policy.clairvoyant
    marked = int(rng.integers(2 * k))
    probe = Instance(dim, dim, mu)
    eng = Engine(resolve(policy, probe), dim, dim, name=policy.name)

    adv_of: list[int] = []
    sizes = []
    durations = []
    bin_of: dict[int, int] = {}
    for i in range(dim):
        inside = sorted(int(x) for x in rng.choice(2 * k, size=k, replace=False))
        target = inside[int(rng.integers(k))]
        size = _spike(i, dim, [j for j in range(i) if adv_of[j] not in inside])
        dur = 1 if clairvoyant or target != marked else mu
        adv_of.append(target)
        sizes.append(size)
        durations.append(dur)
        bin_of[i] = eng.arrive(JobView(i, 0, size), dur if clairvoyant else None)
    return _finish_game(k, mu, policy, clairvoyant, sizes, adv_of, durations, bin_of)


def sample_randomized_1d(k: int, mu: int, seed) -> Instance:
    """k^2 jobs of size 1/k at tick 0; a uniform k-subset runs for mu, the rest for 1."""
    if k < 2 or mu < 1:
        raise ValueError("need k >= 2 and mu >= 1")
    rng = np.random.default_rng(seed)
    long = set(int(x) for x in rng.choice(k * k, size=k, replace=False))
    jobs = tuple(Job(i, 0, mu if i in long else 1, (1,)) for i in range(k * k))
    return Instance(1, k, mu, jobs)


def randomized_1d_bound(k: int, mu: int) -> float:
    """Expected-cost floor mu * (k/2 - 1) * (1 - 1/e) for any deterministic policy."""
    return mu * (k / 2 - 1) * (1 - math.exp(-1))

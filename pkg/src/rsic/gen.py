"""Seeded random instances and the identity lifting of 1-d instances."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import Instance, Job

GENERATOR = "numpy-pcg64/integers-rowmajor(arrival,duration,size[0..d-1])"


@dataclass(frozen=True)
class GenParams:
    d: int
    n: int
    T: int
    mu: int
    E: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.d < 1 or self.n < 1 or self.E < 1 or self.mu < 1:
            raise ValueError(f"invalid generator parameters {self}")
        if self.T <= self.mu:
            raise ValueError(f"need T > mu, got T={self.T}, mu={self.mu}")

    def metadata(self) -> dict:
        return {"generator": GENERATOR, "params": asdict(self)}


def uniform_instance(p: GenParams) -> Instance:
    """n jobs with arrival ~ U{0..T-mu}, duration ~ U{1..mu}, sizes ~ U{1..E}^d.

    One row of draws per job, in the order arrival, duration, size
    components; jobs are then stably sorted by arrival and keep their draw
    index as id.
    """
    rng = np.random.default_rng(p.seed)
    low = [0, 1] + [1] * p.d
    high = [p.T - p.mu + 1, p.mu + 1] + [p.E + 1] * p.d
    draws = rng.integers(low, high, size=(p.n, 2 + p.d), dtype=np.int64).tolist()
    jobs = [Job(i, row[0], row[0] + row[1], tuple(row[2:])) for i, row in enumerate(draws)]
    jobs.sort(key=lambda j: j.arrival)
    return Instance(p.d, p.E, p.mu, tuple(jobs))


def lift_identity(h: Instance, d: int) -> Instance:
    """Replace each 1-d job by d copies, copy j carrying the size in coordinate j only."""
    if h.dimension != 1:
        raise ValueError("lift_identity needs a 1-dimensional instance")
    if d < 1:
        raise ValueError("d must be >= 1")
    jobs = []
    for job in h.jobs:
        for j in range(d):
            size = [0] * d
            size[j] = job.size[0]
            jobs.append(Job(job.id * d + j, job.arrival, job.finish, tuple(size)))
    return Instance(d, h.denominator, h.mu, tuple(jobs))

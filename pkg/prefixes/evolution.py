"""
Evolutionary prefix optimisation.

Individuals are channel permutations; an individual ``pi`` stands for the
prefix ``untangle(permute_channels(P, pi))``. Fitness is the sum of window
sizes over a sample of distinct prefix outputs, taken worst window first, so
lower is better. The scheme is a (mu + lambda) strategy whose only variation
operator is a random transposition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError

from core.conf import sortnet_setting
from networks.simulation import check_limit, distinct_outputs, window_sizes
from networks.transform import permute_channels, untangle

from .prefix import Prefix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EaConfig:
    sample_size: int = 800
    population: int = 20
    offspring: int = 40
    generations: int = 200
    mutation_rate: float = 0.2
    seed: int = 0

    def __post_init__(self):
        for name in ("sample_size", "population", "offspring", "generations"):
            if getattr(self, name) < 1:
                raise ValidationError(f"EA setting {name} must be positive", code="invalid")
        if not 0.0 <= self.mutation_rate < 1.0:
            raise ValidationError("EA mutation_rate must be in [0, 1)", code="invalid")

    @classmethod
    def from_settings(cls, **overrides):
        ea = sortnet_setting("EA")
        values = {
            "sample_size": ea["SAMPLE_SIZE"],
            "population": ea["POPULATION"],
            "offspring": ea["OFFSPRING"],
            "generations": ea["GENERATIONS"],
            "mutation_rate": ea["MUTATION_RATE"],
            "seed": ea["SEED"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class EaResult:
    prefix: Prefix
    permutation: tuple
    fitness_before: int
    fitness_after: int
    evaluations: int


def prefix_fitness(net, sample_size):
    """
    Sum of window sizes of the ``sample_size`` distinct outputs of ``net``
    with the largest windows (all outputs if there are fewer).
    """
    sizes = window_sizes(distinct_outputs(net), net.channels)
    if sample_size >= sizes.size:
        return int(sizes.sum())
    return int(np.sort(sizes)[::-1][:sample_size].sum())


def _transpose(perm, rng):
    i, j = rng.choice(len(perm), size=2, replace=False)
    perm = list(perm)
    perm[i], perm[j] = perm[j], perm[i]
    return tuple(perm)


def evolve(prefix, cfg=None):
    """Run the strategy; deterministic for a given ``cfg.seed``."""
    cfg = cfg or EaConfig.from_settings()
    net = prefix.network
    check_limit(net.channels)
    n = net.channels
    identity = tuple(range(1, n + 1))
    cache = {}

    def fitness(perm):
        if perm not in cache:
            cache[perm] = prefix_fitness(untangle(permute_channels(net, perm)), cfg.sample_size)
        return cache[perm]

    before = fitness(identity)
    if n < 2:
        return EaResult(prefix, identity, before, before, len(cache))

    seeds = np.random.SeedSequence(cfg.seed)
    init_rng = np.random.default_rng(seeds.spawn(1)[0])
    population = [identity]
    while len(population) < cfg.population:
        population.append(tuple(int(v) + 1 for v in init_rng.permutation(n)))
    population.sort(key=lambda perm: (fitness(perm), perm))

    for generation in range(cfg.generations):
        streams = seeds.spawn(cfg.offspring)
        children = []
        for stream in streams:
            rng = np.random.default_rng(stream)
            child = _transpose(population[int(rng.integers(len(population)))], rng)
            while rng.random() < cfg.mutation_rate:
                child = _transpose(child, rng)
            children.append(child)
        pool = sorted(set(population) | set(children), key=lambda perm: (fitness(perm), perm))
        population = pool[: cfg.population]
        logger.debug("generation %d: best fitness %d", generation + 1, fitness(population[0]))

    best = population[0]
    after = fitness(best)
    if after >= before:
        return EaResult(prefix, identity, before, before, len(cache))
    optimized = Prefix(untangle(permute_channels(net, best)), "optimized")
    logger.info("prefix fitness %d -> %d after %d evaluations", before, after, len(cache))
    return EaResult(optimized, best, before, after, len(cache))


def optimize_prefix(prefix, cfg=None):
    return evolve(prefix, cfg).prefix

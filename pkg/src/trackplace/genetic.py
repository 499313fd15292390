"""Genetic refinement of placements.

Chromosomes are track orders (permutations of variable indices); fitness is
the negative shift cost, so selection minimizes cost.  The population is
seeded with heuristic placements and topped up with random permutations,
then evolved with tournament selection, order crossover, swap mutation, and
elitism.  Everything is driven by one seeded generator, so a fixed seed
reproduces the run exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import AccessGraph, Placement, total_cost_via_graph
from .errors import DomainError
from .heuristics import assign_offsets

__all__ = ["GaConfig", "Chromosome", "ga_refine"]


@dataclass(frozen=True)
class GaConfig:
    """Knobs of the genetic search.

    ``generations=None`` scales the budget with the instance:
    ``100 * ceil(log2(n + 1))``, capped at 2000.  The run also stops early
    once ``stagnation_limit`` generations pass without improving the best
    cost seen so far.
    """

    population_size: int = 30
    generations: int | None = None
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1
    elite_count: int = 2
    tournament_size: int = 2
    stagnation_limit: int = 200
    rng_seed: int = 0

    def __post_init__(self):
        if self.population_size < 1:
            raise DomainError("population_size must be positive")
        if not 0 <= self.crossover_rate <= 1:
            raise DomainError("crossover_rate must lie in [0, 1]")
        if not 0 <= self.mutation_rate <= 1:
            raise DomainError("mutation_rate must lie in [0, 1]")
        if not 0 <= self.elite_count < self.population_size:
            raise DomainError("elite_count must be smaller than the population")
        if self.tournament_size < 1:
            raise DomainError("tournament_size must be positive")
        if self.generations is not None and self.generations < 0:
            raise DomainError("generations must be non-negative")

    def budget_for(self, n: int) -> int:
        if self.generations is not None:
            return self.generations
        return min(2000, 100 * math.ceil(math.log2(n + 1)))


@dataclass(frozen=True)
class Chromosome:
    """A candidate track order with its evaluated shift cost."""

    order: np.ndarray
    cost: int

    def __post_init__(self):
        arr = np.array(self.order, dtype=np.int64, copy=True)
        if not np.array_equal(np.sort(arr), np.arange(arr.size)):
            raise DomainError("chromosome order must be a permutation")
        arr.setflags(write=False)
        object.__setattr__(self, "order", arr)
        if self.cost < 0:
            raise DomainError("cost must be non-negative")

    @classmethod
    def evaluate(cls, g: AccessGraph, order: Sequence) -> "Chromosome":
        placement = assign_offsets(order)
        return cls(placement.order(), total_cost_via_graph(placement, g))


def _order_crossover(p1: np.ndarray, p2: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Order crossover: keep a slice of one parent, fill from the other.

    The slice [i, j] of ``p1`` is copied verbatim; the remaining positions
    are filled with ``p2``'s genes in ``p2`` order, scanning circularly from
    just past the slice.  Always yields a valid permutation.
    """
    n = len(p1)
    i, j = sorted(rng.integers(0, n, size=2))
    child = np.full(n, -1, dtype=np.int64)
    child[i:j + 1] = p1[i:j + 1]
    taken = np.zeros(n, dtype=bool)
    taken[p1[i:j + 1]] = True
    fill = [int(v) for v in np.roll(p2, -(j + 1)) if not taken[v]]
    positions = list(range(j + 1, n)) + list(range(i))
    for pos, v in zip(positions, fill):
        child[pos] = v
    return child


def _tournament(costs: np.ndarray, rng: np.random.Generator, k: int) -> int:
    """Index of the cheapest of k uniformly drawn population members."""
    contenders = rng.integers(0, len(costs), size=k)
    return int(contenders[np.argmin(costs[contenders])])


def ga_refine(
    g: AccessGraph,
    seeds: Sequence[Placement] = (),
    cfg: GaConfig | None = None,
    on_generation: Callable[[int, int], None] | None = None,
) -> Placement:
    """Evolve a placement starting from heuristic seeds.

    Seeds join the initial population unchanged, so the result never costs
    more than the best seed.  ``on_generation`` is called after every
    generation with ``(generation_index, best_cost_so_far)``; the reported
    cost is non-increasing.  Returns the best placement ever seen.
    """
    cfg = cfg or GaConfig()
    n = g.n
    for s in seeds:
        if s.n != n:
            raise DomainError("seed placement size does not match the graph")
    if n == 0:
        return Placement(np.empty(0, dtype=np.int64))
    if n == 1:
        return Placement(np.zeros(1, dtype=np.int64))

    rng = np.random.default_rng(cfg.rng_seed)
    iu, ju = np.nonzero(np.triu(g.weights, 1))
    ww = g.weights[iu, ju]

    def batch_cost(orders: np.ndarray) -> np.ndarray:
        if not iu.size:
            return np.zeros(len(orders), dtype=np.int64)
        pos = np.argsort(orders, axis=1)  # inverse permutation per row
        return (np.abs(pos[:, iu] - pos[:, ju]) * ww).sum(axis=1)

    pop_size = max(cfg.population_size, len(seeds))
    members = [s.order() for s in seeds]
    while len(members) < pop_size:
        members.append(rng.permutation(n))
    population = np.stack(members).astype(np.int64)
    costs = batch_cost(population)

    best_idx = int(np.argmin(costs))
    best_order = population[best_idx].copy()
    best_cost = int(costs[best_idx])

    elite = cfg.elite_count
    stagnant = 0
    for gen in range(cfg.budget_for(n)):
        ranked = np.argsort(costs, kind="stable")
        next_pop = [population[k].copy() for k in ranked[:elite]]
        for _ in range(pop_size - elite):
            p1 = population[_tournament(costs, rng, cfg.tournament_size)]
            p2 = population[_tournament(costs, rng, cfg.tournament_size)]
            if rng.random() < cfg.crossover_rate:
                child = _order_crossover(p1, p2, rng)
            else:
                child = p1.copy()
            if rng.random() < cfg.mutation_rate:
                a, b = rng.integers(0, n, size=2)
                child[a], child[b] = child[b], child[a]
            next_pop.append(child)
        population = np.stack(next_pop)
        costs = batch_cost(population)
        gen_best = int(np.argmin(costs))
        if int(costs[gen_best]) < best_cost:
            best_cost = int(costs[gen_best])
            best_order = population[gen_best].copy()
            stagnant = 0
        else:
            stagnant += 1
        if on_generation is not None:
            on_generation(gen, best_cost)
        if stagnant >= cfg.stagnation_limit:
            break

    return assign_offsets(best_order)

#!/usr/bin/env python3
"""Genetic refinement: polishing heuristic placements with order crossover."""

import numpy as np

from trackplace import (
    GaConfig,
    build_access_graph,
    chen_tb,
    ga_refine,
    intern_sequence,
    ofu,
    shifts_reduce,
    total_cost_via_graph,
)

if __name__ == "__main__":
    rng = np.random.default_rng(3)
    names = [f"v{i}" for i in range(18)]
    here = 0
    tokens = []
    for _ in range(500):
        tokens.append(names[here])
        if rng.random() < 0.8:
            here = (here + int(rng.integers(-2, 3))) % len(names)
        else:
            here = int(rng.integers(len(names)))
    _, sequence = intern_sequence(tokens)
    g = build_access_graph(sequence)

    # Seeding the population with heuristic placements guarantees the result
    # is never worse than the best seed.
    seeds = [ofu(sequence), chen_tb(g), shifts_reduce(g)]
    for label, s in zip(("first-use", "grouping+ties", "two-sided"), seeds):
        print(f"seed {label:<14} {total_cost_via_graph(s, g)} shifts")

    trail = []
    cfg = GaConfig(rng_seed=42)
    best = ga_refine(g, seeds, cfg, on_generation=lambda gen, c: trail.append(c))
    print(f"\nrefined           {total_cost_via_graph(best, g)} shifts "
          f"after {len(trail)} generations")

    # Best-so-far never regresses between generations.
    improvements = [(i, c) for i, c in enumerate(trail)
                    if i == 0 or c < trail[i - 1]]
    print("improvement trail:", " -> ".join(f"g{i}:{c}" for i, c in improvements))

    # Same seed, same answer: the whole run is one deterministic RNG stream.
    again = ga_refine(g, seeds, cfg)
    assert np.array_equal(best.offsets, again.offsets)
    print("rerun with the same seed reproduces the placement exactly")

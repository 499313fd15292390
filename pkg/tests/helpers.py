"""Shared test utilities: instance generators and independent oracles.

The oracles here deliberately avoid the package's own evaluators and search
code: costs are summed with plain Python loops and optima come from a full
unpruned enumeration, so agreement with the package is meaningful.
"""

from __future__ import annotations

import itertools

import numpy as np

from trackplace import AccessGraph, build_access_graph, intern_sequence


def sequence_cost(offsets, indices) -> int:
    """Reference evaluator: walk the sequence, sum offset distances."""
    total = 0
    for a, b in zip(indices[:-1], indices[1:]):
        total += abs(int(offsets[a]) - int(offsets[b]))
    return total


def graph_cost(offsets, weights) -> int:
    """Reference evaluator: fold pair weights over offset distances."""
    n = len(offsets)
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            total += int(weights[i][j]) * abs(int(offsets[i]) - int(offsets[j]))
    return total


def exhaustive_min_cost(weights) -> int:
    """Reference optimum: try every permutation, no pruning, no numpy."""
    n = len(weights)
    best = None
    for perm in itertools.permutations(range(n)):
        cost = graph_cost(perm, weights)
        if best is None or cost < best:
            best = cost
    return 0 if best is None else best


def random_tokens(rng: np.random.Generator, n: int, m: int) -> list[str]:
    """Uniform random access trace over n variable names."""
    return [f"v{k}" for k in rng.integers(0, n, size=m)]


def random_instance(rng: np.random.Generator, n: int, m: int):
    """Random (sequence, graph) pair; every variable name appears in the pool."""
    vs, seq = intern_sequence(random_tokens(rng, n, m))
    return seq, build_access_graph(seq)


def markov_tokens(rng: np.random.Generator, n: int, m: int,
                  locality: float = 0.85, span: int = 2) -> list[str]:
    """Locality-structured trace: a random walk over a ring of variables.

    Most steps move to a nearby ring neighbour; the rest jump uniformly.
    Such traces have strong pairwise affinity structure, like loops walking
    adjacent fields, which placement heuristics are supposed to exploit.
    """
    tokens = []
    cur = int(rng.integers(0, n))
    for _ in range(m):
        tokens.append(f"v{cur}")
        if rng.random() < locality:
            cur = (cur + int(rng.integers(-span, span + 1))) % n
        else:
            cur = int(rng.integers(0, n))
    return tokens


def markov_instance(rng: np.random.Generator, n: int, m: int):
    vs, seq = intern_sequence(markov_tokens(rng, n, m))
    return seq, build_access_graph(seq)


def random_graph(rng: np.random.Generator, n: int, max_w: int = 6) -> AccessGraph:
    """Random symmetric weight matrix with zero diagonal, possibly sparse."""
    w = rng.integers(0, max_w + 1, size=(n, n))
    w = np.triu(w, 1)
    w = w * (rng.random((n, n)) < 0.6)
    w = w + w.T
    return AccessGraph(w.astype(np.int64))

#!/usr/bin/env python3
"""Shift-cost basics: traces, access graphs, placements, and the two evaluators."""

from trackplace import (
    Placement,
    build_access_graph,
    intern_sequence,
    shift_distance,
    total_cost,
    total_cost_via_graph,
)

if __name__ == "__main__":
    # A trace is just the order in which variables are touched.  Interning
    # numbers each variable by first occurrence.
    tokens = "a b a b a c".split()
    variables, sequence = intern_sequence(tokens)
    print("trace:   ", " ".join(tokens))
    print("numbered:", sequence.indices.tolist())

    # Consecutive accesses to different variables each cost one port
    # realignment.  The access graph counts those adjacent pairs.
    g = build_access_graph(sequence)
    print("\nadjacency counts:")
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.weights[u, v]:
                print(f"  {variables.names[u]}--{variables.names[v]}: {g.weights[u, v]}")

    # A placement maps each variable to a distinct track offset.  Moving the
    # port from offset i to offset j shifts the tape |i - j| positions.
    declaration_order = Placement([0, 1, 2])
    print("\ndistance a->c under [0, 1, 2]:", shift_distance(declaration_order, 0, 2))

    # Cost can be computed by walking the trace or by weighting the graph.
    # The two always agree; the library cross-checks them internally too.
    for offsets in ([0, 1, 2], [1, 0, 2], [2, 0, 1]):
        p = Placement(offsets)
        walked = total_cost(p, sequence)
        weighted = total_cost_via_graph(p, g)
        assert walked == weighted
        print(f"offsets {offsets} -> {walked} shifts")

"""Placement heuristics for minimizing racetrack shift cost.

All heuristics are deterministic: every argmax breaks ties toward the
lowest variable index, preferring vertices that have at least one edge,
so vertices nobody accesses next to anything end up at the far end of
the track in declaration order.  Each returns a :class:`Placement`
bijection, never a partial assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import AccessGraph, AccessSequence, Placement, _as_index
from .errors import DomainError

__all__ = [
    "GroupStats",
    "assign_offsets",
    "vertex_to_group_weight",
    "ofu",
    "mwpc_greedy",
    "chen",
    "chen_tb",
    "tie_break",
    "shifts_reduce",
]


@dataclass
class GroupStats:
    """Counters describing which branches a group-growing run exercised."""

    alpha_ties: int = 0        # intra-group weight comparisons that came out equal
    swaps: int = 0             # tie-break swaps actually performed
    seed_swapped: bool = False  # first two seeds exchanged after inspecting the third
    inter_group_ties: int = 0  # left/right adjacency ties during bidirectional growth


def assign_offsets(order: Sequence) -> Placement:
    """Map a left-to-right variable order onto offsets 0, 1, 2, ...

    The first element of ``order`` sits next to the access port's zero
    offset; the last element is the farthest domain.
    """
    return Placement.from_order(order)


def vertex_to_group_weight(g: AccessGraph, v, group: Sequence) -> int:
    """Total edge weight from vertex ``v`` into the vertices of ``group``.

    ``v`` itself must not be a member of the group.
    """
    vi = _as_index(v)
    members = [_as_index(u) for u in group]
    if vi in members:
        raise DomainError("vertex must not be a member of the group")
    if not members:
        return 0
    return int(g.weights[vi, members].sum())


def _pick(score: np.ndarray, candidates: np.ndarray, isolated: np.ndarray) -> int:
    """Deterministic argmax over ``candidates``.

    Highest score wins; among equals, vertices with at least one edge beat
    isolated ones, and the lowest index settles what remains.
    """
    masked = np.where(candidates, score, -1)
    tied = np.flatnonzero(masked == masked.max())
    connected = tied[~isolated[tied]]
    return int(connected[0] if connected.size else tied[0])


def ofu(seq: AccessSequence) -> Placement:
    """Order-of-first-use placement.

    Variables receive offsets in the order the sequence first touches them;
    variables the sequence never touches follow in declaration order.  This
    is the conventional baseline layout.
    """
    n = len(seq.variables)
    idx = seq.indices
    if idx.size:
        uniq, first_pos = np.unique(idx, return_index=True)
        used = uniq[np.argsort(first_pos)]
    else:
        used = np.empty(0, dtype=np.int64)
    unused = np.ones(n, dtype=bool)
    unused[used] = False
    return assign_offsets(np.concatenate([used, np.flatnonzero(unused)]))


def mwpc_greedy(g: AccessGraph) -> Placement:
    """Greedy maximum-weight path cover, laid out path by path.

    Edges are taken heaviest first (ties toward the lexicographically
    smallest endpoint pair) as long as they keep every vertex degree at most
    two and close no cycle.  The surviving edges form disjoint simple paths;
    each path is written onto the track from its lower-indexed endpoint, the
    paths ordered by their minimum vertex index.  Vertices with no edges at
    all are appended last in index order, so they take the far offsets.
    """
    n = g.n
    if n == 0:
        return Placement(np.empty(0, dtype=np.int64))
    w = g.weights
    iu, ju = np.nonzero(np.triu(w, 1))
    edge_order = sorted(zip(iu.tolist(), ju.tolist()), key=lambda e: (-int(w[e[0], e[1]]), e[0], e[1]))

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    degree = [0] * n
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edge_order:
        if degree[u] >= 2 or degree[v] >= 2:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            continue  # would close a cycle
        parent[ru] = rv
        degree[u] += 1
        degree[v] += 1
        adj[u].append(v)
        adj[v].append(u)

    visited = [False] * n
    paths: list[list[int]] = []
    for start in range(n):
        if visited[start] or degree[start] > 1:
            continue  # walk each path from an endpoint
        path = [start]
        visited[start] = True
        prev, cur = start, (adj[start][0] if adj[start] else -1)
        while cur >= 0:
            path.append(cur)
            visited[cur] = True
            nxt = [x for x in adj[cur] if x != prev]
            prev, cur = cur, (nxt[0] if nxt else -1)
        paths.append(path)

    isolated = g.vertex_weights == 0
    main = [p for p in paths if not (len(p) == 1 and isolated[p[0]])]
    main.sort(key=min)
    order: list[int] = []
    for p in main:
        order.extend(p)
    # edgeless vertices are always degree-0 singletons; they go last
    order.extend(int(v) for v in np.flatnonzero(isolated))
    return assign_offsets(order)


def chen(g: AccessGraph) -> Placement:
    """Single-group greedy placement.

    Starts from the vertex with the highest total edge weight and repeatedly
    appends the unplaced vertex most strongly connected to the group built
    so far.  Offsets follow the insertion order.
    """
    n = g.n
    if n == 0:
        return Placement(np.empty(0, dtype=np.int64))
    w = g.weights
    isolated = g.vertex_weights == 0
    remaining = np.ones(n, dtype=bool)
    start = _pick(g.vertex_weights, remaining, isolated)
    remaining[start] = False
    group = [start]
    alpha = w[start].astype(np.int64)
    for _ in range(n - 1):
        v = _pick(alpha, remaining, isolated)
        group.append(v)
        remaining[v] = False
        alpha = alpha + w[v]
    return assign_offsets(group)


def tie_break(
    g: AccessGraph,
    incoming,
    last,
    fixed,
    group: list,
    stats: GroupStats | None = None,
) -> tuple[int, int]:
    """Decide whether a freshly appended vertex should sit inside the group.

    ``incoming`` was just appended after ``last``, the previous outer element;
    ``fixed`` is the element anchored one step further in.  Both outer
    candidates are compared by their edge weight into the rest of the group
    (everything except the two of them).  On a tie, the one pulling harder
    toward ``fixed`` is moved inward: if ``incoming`` wins, it swaps places
    with ``last`` and becomes the new anchor.  Mutates ``group`` in place and
    returns the (new outer element, new anchor) pair.
    """
    vi, vk = _as_index(incoming), _as_index(last)
    w = g.weights
    members = np.fromiter((_as_index(u) for u in group), dtype=np.int64, count=len(group))
    # w[v, v] == 0, so a plain gather-sum already skips the self edge
    inner_in = int(w[vi, members].sum()) - int(w[vi, vk])
    inner_last = int(w[vk, members].sum()) - int(w[vk, vi])
    if inner_in == inner_last:
        if stats is not None:
            stats.alpha_ties += 1
        if w[vi, _as_index(fixed)] > w[vk, _as_index(fixed)]:
            i, j = group.index(last), group.index(incoming)
            group[i], group[j] = group[j], group[i]
            if stats is not None:
                stats.swaps += 1
            return vk, vi
    return vi, vk


def chen_tb(g: AccessGraph, stats: GroupStats | None = None) -> Placement:
    """Single-group greedy placement with local reordering.

    Grows the group exactly like :func:`chen`, but keeps reconsidering the
    boundary: the first two seeds are swapped when the third seed is more
    attached to the first than to the second, and every later insertion runs
    the :func:`tie_break` comparison against the previous outer element.
    Needs at least three vertices to have anything to reorder; smaller
    graphs fall back to :func:`chen`.
    """
    n = g.n
    if n < 3:
        return chen(g)
    w = g.weights
    isolated = g.vertex_weights == 0
    remaining = np.ones(n, dtype=bool)

    first = _pick(g.vertex_weights, remaining, isolated)
    remaining[first] = False
    alpha = w[first].astype(np.int64)
    second = _pick(alpha, remaining, isolated)
    remaining[second] = False
    alpha = alpha + w[second]
    third = _pick(alpha, remaining, isolated)
    remaining[third] = False
    alpha = alpha + w[third]

    group = [first, second, third]
    if w[first, third] > w[second, third]:
        group[0], group[1] = group[1], group[0]
        fixed = first
        if stats is not None:
            stats.seed_swapped = True
    else:
        fixed = second

    for _ in range(n - 3):
        v = _pick(alpha, remaining, isolated)
        last = group[-1]
        group.append(v)
        _, fixed = tie_break(g, v, last, fixed, group, stats=stats)
        remaining[v] = False
        alpha = alpha + w[v]
    return assign_offsets(group)


def shifts_reduce(g: AccessGraph, stats: GroupStats | None = None) -> Placement:
    """Bidirectional group-growing placement.

    The heaviest vertex seeds both a rightward and a leftward group; its two
    strongest neighbours start one group each.  Every further vertex is the
    one most attached to the union of both groups, and joins the side it is
    locally more attached to (an exact tie goes to the side whose outer
    element it pulls on harder).  Each insertion runs :func:`tie_break`
    within its group.  The final track order is the left group reversed,
    then the right group, with the shared seed in the middle, so heavily
    used variables cluster around the centre.  Graphs with fewer than three
    vertices fall back to :func:`chen`.
    """
    n = g.n
    if n < 3:
        return chen(g)
    w = g.weights
    isolated = g.vertex_weights == 0
    remaining = np.ones(n, dtype=bool)

    centre = _pick(g.vertex_weights, remaining, isolated)
    remaining[centre] = False
    seed_alpha = w[centre].astype(np.int64)

    first_right = _pick(seed_alpha, remaining, isolated)
    remaining[first_right] = False
    first_left = _pick(seed_alpha, remaining, isolated)
    remaining[first_left] = False

    # both lists grow outward; "left" is reversed when the track is written
    right = [centre, first_right]
    left = [centre, first_left]
    alpha_right = seed_alpha + w[first_right]
    alpha_left = seed_alpha + w[first_left]
    outer_right, fixed_right = first_right, centre
    outer_left, fixed_left = first_left, centre

    for _ in range(n - 3):
        overall = alpha_left + alpha_right - seed_alpha  # centre counted once
        v = _pick(overall, remaining, isolated)
        go_left = bool(alpha_left[v] > alpha_right[v])
        if alpha_left[v] == alpha_right[v]:
            if stats is not None:
                stats.inter_group_ties += 1
            go_left = bool(w[v, outer_left] > w[v, outer_right])
        if go_left:
            left.append(v)
            outer_left, fixed_left = tie_break(g, v, outer_left, fixed_left, left, stats=stats)
            alpha_left = alpha_left + w[v]
        else:
            right.append(v)
            outer_right, fixed_right = tie_break(g, v, outer_right, fixed_right, right, stats=stats)
            alpha_right = alpha_right + w[v]
        remaining[v] = False

    return assign_offsets(left[::-1] + right[1:])

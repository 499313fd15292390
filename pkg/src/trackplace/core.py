"""Data model and shift-cost evaluators for single-port racetrack placement.

A racetrack block stores one variable per domain, and a single access port
serves the whole track.  Reading a variable means shifting its domain under
the port, so the cost of two back-to-back accesses is the absolute distance
between the variables' offsets.  This module holds the immutable problem
types (interned variables, access sequences, access graphs, placements) and
the two cost evaluators every placement algorithm in the package is checked
against:

* a sequence walk that sums per-access shift distances, and
* a graph fold that weighs each variable pair by its adjacency count.

Both must agree on every input; the run harness enforces that cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DomainError, TraceParseError

__all__ = [
    "VariableId",
    "VariableSet",
    "AccessSequence",
    "AccessGraph",
    "Placement",
    "DbcConfig",
    "intern_sequence",
    "build_access_graph",
    "shift_distance",
    "total_cost",
    "total_cost_via_graph",
]


def _as_index(v) -> int:
    """Accept a VariableId or a plain integer index."""
    if isinstance(v, VariableId):
        return v.index
    return int(v)


@dataclass(frozen=True)
class VariableId:
    """A named program variable interned at a dense index."""

    name: str
    index: int


class VariableSet:
    """Dense interning table mapping variable names to indices 0..n-1.

    Construction order fixes the indices, so a set built from a trace keeps
    first-occurrence order and a set built from a declaration list keeps
    declaration order.
    """

    __slots__ = ("_names", "_index_of")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        index_of: dict[str, int] = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not name:
                raise DomainError(f"variable name must be a non-empty string, got {name!r}")
            if name in index_of:
                raise DomainError(f"duplicate variable name {name!r}")
            index_of[name] = i
        self._names = names
        self._index_of = index_of

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def id_of(self, name: str) -> VariableId:
        try:
            return VariableId(name, self._index_of[name])
        except KeyError:
            raise DomainError(f"unknown variable {name!r}") from None

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._index_of

    def __getitem__(self, index: int) -> VariableId:
        return VariableId(self._names[index], index)

    def __iter__(self) -> Iterator[VariableId]:
        return (VariableId(name, i) for i, name in enumerate(self._names))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VariableSet) and self._names == other._names

    def __hash__(self) -> int:
        return hash(self._names)

    def __repr__(self) -> str:
        return f"VariableSet({list(self._names)!r})"


def _frozen_int_array(values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AccessSequence:
    """An ordered list of variable accesses over an interned variable set.

    ``indices[k]`` is the index of the k-th accessed variable.  The sequence
    may reference any subset of ``variables``; unused variables simply never
    contribute shift cost.
    """

    variables: VariableSet
    indices: np.ndarray

    def __post_init__(self):
        arr = _frozen_int_array(self.indices, "access indices")
        if arr.ndim != 1:
            raise DomainError("access indices must be one-dimensional")
        n = len(self.variables)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise DomainError("access index out of range for the variable set")
        object.__setattr__(self, "indices", arr)

    @property
    def m(self) -> int:
        """Number of accesses."""
        return int(self.indices.size)

    def __len__(self) -> int:
        return self.m

    def names(self) -> list[str]:
        """The accessed variable names, in access order."""
        table = self.variables.names
        return [table[i] for i in self.indices]


def intern_sequence(raw: Iterable[str]) -> tuple[VariableSet, AccessSequence]:
    """Intern raw identifier tokens into a variable set and access sequence.

    Variables are numbered by first occurrence.  Empty identifiers are
    rejected; an empty token stream yields an empty set and sequence.
    """
    index_of: dict[str, int] = {}
    indices: list[int] = []
    for tok in raw:
        if not tok:
            raise TraceParseError("empty identifier")
        idx = index_of.get(tok)
        if idx is None:
            idx = len(index_of)
            index_of[tok] = idx
        indices.append(idx)
    variables = VariableSet(index_of.keys())
    return variables, AccessSequence(variables, np.array(indices, dtype=np.int64))


@dataclass(frozen=True)
class AccessGraph:
    """Symmetric adjacency-count graph over interned variables.

    ``weights[u, v]`` counts how often u and v appear next to each other in
    the access sequence, in either order.  The diagonal is zero: immediate
    repeats cost nothing on a racetrack and are dropped at construction.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = _frozen_int_array(self.weights, "weights")
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DomainError("weights must be a square matrix")
        if w.size:
            if (w < 0).any():
                raise DomainError("edge weights must be non-negative")
            if np.diagonal(w).any():
                raise DomainError("self edges are not allowed")
            if not np.array_equal(w, w.T):
                raise DomainError("weights must be symmetric")
        object.__setattr__(self, "weights", w)
        vw = w.sum(axis=1, dtype=np.int64) if w.size else np.zeros(w.shape[0], np.int64)
        vw.setflags(write=False)
        object.__setattr__(self, "_vertex_weights", vw)

    @property
    def n(self) -> int:
        return int(self.weights.shape[0])

    @property
    def vertex_weights(self) -> np.ndarray:
        """Per-vertex total edge weight: ``vertex_weights[v] = sum_u weights[u, v]``."""
        return self._vertex_weights  # type: ignore[attr-defined]

    @classmethod
    def from_edges(cls, n: int, edges: Mapping[tuple[int, int], int]) -> "AccessGraph":
        """Build a graph from an ``{(u, v): weight}`` mapping (u != v)."""
        w = np.zeros((n, n), dtype=np.int64)
        for (u, v), weight in edges.items():
            w[u, v] += weight
            w[v, u] += weight
        return cls(w)


def build_access_graph(seq: AccessSequence) -> AccessGraph:
    """Count adjacent accesses of distinct variable pairs.

    Immediate repeats (the same variable twice in a row) add no edge weight,
    so the total edge weight equals the number of adjacent distinct pairs in
    the sequence.
    """
    n = len(seq.variables)
    w = np.zeros((n, n), dtype=np.int64)
    idx = seq.indices
    if idx.size >= 2:
        a, b = idx[:-1], idx[1:]
        keep = a != b
        a, b = a[keep], b[keep]
        np.add.at(w, (a, b), 1)
        np.add.at(w, (b, a), 1)
    return AccessGraph(w)


@dataclass(frozen=True)
class Placement:
    """A bijection from variable indices onto track offsets 0..n-1.

    ``offsets[v]`` is the domain offset assigned to variable v.  Anything
    short of a bijection is rejected: two variables cannot share a domain
    and no domain may be skipped.
    """

    offsets: np.ndarray

    def __post_init__(self):
        arr = _frozen_int_array(self.offsets, "offsets")
        if arr.ndim != 1:
            raise DomainError("offsets must be one-dimensional")
        if not np.array_equal(np.sort(arr), np.arange(arr.size)):
            raise DomainError("offsets must be a bijection onto 0..n-1")
        object.__setattr__(self, "offsets", arr)

    @property
    def n(self) -> int:
        return int(self.offsets.size)

    def offset_of(self, v) -> int:
        idx = _as_index(v)
        if not 0 <= idx < self.n:
            raise DomainError(f"variable index {idx} out of range")
        return int(self.offsets[idx])

    def order(self) -> np.ndarray:
        """Inverse view: ``order()[o]`` is the variable stored at offset o."""
        inv = np.empty(self.n, dtype=np.int64)
        inv[self.offsets] = np.arange(self.n)
        return inv

    @classmethod
    def from_order(cls, order: Sequence) -> "Placement":
        """Build a placement from a left-to-right variable order.

        ``order[k]`` receives offset k.  The order must be a permutation of
        all variable indices.
        """
        idx = np.array([_as_index(v) for v in order], dtype=np.int64)
        offsets = np.empty(idx.size, dtype=np.int64)
        if not np.array_equal(np.sort(idx), np.arange(idx.size)):
            raise DomainError("order must be a permutation of all variable indices")
        offsets[idx] = np.arange(idx.size)
        return cls(offsets)


@dataclass(frozen=True)
class DbcConfig:
    """Capacity of one domain block cluster: how many variables fit one track."""

    domains_per_track: int = 64
    bits_per_item: int = 32

    def __post_init__(self):
        if self.domains_per_track < 1:
            raise DomainError("domains_per_track must be positive")
        if self.bits_per_item < 1:
            raise DomainError("bits_per_item must be positive")

    def admits(self, n: int) -> bool:
        """Whether n variables fit on a single track."""
        return n <= self.domains_per_track


def shift_distance(p: Placement, u, v) -> int:
    """Shifts needed between accessing u and then v: ``|offset(u) - offset(v)|``."""
    return abs(p.offset_of(u) - p.offset_of(v))


def total_cost(p: Placement, seq: AccessSequence) -> int:
    """Total shift count of serving ``seq`` under placement ``p``.

    Walks the sequence and sums the offset distance of each consecutive
    access pair.  An empty or single-access sequence costs zero.
    """
    idx = seq.indices
    if idx.size and int(idx.max()) >= p.n:
        raise DomainError("sequence references a variable outside the placement")
    if idx.size < 2:
        return 0
    off = p.offsets[idx]
    return int(np.abs(np.diff(off)).sum())


def total_cost_via_graph(p: Placement, g: AccessGraph) -> int:
    """Total shift count folded over the access graph.

    Each unordered pair contributes ``weights[u, v] * |offset(u) - offset(v)|``.
    Agrees with :func:`total_cost` on the graph built from the same sequence.
    """
    if g.n != p.n:
        raise DomainError("graph and placement sizes differ")
    if g.n == 0:
        return 0
    off = p.offsets
    dist = np.abs(off[:, None] - off[None, :])
    # each unordered pair appears twice in the symmetric matrix
    return int((g.weights * dist).sum()) // 2

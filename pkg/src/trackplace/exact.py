"""Exact shift-cost minimization: exhaustive search, branch-and-bound, ILP.

The two searchers are self-contained oracles used to validate every
heuristic.  The ILP builder produces a solver-neutral integer model plus an
LP-format exporter; actually invoking a solver is the run harness's job, so
nothing here shells out or links against one.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .core import AccessGraph, Placement, total_cost_via_graph
from .errors import CapacityError, DomainError
from .heuristics import chen, chen_tb, mwpc_greedy, shifts_reduce

__all__ = [
    "STATUS_OPTIMAL",
    "STATUS_BEST_FOUND",
    "STATUS_INFEASIBLE_INPUT",
    "ExactResult",
    "brute_force_optimal",
    "branch_and_bound",
    "IlpVariable",
    "IlpConstraint",
    "IlpModel",
    "build_ilp",
    "export_lp",
]

STATUS_OPTIMAL = "optimal"
STATUS_BEST_FOUND = "best-found"
STATUS_INFEASIBLE_INPUT = "infeasible-input"


@dataclass(frozen=True)
class ExactResult:
    """Outcome of an exact (or budget-limited exact) search."""

    placement: Placement
    cost: int
    status: str
    explored: int


def _weighted_pairs(g: AccessGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index pairs (i < j) with positive weight, plus their weights."""
    iu, ju = np.nonzero(np.triu(g.weights, 1))
    return iu.astype(np.int64), ju.astype(np.int64), g.weights[iu, ju]


_CHUNK = 40320  # permutations evaluated per vectorized batch


def brute_force_optimal(g: AccessGraph, max_n: int = 10) -> ExactResult:
    """Exhaustive minimum over all placements, halved by mirror symmetry.

    Reversing a placement (offset o -> n-1-o) never changes its cost, so
    only permutations placing variable 0 in the lower half of the track are
    enumerated.  Among equal-cost placements the lexicographically smallest
    offset vector wins.  Refuses graphs larger than ``max_n`` vertices.
    """
    n = g.n
    if n > max_n:
        raise CapacityError(f"brute force limited to {max_n} variables, got {n}")
    if n == 0:
        return ExactResult(Placement(np.empty(0, dtype=np.int64)), 0, STATUS_OPTIMAL, 0)
    ii, jj, ww = _weighted_pairs(g)
    half = (n - 1) // 2
    # permutations are generated in lexicographic order, so the ones with
    # offsets[0] <= half form an exact prefix of the stream
    total = (half + 1) * math.factorial(n - 1)
    perms = itertools.permutations(range(n))
    best_cost: int | None = None
    best: np.ndarray | None = None
    explored = 0
    while explored < total:
        take = min(_CHUNK, total - explored)
        block = np.array(list(itertools.islice(perms, take)), dtype=np.int64)
        if ii.size:
            costs = (np.abs(block[:, ii] - block[:, jj]) * ww).sum(axis=1)
        else:
            costs = np.zeros(len(block), dtype=np.int64)
        k = int(np.argmin(costs))
        if best_cost is None or int(costs[k]) < best_cost:
            best_cost = int(costs[k])
            best = block[k].copy()
        explored += take
    assert best is not None and best_cost is not None
    return ExactResult(Placement(best), best_cost, STATUS_OPTIMAL, explored)


def _best_heuristic(g: AccessGraph) -> tuple[Placement, int]:
    """Cheapest placement among the graph-based heuristics."""
    best_p: Placement | None = None
    best_c = -1
    for fn in (chen, chen_tb, shifts_reduce, mwpc_greedy):
        p = fn(g)
        c = total_cost_via_graph(p, g)
        if best_p is None or c < best_c:
            best_p, best_c = p, c
    assert best_p is not None
    return best_p, best_c


def branch_and_bound(g: AccessGraph, time_budget: float | None = None) -> ExactResult:
    """Depth-first offset assignment with exact partial-cost pruning.

    Offsets are handed out in increasing order; at each depth the candidate
    variables are tried heaviest first, so expensive pairs are fixed early
    and the partial cost (which is exact for the variables placed so far)
    prunes aggressively.  The incumbent starts at the best heuristic result.
    With ``time_budget`` seconds exhausted (or a zero budget) the incumbent
    is returned with status best-found; otherwise the result is optimal.
    """
    n = g.n
    if n == 0:
        return ExactResult(Placement(np.empty(0, dtype=np.int64)), 0, STATUS_OPTIMAL, 0)
    incumbent, inc_cost = _best_heuristic(g)
    if time_budget is not None and time_budget <= 0:
        return ExactResult(incumbent, inc_cost, STATUS_BEST_FOUND, 0)
    deadline = None if time_budget is None else time.monotonic() + time_budget

    weights = g.weights.tolist()
    by_weight = sorted(range(n), key=lambda v: (-int(g.vertex_weights[v]), v))
    beta = [-1] * n
    placed: list[int] = []
    best_beta: list[int] | None = None
    best_cost = inc_cost
    explored = 0
    timed_out = False

    def dfs(depth: int, partial: int) -> None:
        nonlocal best_beta, best_cost, explored, timed_out
        if depth == n:
            if partial < best_cost:
                best_cost = partial
                best_beta = beta.copy()
            return
        for v in by_weight:
            if timed_out:
                return
            if beta[v] >= 0:
                continue
            explored += 1
            if deadline is not None and explored % 4096 == 0 and time.monotonic() > deadline:
                timed_out = True
                return
            row = weights[v]
            grown = partial
            for u in placed:
                grown += row[u] * (depth - beta[u])
            if grown >= best_cost:
                continue
            beta[v] = depth
            placed.append(v)
            dfs(depth + 1, grown)
            placed.pop()
            beta[v] = -1

    dfs(0, 0)
    if best_beta is not None:
        result_p = Placement(np.array(best_beta, dtype=np.int64))
        result_c = best_cost
    else:
        result_p, result_c = incumbent, inc_cost
    status = STATUS_BEST_FOUND if timed_out else STATUS_OPTIMAL
    return ExactResult(result_p, result_c, status, explored)


@dataclass(frozen=True)
class IlpVariable:
    """One decision variable: integer with bounds, or binary."""

    name: str
    lower: int
    upper: int | None
    binary: bool = False


@dataclass(frozen=True)
class IlpConstraint:
    """A linear row: sum of (coefficient, variable) terms, a sense, a bound."""

    name: str
    terms: tuple[tuple[int, str], ...]
    sense: str  # one of "<=", ">=", "="
    rhs: int


@dataclass(frozen=True)
class IlpModel:
    """A solver-neutral integer program for one placement instance."""

    n: int
    variables: tuple[IlpVariable, ...]
    constraints: tuple[IlpConstraint, ...]
    objective: tuple[tuple[int, str], ...]
    theta_encoded: bool = False


def build_ilp(g: AccessGraph, encode_theta: bool = False) -> IlpModel:
    """Formulate shift minimization as an integer linear program.

    Per variable i there is an integer offset ``beta_i`` in [0, n-1].  Per
    pair i < j, ``p_i_j`` and ``q_i_j`` split the signed offset difference
    into its positive and negative part, steered by binaries ``a_i_j`` and
    ``b_i_j`` (big-M is n); at most one side may be active and at least one
    shift is forced between every pair, which together with the fixed offset
    sum ``sum beta = n(n-1)/2`` makes every feasible offset vector a
    bijection.  The objective charges each pair's adjacency count times its
    distance.  With ``encode_theta`` an explicit variable-to-offset
    assignment matrix of binaries ``theta_i_o`` is added and linked to the
    offsets; the encoding is redundant but keeps the model a pure assignment
    problem, which some solvers exploit.
    """
    n = g.n
    if n < 2:
        raise DomainError("an integer program needs at least two variables")
    w = g.weights
    big_m = n

    variables: list[IlpVariable] = [
        IlpVariable(f"beta_{i}", 0, n - 1) for i in range(n)
    ]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        variables.append(IlpVariable(f"p_{i}_{j}", 0, None))
        variables.append(IlpVariable(f"q_{i}_{j}", 0, None))
        variables.append(IlpVariable(f"a_{i}_{j}", 0, 1, binary=True))
        variables.append(IlpVariable(f"b_{i}_{j}", 0, 1, binary=True))

    cons: list[IlpConstraint] = []
    for i, j in pairs:
        # beta_i - beta_j = p - q splits each offset difference into its
        # positive and negative part
        cons.append(IlpConstraint(
            f"c1_{i}_{j}",
            ((1, f"beta_{i}"), (-1, f"beta_{j}"), (1, f"p_{i}_{j}"), (-1, f"q_{i}_{j}")),
            "=", 0))
    for i, j in pairs:
        cons.append(IlpConstraint(f"c3l_{i}_{j}", ((1, f"p_{i}_{j}"), (-1, f"a_{i}_{j}")), ">=", 0))
        cons.append(IlpConstraint(f"c3u_{i}_{j}", ((1, f"p_{i}_{j}"), (-big_m, f"a_{i}_{j}")), "<=", 0))
    for i, j in pairs:
        cons.append(IlpConstraint(f"c4l_{i}_{j}", ((1, f"q_{i}_{j}"), (-1, f"b_{i}_{j}")), ">=", 0))
        cons.append(IlpConstraint(f"c4u_{i}_{j}", ((1, f"q_{i}_{j}"), (-big_m, f"b_{i}_{j}")), "<=", 0))
    for i, j in pairs:
        cons.append(IlpConstraint(f"c5_{i}_{j}", ((1, f"a_{i}_{j}"), (1, f"b_{i}_{j}")), "<=", 1))
    for i, j in pairs:
        # every pair of variables sits at least one shift apart
        cons.append(IlpConstraint(f"c6_{i}_{j}", ((1, f"p_{i}_{j}"), (1, f"q_{i}_{j}")), ">=", 1))
    cons.append(IlpConstraint(
        "c8",
        tuple((1, f"beta_{i}") for i in range(n)),
        "=", n * (n - 1) // 2))

    if encode_theta:
        for i in range(n):
            for o in range(n):
                variables.append(IlpVariable(f"theta_{i}_{o}", 0, 1, binary=True))
        for i in range(n):
            cons.append(IlpConstraint(
                f"theta_row_{i}",
                tuple((1, f"theta_{i}_{o}") for o in range(n)),
                "=", 1))
        for o in range(n):
            cons.append(IlpConstraint(
                f"theta_col_{o}",
                tuple((1, f"theta_{i}_{o}") for i in range(n)),
                "=", 1))
        for i in range(n):
            cons.append(IlpConstraint(
                f"theta_link_{i}",
                ((1, f"beta_{i}"),) + tuple((-o, f"theta_{i}_{o}") for o in range(1, n)),
                "=", 0))

    objective = []
    for i, j in pairs:
        weight = int(w[i, j])
        if weight > 0:
            objective.append((weight, f"p_{i}_{j}"))
            objective.append((weight, f"q_{i}_{j}"))

    return IlpModel(n, tuple(variables), tuple(cons), tuple(objective), encode_theta)


def _format_terms(terms: tuple[tuple[int, str], ...]) -> str:
    parts: list[str] = []
    for coef, name in terms:
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        if not parts:
            parts.append(body if coef >= 0 else f"- {body}")
        else:
            parts.append(f"+ {body}" if coef >= 0 else f"- {body}")
    return " ".join(parts)


def _wrap(line: str, width: int = 200) -> list[str]:
    if len(line) <= width:
        return [line]
    out: list[str] = []
    cur = ""
    for tok in line.split(" "):
        if cur and len(cur) + 1 + len(tok) > width:
            out.append(cur)
            cur = " " + tok
        else:
            cur = tok if not cur else f"{cur} {tok}"
    if cur:
        out.append(cur)
    return out


def export_lp(model: IlpModel) -> str:
    """Serialize a model to LP text.

    The output is deterministic byte for byte: variable and row order follow
    the model, numbers are plain integers, long rows wrap at a fixed width.
    Integer variables are declared under Generals with their bounds in the
    Bounds section; binaries go under Binaries.
    """
    lines: list[str] = ["Minimize"]
    if model.objective:
        obj = _format_terms(model.objective)
    else:
        obj = f"0 {model.variables[0].name}"
    lines.extend(_wrap(f" obj: {obj}"))
    lines.append("Subject To")
    for con in model.constraints:
        lines.extend(_wrap(f" {con.name}: {_format_terms(con.terms)} {con.sense} {con.rhs}"))
    lines.append("Bounds")
    for var in model.variables:
        if var.binary:
            continue
        if var.upper is None:
            if var.lower != 0:
                lines.append(f" {var.name} >= {var.lower}")
        else:
            lines.append(f" {var.lower} <= {var.name} <= {var.upper}")
    generals = [v.name for v in model.variables if not v.binary]
    binaries = [v.name for v in model.variables if v.binary]
    if generals:
        lines.append("Generals")
        lines.extend(_wrap(" " + " ".join(generals)))
    if binaries:
        lines.append("Binaries")
        lines.extend(_wrap(" " + " ".join(binaries)))
    lines.append("End")
    return "\n".join(lines) + "\n"

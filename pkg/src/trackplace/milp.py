"""LP-file solving utilities and the bundled solver command.

The run harness hands exported LP files to an external solver command; this
module supplies the default one.  ``trackplace-solve`` reads an LP file,
solves it with scipy's mixed-integer backend, and writes a small JSON
document ``{"status": ..., "objective": ..., "variables": {...}}`` so the
harness (or anything else) can pick the solution up.  The parser covers the
space-separated LP dialect produced by :func:`trackplace.exact.export_lp`.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from .core import Placement
from .errors import DomainError, InvariantViolation

__all__ = [
    "LpProblem",
    "LpSolution",
    "parse_lp_text",
    "solve_lp_text",
    "solve_lp_file",
    "placement_from_lp_solution",
    "main",
]

_SENSES = {"<=", ">=", "=", "<", ">", "=<", "=>"}
_NORMALIZE_SENSE = {"<": "<=", ">": ">=", "=<": "<=", "=>": ">="}


@dataclass
class LpProblem:
    """A parsed LP file: objective, rows, bounds, integrality marks."""

    minimize: bool = True
    objective: dict[str, float] = field(default_factory=dict)
    constraints: list[tuple[str, dict[str, float], str, float]] = field(default_factory=list)
    bounds: dict[str, tuple[float, float | None]] = field(default_factory=dict)
    integers: set[str] = field(default_factory=set)
    binaries: set[str] = field(default_factory=set)

    def variable_names(self) -> list[str]:
        names = set(self.objective)
        for _, coefs, _, _ in self.constraints:
            names.update(coefs)
        names.update(self.bounds)
        names.update(self.integers)
        names.update(self.binaries)
        return sorted(names)


@dataclass(frozen=True)
class LpSolution:
    status: str
    objective: float | None
    values: dict[str, float]


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def _parse_expression(tokens: list[str]) -> tuple[dict[str, float], float]:
    """Fold sign/coefficient/name tokens into a coefficient map."""
    coefs: dict[str, float] = {}
    constant = 0.0
    sign = 1.0
    coef: float | None = None
    for tok in tokens:
        if tok == "+":
            if coef is not None:
                constant += sign * coef
                coef = None
            sign = 1.0
        elif tok == "-":
            if coef is not None:
                constant += sign * coef
                coef = None
                sign = -1.0
            else:
                sign = -sign
        elif _is_number(tok):
            coef = float(tok) if coef is None else coef * float(tok)
        else:
            value = sign * (1.0 if coef is None else coef)
            coefs[tok] = coefs.get(tok, 0.0) + value
            sign = 1.0
            coef = None
    if coef is not None:
        constant += sign * coef
    return coefs, constant


_SECTION_STARTS = {
    "minimize": "objective",
    "minimise": "objective",
    "min": "objective",
    "maximize": "objective",
    "maximise": "objective",
    "max": "objective",
    "subject": "constraints",
    "st": "constraints",
    "s.t.": "constraints",
    "bounds": "bounds",
    "bound": "bounds",
    "general": "integers",
    "generals": "integers",
    "gen": "integers",
    "integer": "integers",
    "integers": "integers",
    "binary": "binaries",
    "binaries": "binaries",
    "bin": "binaries",
    "end": "end",
}


def parse_lp_text(text: str) -> LpProblem:
    """Parse the space-separated LP dialect this package emits."""
    prob = LpProblem()
    section: str | None = None
    expr_lines: dict[str, list[str]] = {"objective": [], "constraints": []}
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        head = line.strip().split()
        key = head[0].lower()
        if key in _SECTION_STARTS and (key != "st" or section is None or section == "objective"):
            section = _SECTION_STARTS[key]
            if key in ("maximize", "maximise", "max"):
                prob.minimize = False
            if section == "constraints" and key == "subject":
                rest = head[2:] if len(head) > 1 and head[1].lower() == "to" else head[1:]
            else:
                rest = head[1:]
            if section in expr_lines and rest:
                expr_lines[section].append(" ".join(rest))
            elif section == "bounds" and rest:
                _parse_bound_line(prob, rest)
            elif section in ("integers", "binaries") and rest:
                _mark_integrality(prob, section, rest)
            continue
        if section in ("objective", "constraints"):
            expr_lines[section].append(line.strip())
        elif section == "bounds":
            _parse_bound_line(prob, line.strip().split())
        elif section in ("integers", "binaries"):
            _mark_integrality(prob, section, line.strip().split())
        elif section is None:
            raise DomainError(f"unexpected LP content before any section: {line.strip()!r}")

    _parse_objective(prob, " ".join(expr_lines["objective"]))
    _parse_constraints(prob, " ".join(expr_lines["constraints"]))
    return prob


def _mark_integrality(prob: LpProblem, section: str, names: list[str]) -> None:
    target = prob.integers if section == "integers" else prob.binaries
    target.update(names)


def _parse_bound_line(prob: LpProblem, tokens: list[str]) -> None:
    if not tokens:
        return
    if len(tokens) == 2 and tokens[1].lower() == "free":
        prob.bounds[tokens[0]] = (-math.inf, None)
        return
    senses = [k for k, t in enumerate(tokens) if t in _SENSES]
    if len(senses) == 2:
        lo, name, hi = tokens[0], tokens[senses[0] + 1], tokens[-1]
        prob.bounds[name] = (float(lo), float(hi))
    elif len(senses) == 1:
        k = senses[0]
        sense = _NORMALIZE_SENSE.get(tokens[k], tokens[k])
        name_first = not _is_number(tokens[0])
        if sense == "=":
            name, value = (tokens[0], tokens[k + 1]) if name_first else (tokens[k + 1], tokens[0])
            prob.bounds[name] = (float(value), float(value))
        elif (sense == "<=") == name_first:
            # name <= hi,  or  hi >= name
            name, hi = (tokens[0], tokens[k + 1]) if name_first else (tokens[k + 1], tokens[0])
            lo = prob.bounds.get(name, (0.0, None))[0]
            prob.bounds[name] = (lo, float(hi))
        else:
            name, lo = (tokens[0], tokens[k + 1]) if name_first else (tokens[k + 1], tokens[0])
            hi = prob.bounds.get(name, (0.0, None))[1]
            prob.bounds[name] = (float(lo), hi)
    else:
        raise DomainError(f"unparseable bound line: {' '.join(tokens)!r}")


def _parse_objective(prob: LpProblem, text: str) -> None:
    tokens = text.split()
    if tokens and tokens[0].endswith(":"):
        tokens = tokens[1:]
    elif len(tokens) > 1 and tokens[1] == ":":
        tokens = tokens[2:]
    coefs, _ = _parse_expression(tokens)
    prob.objective = coefs


def _parse_constraints(prob: LpProblem, text: str) -> None:
    tokens = text.split()
    row_tokens: list[str] = []
    row_name = ""
    counter = 0

    def flush() -> None:
        nonlocal row_tokens, row_name, counter
        if not row_tokens:
            return
        senses = [k for k, t in enumerate(row_tokens) if t in _SENSES]
        if not senses:
            raise DomainError(f"constraint {row_name or counter} has no sense")
        k = senses[-1]
        sense = _NORMALIZE_SENSE.get(row_tokens[k], row_tokens[k])
        coefs, lhs_const = _parse_expression(row_tokens[:k])
        _, rhs_const = _parse_expression(row_tokens[k + 1:])
        name = row_name or f"r{counter}"
        prob.constraints.append((name, coefs, sense, rhs_const - lhs_const))
        counter += 1
        row_tokens = []
        row_name = ""

    k = 0
    while k < len(tokens):
        tok = tokens[k]
        if tok.endswith(":"):
            flush()
            row_name = tok[:-1]
        elif k + 1 < len(tokens) and tokens[k + 1] == ":":
            flush()
            row_name = tok
            k += 1
        else:
            if tok in _SENSES and any(t in _SENSES for t in row_tokens):
                # a second sense token means the previous row ended with a
                # bare rhs and a new unnamed row begins; not produced by our
                # exporter but cheap to reject clearly
                raise DomainError("constraint rows must be name-prefixed")
            row_tokens.append(tok)
        k += 1
    flush()


def solve_lp_text(text: str, time_limit: float | None = None) -> LpSolution:
    """Parse and solve LP text with scipy's mixed-integer solver."""
    prob = parse_lp_text(text)
    names = prob.variable_names()
    if not names:
        return LpSolution("optimal", 0.0, {})
    index = {name: k for k, name in enumerate(names)}
    nvar = len(names)

    sign = 1.0 if prob.minimize else -1.0
    c = np.zeros(nvar)
    for name, coef in prob.objective.items():
        c[index[name]] = sign * coef

    lb = np.zeros(nvar)
    ub = np.full(nvar, np.inf)
    for name in prob.binaries:
        ub[index[name]] = 1.0
    for name, (lo, hi) in prob.bounds.items():
        lb[index[name]] = lo
        ub[index[name]] = np.inf if hi is None else hi

    integrality = np.zeros(nvar)
    for name in prob.integers | prob.binaries:
        integrality[index[name]] = 1

    constraints = []
    if prob.constraints:
        rows, cols, data, c_lo, c_hi = [], [], [], [], []
        for r, (_, coefs, sense, rhs) in enumerate(prob.constraints):
            for name, coef in coefs.items():
                rows.append(r)
                cols.append(index[name])
                data.append(coef)
            if sense == "<=":
                c_lo.append(-np.inf)
                c_hi.append(rhs)
            elif sense == ">=":
                c_lo.append(rhs)
                c_hi.append(np.inf)
            else:
                c_lo.append(rhs)
                c_hi.append(rhs)
        a = sparse.csr_matrix((data, (rows, cols)), shape=(len(prob.constraints), nvar))
        constraints.append(LinearConstraint(a, np.array(c_lo), np.array(c_hi)))

    options = {}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    res = milp(c=c, constraints=constraints, integrality=integrality,
               bounds=Bounds(lb, ub), options=options)

    status = {0: "optimal", 1: "iteration-limit", 2: "infeasible", 3: "unbounded"}.get(
        res.status, "unknown")
    if res.x is None:
        return LpSolution(status, None, {})
    values = {name: float(res.x[index[name]]) for name in names}
    objective = float(res.fun) * sign
    return LpSolution(status, objective, values)


def solve_lp_file(path: str, time_limit: float | None = None) -> LpSolution:
    with open(path, "r", encoding="utf-8") as fh:
        return solve_lp_text(fh.read(), time_limit=time_limit)


def placement_from_lp_solution(values: dict[str, float], n: int,
                               tolerance: float = 1e-4) -> Placement:
    """Recover and validate the placement encoded in a solver solution.

    Checks that the offsets round to a clean bijection and that no pair has
    both its positive and negative distance part active, then returns the
    placement.  Violations raise :class:`InvariantViolation`, since they mean
    the solver (or the model hand-off) produced garbage.
    """
    offsets = np.empty(n, dtype=np.int64)
    for i in range(n):
        raw = values.get(f"beta_{i}")
        if raw is None:
            raise InvariantViolation(f"solution is missing beta_{i}")
        rounded = round(raw)
        if abs(raw - rounded) > tolerance:
            raise InvariantViolation(f"beta_{i} = {raw} is not integral")
        offsets[i] = rounded
    if not np.array_equal(np.sort(offsets), np.arange(n)):
        raise InvariantViolation("solver offsets do not form a bijection onto 0..n-1")
    for i in range(n):
        for j in range(i + 1, n):
            p = values.get(f"p_{i}_{j}", 0.0)
            q = values.get(f"q_{i}_{j}", 0.0)
            if min(round(p), round(q)) != 0:
                raise InvariantViolation(
                    f"pair ({i}, {j}) has both distance parts active: p={p}, q={q}")
    return Placement(offsets)


def main(argv: list[str] | None = None) -> int:
    """Entry point of the bundled ``trackplace-solve`` command."""
    parser = argparse.ArgumentParser(
        prog="trackplace-solve",
        description="Solve an LP file and write the solution as JSON.")
    parser.add_argument("lp_file", help="path to the LP file")
    parser.add_argument("--out", default="-",
                        help="where to write the JSON solution (default: stdout)")
    parser.add_argument("--time-limit", type=float, default=None,
                        help="solver time limit in seconds")
    args = parser.parse_args(argv)

    try:
        solution = solve_lp_file(args.lp_file, time_limit=args.time_limit)
    except OSError as exc:
        print(f"trackplace-solve: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"trackplace-solve: {exc}", file=sys.stderr)
        return 1

    payload = json.dumps({
        "status": solution.status,
        "objective": solution.objective,
        "variables": solution.values,
    }, indent=2, sort_keys=True) + "\n"
    if args.out == "-":
        sys.stdout.write(payload)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())

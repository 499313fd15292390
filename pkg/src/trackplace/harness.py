"""Benchmark harness: trace files, run matrix, aggregation, report emission.

A trace file is plain text: ``#`` starts a comment, ``@name <id>`` opens a
benchmark section, and every other non-blank line is one access sequence of
whitespace-separated variable identifiers.  Variables are interned per
sequence, so identical names in different sequences are unrelated.

The harness runs a set of placement algorithms over every sequence, checks
each result with both cost evaluators (a disagreement aborts the run: it
means the package itself is broken), aggregates by benchmark, sequence
length bin, and length category, attaches shift-energy estimates, and emits
the whole thing as CSV or JSON with fully deterministic ordering and number
formatting.
"""

from __future__ import annotations

import csv
import io
import json
import shlex
import subprocess
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .core import (
    AccessGraph,
    AccessSequence,
    DbcConfig,
    Placement,
    build_access_graph,
    intern_sequence,
    total_cost,
    total_cost_via_graph,
    VariableSet,
)
from .errors import (
    CapacityError,
    InvariantViolation,
    TraceParseError,
    UsageError,
)
from .exact import branch_and_bound, build_ilp, export_lp
from .genetic import GaConfig, ga_refine
from .heuristics import chen, chen_tb, mwpc_greedy, ofu, shifts_reduce
from .milp import placement_from_lp_solution

__all__ = [
    "ALGORITHMS",
    "TraceEntry",
    "TraceFile",
    "EnergyModel",
    "RunConfig",
    "RunRow",
    "AggregateRow",
    "RunReport",
    "parse_traces",
    "run_matrix",
    "reduction_vs_ofu",
    "bin_by_length",
    "categorize_sequence",
    "estimate_energy",
    "emit_report",
    "render_report",
]

ALGORITHMS = ("ofu", "mwpc", "chen", "chen_tb", "shifts_reduce", "ga", "bnb", "ilp-export")

DEFAULT_BENCHMARK = "default"


@dataclass(frozen=True)
class TraceEntry:
    """One access sequence of a trace file, tagged with its benchmark."""

    benchmark: str
    sequence_id: int
    variables: VariableSet
    sequence: AccessSequence


@dataclass(frozen=True)
class TraceFile:
    """A parsed trace file."""

    path: str
    entries: tuple[TraceEntry, ...]

    @property
    def sequences(self) -> tuple[AccessSequence, ...]:
        return tuple(e.sequence for e in self.entries)


def _parse_trace_lines(lines: Iterable[str], path: str) -> TraceFile:
    entries: list[TraceEntry] = []
    benchmark = DEFAULT_BENCHMARK
    counters: dict[str, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        tokens = text.split()
        if tokens[0].startswith("@"):
            if tokens[0] != "@name":
                raise TraceParseError(f"unknown directive {tokens[0]!r}", line=lineno)
            if len(tokens) != 2:
                raise TraceParseError("@name takes exactly one identifier", line=lineno)
            benchmark = tokens[1]
            continue
        try:
            variables, sequence = intern_sequence(tokens)
        except TraceParseError as exc:
            raise TraceParseError(str(exc), line=lineno) from None
        seq_id = counters.get(benchmark, 0)
        counters[benchmark] = seq_id + 1
        entries.append(TraceEntry(benchmark, seq_id, variables, sequence))
    return TraceFile(path, tuple(entries))


def parse_traces(path: str) -> TraceFile:
    """Read and parse a trace file.

    Sequence ids are 0-based and count per benchmark; sequences before any
    ``@name`` directive land in the benchmark called ``default``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_trace_lines(fh, str(path))


@dataclass(frozen=True)
class EnergyModel:
    """Shift-energy parameters: cost of moving one domain one position."""

    per_domain_shift_pj: float = 0.5
    bits_per_item: int = 32


def estimate_energy(shifts: int, model: EnergyModel = EnergyModel()) -> float:
    """Energy in pJ: every shift moves ``bits_per_item`` domains by one.

    With the defaults one shift of a 32-bit item costs 16 pJ.
    """
    return shifts * model.bits_per_item * model.per_domain_shift_pj


_BIN_EDGES = ((70, "0-70"), (140, "71-140"), (300, "141-300"), (500, "301-500"), (800, "501-800"))
BIN_LABELS = tuple(label for _, label in _BIN_EDGES) + (">800",)
CATEGORY_LABELS = ("short", "long", "very-long")


def bin_by_length(m: int) -> str:
    """Histogram bin label for a sequence of m accesses."""
    for edge, label in _BIN_EDGES:
        if m <= edge:
            return label
    return ">800"


def categorize_sequence(m: int) -> str:
    """Coarse length category: short (<= 140), long (141..300), very-long (> 300)."""
    if m <= 140:
        return "short"
    if m <= 300:
        return "long"
    return "very-long"


def reduction_vs_ofu(shifts: int, ofu_shifts: int) -> float | None:
    """Relative shift saving against the order-of-first-use baseline.

    Undefined (None) when the baseline itself needs no shifts.
    """
    if ofu_shifts == 0:
        return None
    return 1.0 - shifts / ofu_shifts


@dataclass(frozen=True)
class RunConfig:
    """Settings of one harness invocation."""

    seed: int = 0
    dbc: DbcConfig | None = None
    energy: EnergyModel = EnergyModel()
    ga: GaConfig = field(default_factory=GaConfig)
    bnb_budget: float | None = 10.0
    ilp_export_dir: str | None = None
    ilp_budget: float = 10800.0
    solver_command: str | None = None
    measure_time: bool = True


@dataclass(frozen=True)
class RunRow:
    """One (sequence, algorithm) cell of the run matrix."""

    benchmark: str
    sequence_id: int
    n: int
    m: int
    algorithm: str
    shifts: int | None
    reduction: float | None
    runtime_us: int
    status: str
    dbc_violation: bool
    ofu_shifts: int  # baseline cost of the same sequence, for pooled aggregates


@dataclass(frozen=True)
class AggregateRow:
    """Aggregated shifts of one algorithm over one group of sequences."""

    scope: str  # benchmark | bin | category
    key: str
    algorithm: str
    sequences: int
    total_shifts: int
    mean_reduction: float | None
    pooled_reduction: float | None
    total_energy_pj: float


@dataclass(frozen=True)
class RunReport:
    """Everything one harness run produced."""

    seed: int
    algorithms: tuple[str, ...]
    energy: EnergyModel
    rows: tuple[RunRow, ...]
    aggregates: tuple[AggregateRow, ...]
    energy_totals: tuple[tuple[str, int, float], ...]  # algorithm, shifts, pJ


def _checked_cost(p: Placement, seq: AccessSequence, g: AccessGraph) -> int:
    """Evaluate a placement with both evaluators; they must agree."""
    walked = total_cost(p, seq)
    folded = total_cost_via_graph(p, g)
    if walked != folded:
        raise InvariantViolation(
            f"cost evaluators disagree: sequence walk {walked}, graph fold {folded}")
    return walked


def _invoke_solver(command: str, lp_path: Path, budget: float) -> dict[str, float]:
    """Run the external solver command template on one LP file."""
    out_path = lp_path.with_suffix(lp_path.suffix + ".sol.json")
    cmd = (command
           .replace("{lp}", str(lp_path))
           .replace("{out}", str(out_path))
           .replace("{budget}", repr(budget)))
    timeout = budget * 1.5 + 60.0
    try:
        proc = subprocess.run(shlex.split(cmd), capture_output=True, text=True,
                              timeout=timeout)
    except (OSError, subprocess.TimeoutExpired) as exc:
        raise InvariantViolation(f"solver command failed: {exc}") from None
    if proc.returncode != 0:
        raise InvariantViolation(
            f"solver command exited with {proc.returncode}: {proc.stderr.strip()}")
    payload = out_path.read_text(encoding="utf-8") if "{out}" in command else proc.stdout
    try:
        doc = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise InvariantViolation(f"solver output is not valid JSON: {exc}") from None
    values = doc.get("variables")
    if not isinstance(values, dict):
        raise InvariantViolation("solver output lacks a variables mapping")
    return {str(k): float(v) for k, v in values.items()}


def run_matrix(traces: TraceFile, algorithms: Sequence[str],
               cfg: RunConfig | None = None) -> RunReport:
    """Run every requested algorithm over every sequence of a trace file.

    The baseline ``ofu`` is always included, since every reduction is
    measured against it.  Rows come back sorted by benchmark, sequence id,
    and algorithm name.  Sequences whose variables are all accessed exactly
    once carry no placement-dependent cost beyond ordering noise; any
    algorithm that still deviates from the baseline on such a sequence is
    flagged rather than failed.
    """
    cfg = cfg or RunConfig()
    algos = list(dict.fromkeys(algorithms))
    unknown = [a for a in algos if a not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithm(s): {', '.join(sorted(unknown))}")
    if "ofu" not in algos:
        algos.insert(0, "ofu")
    if "ilp-export" in algos and cfg.ilp_export_dir is None:
        raise UsageError("ilp-export requires an export directory")

    rows: list[RunRow] = []
    for global_idx, entry in enumerate(traces.entries):
        seq = entry.sequence
        n, m = len(entry.variables), seq.m
        if n and m and m * n >= 2 ** 63:
            raise CapacityError(f"sequence {entry.benchmark}/{entry.sequence_id} "
                                "overflows the 64-bit cost range")
        graph = build_access_graph(seq)
        single_use = n > 0 and m == n

        placements: dict[str, Placement] = {}

        def heuristic_placement(name: str) -> Placement:
            if name not in placements:
                fn = {"ofu": lambda: ofu(seq),
                      "mwpc": lambda: mwpc_greedy(graph),
                      "chen": lambda: chen(graph),
                      "chen_tb": lambda: chen_tb(graph),
                      "shifts_reduce": lambda: shifts_reduce(graph)}[name]
                placements[name] = fn()
            return placements[name]

        ofu_cost = _checked_cost(heuristic_placement("ofu"), seq, graph)

        for algo in algos:
            started = time.perf_counter()
            placement: Placement | None = None
            status = "ok"
            if algo in ("ofu", "mwpc", "chen", "chen_tb", "shifts_reduce"):
                placement = heuristic_placement(algo)
            elif algo == "ga":
                seeds = [heuristic_placement("ofu"),
                         heuristic_placement("chen_tb"),
                         heuristic_placement("shifts_reduce")]
                ga_cfg = replace(cfg.ga, rng_seed=cfg.seed ^ global_idx)
                placement = ga_refine(graph, seeds, ga_cfg)
            elif algo == "bnb":
                result = branch_and_bound(graph, cfg.bnb_budget)
                placement = result.placement
                status = result.status
            elif algo == "ilp-export":
                placement, status = _run_ilp_export(entry, graph, cfg)
            runtime = time.perf_counter() - started

            if placement is not None:
                shifts = _checked_cost(placement, seq, graph)
                reduction = reduction_vs_ofu(shifts, ofu_cost)
                if single_use and shifts != ofu_cost:
                    status += "+single-occurrence-cost-differs"
            else:
                shifts = None
                reduction = None
            rows.append(RunRow(
                benchmark=entry.benchmark,
                sequence_id=entry.sequence_id,
                n=n,
                m=m,
                algorithm=algo,
                shifts=shifts,
                reduction=reduction,
                runtime_us=int(round(runtime * 1e6)) if cfg.measure_time else 0,
                status=status,
                dbc_violation=cfg.dbc is not None and not cfg.dbc.admits(n),
                ofu_shifts=ofu_cost,
            ))

    rows.sort(key=lambda r: (r.benchmark, r.sequence_id, r.algorithm))
    aggregates = _aggregate_rows(rows, cfg.energy)
    totals = _energy_totals(rows, algos, cfg.energy)
    return RunReport(cfg.seed, tuple(algos), cfg.energy, tuple(rows),
                     tuple(aggregates), tuple(totals))


def _run_ilp_export(entry: TraceEntry, graph: AccessGraph,
                    cfg: RunConfig) -> tuple[Placement | None, str]:
    n = graph.n
    if n < 2:
        # nothing to optimize; the only placement is trivially optimal
        return Placement.from_order(list(range(n))), "trivial"
    out_dir = Path(cfg.ilp_export_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lp_path = out_dir / f"{entry.benchmark}_{entry.sequence_id}.lp"
    lp_path.write_text(export_lp(build_ilp(graph)), encoding="utf-8", newline="\n")
    if cfg.solver_command is None:
        return None, "exported-only"
    values = _invoke_solver(cfg.solver_command, lp_path, cfg.ilp_budget)
    return placement_from_lp_solution(values, n), "solved"


def _aggregate_rows(rows: Sequence[RunRow], energy: EnergyModel) -> list[AggregateRow]:
    groups: dict[tuple[str, str, str], list[RunRow]] = {}
    for row in rows:
        if row.shifts is None:
            continue
        for scope, key in (("benchmark", row.benchmark),
                           ("bin", bin_by_length(row.m)),
                           ("category", categorize_sequence(row.m))):
            groups.setdefault((scope, key, row.algorithm), []).append(row)

    out: list[AggregateRow] = []
    for (scope, key, algo), members in groups.items():
        total = sum(r.shifts for r in members)
        baseline = sum(r.ofu_shifts for r in members)
        reductions = [r.reduction for r in members if r.reduction is not None]
        out.append(AggregateRow(
            scope=scope,
            key=key,
            algorithm=algo,
            sequences=len(members),
            total_shifts=total,
            mean_reduction=sum(reductions) / len(reductions) if reductions else None,
            pooled_reduction=None if baseline == 0 else 1.0 - total / baseline,
            total_energy_pj=estimate_energy(total, energy),
        ))

    scope_rank = {"benchmark": 0, "bin": 1, "category": 2}
    key_rank: dict[tuple[str, str], int] = {}
    for pos, label in enumerate(BIN_LABELS):
        key_rank[("bin", label)] = pos
    for pos, label in enumerate(CATEGORY_LABELS):
        key_rank[("category", label)] = pos
    out.sort(key=lambda a: (scope_rank[a.scope],
                            key_rank.get((a.scope, a.key), 0),
                            a.key, a.algorithm))
    return out


def _energy_totals(rows: Sequence[RunRow], algos: Sequence[str],
                   energy: EnergyModel) -> list[tuple[str, int, float]]:
    totals: list[tuple[str, int, float]] = []
    for algo in sorted(algos):
        shifts = sum(r.shifts for r in rows if r.algorithm == algo and r.shifts is not None)
        totals.append((algo, shifts, estimate_energy(shifts, energy)))
    return totals


def _ratio(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"


def _json_ratio(value: float | None) -> float | None:
    return None if value is None else round(value, 4)


def render_report(report: RunReport, fmt: str = "csv") -> str:
    """Serialize a report; identical reports render to identical bytes."""
    if fmt == "csv":
        return _render_csv(report)
    if fmt == "json":
        return _render_json(report)
    raise UsageError(f"unknown report format {fmt!r}")


def _render_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    buf.write("# trackplace report\n")
    buf.write(f"# seed={report.seed} algorithms={','.join(report.algorithms)} "
              f"bits={report.energy.bits_per_item} "
              f"pj_per_domain_shift={report.energy.per_domain_shift_pj}\n")
    writer.writerow(["benchmark", "sequence_id", "n", "m", "algorithm", "shifts",
                     "reduction_vs_ofu", "runtime_us", "status", "dbc_violation"])
    for r in report.rows:
        writer.writerow([r.benchmark, r.sequence_id, r.n, r.m, r.algorithm,
                         "" if r.shifts is None else r.shifts, _ratio(r.reduction),
                         r.runtime_us, r.status, int(r.dbc_violation)])
    buf.write("# aggregates\n")
    writer.writerow(["scope", "key", "algorithm", "sequences", "total_shifts",
                     "mean_reduction", "pooled_reduction", "total_energy_pj"])
    for a in report.aggregates:
        writer.writerow([a.scope, a.key, a.algorithm, a.sequences, a.total_shifts,
                         _ratio(a.mean_reduction), _ratio(a.pooled_reduction),
                         f"{a.total_energy_pj:.4f}"])
    buf.write("# energy totals\n")
    writer.writerow(["algorithm", "total_shifts", "total_energy_pj"])
    for algo, shifts, pj in report.energy_totals:
        writer.writerow([algo, shifts, f"{pj:.4f}"])
    return buf.getvalue()


def _render_json(report: RunReport) -> str:
    doc = {
        "seed": report.seed,
        "algorithms": list(report.algorithms),
        "energy_model": {
            "per_domain_shift_pj": report.energy.per_domain_shift_pj,
            "bits_per_item": report.energy.bits_per_item,
        },
        "rows": [
            {
                "benchmark": r.benchmark,
                "sequence_id": r.sequence_id,
                "n": r.n,
                "m": r.m,
                "algorithm": r.algorithm,
                "shifts": r.shifts,
                "reduction_vs_ofu": _json_ratio(r.reduction),
                "runtime_us": r.runtime_us,
                "status": r.status,
                "dbc_violation": r.dbc_violation,
            }
            for r in report.rows
        ],
        "aggregates": [
            {
                "scope": a.scope,
                "key": a.key,
                "algorithm": a.algorithm,
                "sequences": a.sequences,
                "total_shifts": a.total_shifts,
                "mean_reduction": _json_ratio(a.mean_reduction),
                "pooled_reduction": _json_ratio(a.pooled_reduction),
                "total_energy_pj": round(a.total_energy_pj, 4),
            }
            for a in report.aggregates
        ],
        "energy_totals": [
            {"algorithm": algo, "total_shifts": shifts, "total_energy_pj": round(pj, 4)}
            for algo, shifts, pj in report.energy_totals
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit_report(report: RunReport, out: str | Path | TextIO, fmt: str = "csv") -> str:
    """Render a report and write it to a path or open text stream.

    Returns the rendered text.  Files are written with ``\\n`` newlines
    regardless of platform, so repeated runs stay byte-identical.
    """
    text = render_report(report, fmt)
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return text

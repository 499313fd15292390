"""Shift-minimizing data placement for single-port racetrack memory.

The package models variable placement on a racetrack block, where serving
an access costs one shift per domain between the port and the variable.  It
provides:

* :mod:`trackplace.core` - problem types and the two cost evaluators,
* :mod:`trackplace.heuristics` - fast deterministic placement heuristics,
* :mod:`trackplace.exact` - exhaustive search, branch-and-bound, and an
  integer-program builder with LP export,
* :mod:`trackplace.genetic` - a seeded genetic refiner,
* :mod:`trackplace.milp` - an LP-file solver used as the default external
  solver command,
* :mod:`trackplace.harness` - trace parsing, run matrix, and reports,
* :mod:`trackplace.cli` - the ``trackplace`` command.
"""

from .core import (
    AccessGraph,
    AccessSequence,
    DbcConfig,
    Placement,
    VariableId,
    VariableSet,
    build_access_graph,
    intern_sequence,
    shift_distance,
    total_cost,
    total_cost_via_graph,
)
from .errors import (
    CapacityError,
    DomainError,
    InvariantViolation,
    TraceParseError,
    TrackplaceError,
    UsageError,
)
from .exact import (
    ExactResult,
    IlpConstraint,
    IlpModel,
    IlpVariable,
    branch_and_bound,
    brute_force_optimal,
    build_ilp,
    export_lp,
)
from .genetic import Chromosome, GaConfig, ga_refine
from .harness import (
    ALGORITHMS,
    AggregateRow,
    EnergyModel,
    RunConfig,
    RunReport,
    RunRow,
    TraceEntry,
    TraceFile,
    bin_by_length,
    categorize_sequence,
    emit_report,
    estimate_energy,
    parse_traces,
    reduction_vs_ofu,
    render_report,
    run_matrix,
)
from .heuristics import (
    GroupStats,
    assign_offsets,
    chen,
    chen_tb,
    mwpc_greedy,
    ofu,
    shifts_reduce,
    tie_break,
    vertex_to_group_weight,
)

__version__ = "0.1.0"

__all__ = [
    "AccessGraph",
    "AccessSequence",
    "AggregateRow",
    "ALGORITHMS",
    "CapacityError",
    "Chromosome",
    "DbcConfig",
    "DomainError",
    "EnergyModel",
    "ExactResult",
    "GaConfig",
    "GroupStats",
    "IlpConstraint",
    "IlpModel",
    "IlpVariable",
    "InvariantViolation",
    "Placement",
    "RunConfig",
    "RunReport",
    "RunRow",
    "TraceEntry",
    "TraceFile",
    "TraceParseError",
    "TrackplaceError",
    "UsageError",
    "VariableId",
    "VariableSet",
    "assign_offsets",
    "bin_by_length",
    "branch_and_bound",
    "brute_force_optimal",
    "build_access_graph",
    "build_ilp",
    "categorize_sequence",
    "chen",
    "chen_tb",
    "emit_report",
    "estimate_energy",
    "export_lp",
    "ga_refine",
    "intern_sequence",
    "mwpc_greedy",
    "ofu",
    "parse_traces",
    "reduction_vs_ofu",
    "render_report",
    "run_matrix",
    "shift_distance",
    "shifts_reduce",
    "tie_break",
    "total_cost",
    "total_cost_via_graph",
    "vertex_to_group_weight",
    "__version__",
]

#!/usr/bin/env python3
"""Benchmark harness: trace files in, comparison tables and energy out."""

import pathlib

from trackplace import RunConfig, parse_traces, render_report, run_matrix

if __name__ == "__main__":
    trace_path = pathlib.Path(__file__).parent / "traces" / "sample.trace"
    trace = parse_traces(trace_path)
    for entry in trace.entries:
        print(f"{entry.benchmark}/{entry.sequence_id}: "
              f"{entry.sequence.m} accesses, {len(entry.variables)} variables")

    # measure_time=False zeroes the runtime column so reports are
    # byte-for-byte reproducible.
    cfg = RunConfig(seed=5, measure_time=False)
    report = run_matrix(trace, ["chen_tb", "shifts_reduce", "ga", "bnb"], cfg)

    print("\nper-sequence results (reduction is vs first-use order):")
    for row in report.rows:
        cut = "" if row.reduction is None else f"  {row.reduction:+.1%}"
        print(f"  {row.benchmark}/{row.sequence_id} {row.algorithm:<14}"
              f" {row.shifts:>4} shifts{cut}  {row.status}")

    print("\nper-benchmark aggregate per algorithm:")
    for agg in report.aggregates:
        if agg.scope == "benchmark" and agg.algorithm != "ofu":
            print(f"  {agg.key:<12} {agg.algorithm:<14}"
                  f" pooled reduction {agg.pooled_reduction:+.1%}")

    print("\nshift energy at 0.5 pJ per domain per bit:")
    for algo, shifts, pj in report.energy_totals:
        print(f"  {algo:<14} {shifts:>4} shifts  {pj:>7.1f} pJ")

    # The same report renders to CSV or JSON, which is exactly what the
    # `trackplace place` command writes.
    csv_text = render_report(report, "csv")
    print("\nCSV head:")
    for line in csv_text.splitlines()[:6]:
        print(" ", line)

"""Report rendering: matplotlib figures and delimited output for scan results.

Every report-emitting subcommand can write its JSON next to a PNG figure and
a CSV table.  Rendering is strictly file-based (Agg backend); nothing here
opens a window.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def dichotomy_csv_rows(report: dict) -> tuple[list[str], list[list]]:
    header = ["constant_positions", "patterns", "edge_free_pair", "triangle", "violations"]
    rows = []
    for row in report["per_constant_set"]:
        rows.append(
            [
                "|".join(str(p) for p in row["constant"]) or "-",
                row["patterns"],
                row["edge_free_pair"],
                row["triangle"],
                row["patterns"] - row["edge_free_pair"] - row["triangle"],
            ]
        )
    return header, rows


def save_dichotomy_figure(report: dict, path: Union[str, Path]) -> None:
    header, rows = dichotomy_csv_rows(report)
    labels = [r[0] for r in rows]
    pair = [r[2] for r in rows]
    tri = [r[3] for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, len(rows) * 0.6), 4))
    xs = range(len(rows))
    ax.bar(xs, pair, label="edge-free pair", color="#4878d0")
    ax.bar(xs, tri, bottom=pair, label="triangle", color="#ee854a")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_yscale("symlog")
    ax.set_xlabel("constant positions")
    ax.set_ylabel("patterns")
    ax.set_title(
        f"4-column dichotomy scan: {report['total_patterns']} patterns, "
        f"{len(report['violations'])} violations"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def example_csv_rows(report: dict) -> tuple[list[str], list[list]]:
    header = ["disjunct", "divides", "reason"]
    rows = [
        [i + 1, v["divides"], v["reason"]]
        for i, v in enumerate(report["disjunct_verdicts"])
    ]
    return header, rows


def save_example_figure(report: dict, path: Union[str, Path]) -> None:
    verdicts = report["disjunct_verdicts"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.5))
    ax1.bar(
        range(1, len(verdicts) + 1),
        [1 if v["divides"] else 0 for v in verdicts],
        color="#4878d0",
    )
    ax1.set_xlabel("disjunct")
    ax1.set_ylabel("divides")
    ax1.set_ylim(0, 1.2)
    ax1.set_title(f"n={report['n']}: each disjunct divides")
    ax2.bar(
        ["templates", "violations"],
        [report["templates_checked"], len(report["violations"])],
        color=["#6acc64", "#d65f5f"],
    )
    ax2.set_title("non-dividing template scan")
    fig.suptitle("forking, non-dividing disjunction" + (" [OK]" if report["ok"] else " [FAIL]"))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fuzz_csv_rows(summary: dict) -> tuple[list[str], list[list]]:
    header = ["metric", "value"]
    rows = [
        ["trials", summary["trials"]],
        ["consistent", summary["consistent"]],
        ["inconsistent", summary["inconsistent"]],
        ["dividing", summary["dividing"]],
        ["invariant_checks", summary["invariant_checks"]],
        ["failures", len(summary["failures"])],
    ]
    return header, rows


def save_fuzz_figure(summary: dict, path: Union[str, Path]) -> None:
    header, rows = fuzz_csv_rows(summary)
    labels = [r[0] for r in rows]
    values = [r[1] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    colors = ["#4878d0"] * (len(rows) - 1) + ["#d65f5f" if values[-1] else "#6acc64"]
    ax.bar(labels, values, color=colors)
    ax.set_ylabel("count")
    ax.set_title(f"fuzz run: n={summary['n']} seed={summary['seed']}")
    for i, v in enumerate(values):
        ax.text(i, v, str(v), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

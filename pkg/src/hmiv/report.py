"""Report rendering: delimited files, matplotlib figures, JUnit XML.

Every analysis command can write its findings into a report directory as
CSV files with a PNG figure alongside, so results drop straight into CI
artifacts and design reviews.
"""

from __future__ import annotations

import csv
import math
import os
import xml.etree.ElementTree as ET
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import fixedpoint as fp
from .checker import Verdict
from .coexec import TestReport
from .petri import AnalysisReport, ReachabilityGraph
from .taskmodel import WorkloadMetrics

_STATUS_COLORS = {"holds": "#2a9d3a", "violated": "#c8321e", "unknown": "#d99114",
                  "pass": "#2a9d3a", "fail": "#c8321e"}


def _ensure(directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    return directory


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


# --- petri ---------------------------------------------------------------------

def petri_report(report: AnalysisReport, graph: ReachabilityGraph, directory: str) -> list[str]:
    d = _ensure(directory)
    paths = []

    inv_path = os.path.join(d, f"{report.net_name}_invariants.csv")
    places = list(graph.net.places)
    write_csv(inv_path, places + ["conserved_total"],
              [list(v) + [sum(a * b for a, b in zip(v, graph.net.initial_vector()))]
               for v in report.p_invariants])
    paths.append(inv_path)

    sum_path = os.path.join(d, f"{report.net_name}_analysis.csv")
    rows = [["explored_markings", report.explored],
            ["truncated", report.truncated],
            ["deadlocks", len(report.deadlocks)],
            ["reinitializable", report.reinitializable],
            ["reinitializable_sound", report.reinit_sound]]
    rows += [[f"availability_{e}", a] for e, a in report.event_availability.items()]
    rows += [[f"bound_{p}", b] for p, b in report.bound_per_place.items()]
    write_csv(sum_path, ["metric", "value"], rows)
    paths.append(sum_path)

    fig_path = os.path.join(d, f"{report.net_name}_reachability.png")
    paths.append(_draw_reachability(graph, fig_path))
    return paths


def _draw_reachability(graph: ReachabilityGraph, path: str) -> str:
    n = len(graph.nodes)
    shown = min(n, 200)
    angles = [2 * math.pi * i / shown for i in range(shown)]
    xs = [math.cos(a) for a in angles]
    ys = [math.sin(a) for a in angles]
    fig, ax = plt.subplots(figsize=(7, 7))
    for src, t_id, dst in graph.edges:
        if src < shown and dst < shown:
            ax.annotate("", xy=(xs[dst], ys[dst]), xytext=(xs[src], ys[src]),
                        arrowprops=dict(arrowstyle="-|>", color="#8899aa", lw=0.8,
                                        shrinkA=10, shrinkB=10))
    ax.scatter(xs, ys, s=240, c="#e8f0fe", edgecolors="#3a5fcd", zorder=3)
    for i in range(shown):
        label = ",".join(str(x) for x in graph.nodes[i])
        ax.annotate(label, (xs[i], ys[i]), ha="center", va="center", fontsize=6, zorder=4)
    title = f"{graph.net.name}: {n} reachable markings"
    if n > shown:
        title += f" (first {shown} drawn)"
    if graph.truncated:
        title += " [truncated]"
    ax.set_title(title)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


# --- workload -------------------------------------------------------------------

def workload_report(metrics: WorkloadMetrics, directory: str) -> list[str]:
    d = _ensure(directory)
    csv_path = os.path.join(d, f"workload_{metrics.scope}.csv")
    rows = [[kind, count] for kind, count in metrics.counts.items()]
    rows.append(["information_items_to_remember", metrics.information_items_to_remember])
    rows.append(["leaf_total", metrics.leaf_total])
    write_csv(csv_path, ["metric", "count"], rows)

    fig_path = os.path.join(d, f"workload_{metrics.scope}.png")
    kinds = [k for k, c in metrics.counts.items() if c]
    counts = [metrics.counts[k] for k in kinds]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    bars = ax.bar(kinds, counts, color="#3a5fcd")
    ax.bar_label(bars)
    ax.set_ylabel("leaf tasks")
    ax.set_title(f"Task kinds under '{metrics.scope}' "
                 f"({metrics.information_items_to_remember} items to remember)")
    plt.setp(ax.get_xticklabels(), rotation=20, ha="right")
    fig.tight_layout()
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
    return [csv_path, fig_path]


# --- checker --------------------------------------------------------------------

def check_report(obligations: list[Verdict], properties: list[Verdict], directory: str) -> list[str]:
    d = _ensure(directory)
    paths = []

    def rows_of(verdicts: list[Verdict]) -> list[list]:
        out = []
        for v in verdicts:
            witness = ""
            if v.counterexample is not None:
                ce = v.counterexample
                if ce.trace is not None:
                    witness = "trace: " + " ".join(ce.trace)
                elif ce.valuation is not None:
                    witness = "; ".join(f"{k}={_fmt_val(x)}" for k, x in ce.valuation.items())
                else:
                    witness = ce.description
            out.append([v.name, v.status, v.method,
                        "" if v.coverage is None else f"{v.coverage:.6f}", witness])
        return out

    ob_path = os.path.join(d, "obligations.csv")
    write_csv(ob_path, ["obligation", "status", "method", "coverage", "witness"], rows_of(obligations))
    paths.append(ob_path)
    prop_path = os.path.join(d, "properties.csv")
    write_csv(prop_path, ["property", "status", "method", "coverage", "witness"], rows_of(properties))
    paths.append(prop_path)

    fig_path = os.path.join(d, "verdicts.png")
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    for ax, verdicts, title in ((axes[0], obligations, "obligations"),
                                (axes[1], properties, "properties")):
        tally: dict[str, int] = {}
        for v in verdicts:
            tally[v.status] = tally.get(v.status, 0) + 1
        labels = sorted(tally)
        bars = ax.bar(labels, [tally[s] for s in labels],
                      color=[_STATUS_COLORS.get(s, "#888888") for s in labels])
        ax.bar_label(bars)
        ax.set_title(f"{len(verdicts)} {title}")
    fig.tight_layout()
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
    paths.append(fig_path)
    return paths


def _fmt_val(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return fp.format_value(x)
    return str(x)


# --- coexec ---------------------------------------------------------------------

def coexec_report(report: TestReport, directory: str) -> list[str]:
    d = _ensure(directory)
    csv_path = os.path.join(d, "coexec_scenarios.csv")
    write_csv(csv_path, ["scenario", "length", "result", "note"],
              [[r.index, len(r.scenario), "pass" if r.passed else "fail", r.note]
               for r in report.results])

    fig_path = os.path.join(d, "coexec_results.png")
    passed = sum(1 for r in report.results if r.passed)
    failed = len(report.results) - passed
    fig, ax = plt.subplots(figsize=(5, 4))
    bars = ax.bar(["pass", "fail"], [passed, failed],
                  color=[_STATUS_COLORS["pass"], _STATUS_COLORS["fail"]])
    ax.bar_label(bars)
    ax.set_title(f"{len(report.results)} co-executed scenarios")
    fig.tight_layout()
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
    return [csv_path, fig_path]


def junit_xml(report: TestReport, suite_name: str, path: Optional[str] = None) -> str:
    suite = ET.Element("testsuite", name=suite_name,
                       tests=str(len(report.results)),
                       failures=str(sum(1 for r in report.results if not r.passed)))
    for r in report.results:
        case = ET.SubElement(suite, "testcase",
                             name=f"scenario_{r.index:04d}",
                             classname=suite_name)
        case.set("file", " ".join(r.scenario))
        if not r.passed:
            failure = ET.SubElement(case, "failure", message=r.note)
            failure.text = " -> ".join(r.scenario)
    text = ET.tostring(suite, encoding="unicode", xml_declaration=True)
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return text

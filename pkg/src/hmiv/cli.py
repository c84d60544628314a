"""Command line front end.

    hmiv check FILE         validate, discharge obligations, check properties
    hmiv simulate FILE      replay an event script (or run interactively)
    hmiv coexec FILE        co-execute task and system models, report divergences
    hmiv workload FILE      task workload metrics
    hmiv petri FILE         Petri net static analysis
    hmiv export-json FILE   structured export of a document
    hmiv serve FILE         HTTP/WebSocket session service for live simulation

Exit codes for analysis commands: 0 everything holds, 1 a property or
scenario is violated, 2 some verdict is unknown, 3 input/parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import checker as ck
from . import coexec as cx
from . import petri as pn
from . import render
from . import statechart as sc
from . import taskmodel as tk
from .dsl import export_json, load_document
from .errors import ResourceLimit


def _load(path: str):
    """Returns the document or exits with code 3, diagnostics on stderr."""
    try:
        result = load_document(path)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(3)
    for d in result.diagnostics:
        print(f"{path}:{d.render()}", file=sys.stderr)
    if result.document is None:
        raise SystemExit(3)
    return result.document


def _statuses_exit(statuses: list[str]) -> int:
    if "violated" in statuses or "fail" in statuses:
        return 1
    if "unknown" in statuses:
        return 2
    return 0


# --- check -----------------------------------------------------------------------

def cmd_check(args) -> int:
    doc = _load(args.file)
    budget = ck.DomainBudget(product_cap=args.budget)
    statuses: list[str] = []
    obligation_verdicts: list[ck.Verdict] = []
    property_verdicts: list[ck.Verdict] = []
    structured: dict = {"file": args.file, "statecharts": [], "petrinets": []}

    for model in doc.statecharts:
        entry: dict = {"name": model.name, "obligations": [], "properties": []}
        obligations = ck.guard_obligations(model)
        print(f"statechart {model.name}: {len(obligations)} obligations")
        for ob in obligations:
            v = ck.check_obligation(model, ob, budget)
            obligation_verdicts.append(v)
            statuses.append(v.status)
            print(f"  {v.summary()}")
            if v.counterexample is not None and v.counterexample.valuation is not None:
                from .report import _fmt_val
                witness = "; ".join(f"{k}={_fmt_val(x)}"
                                    for k, x in v.counterexample.valuation.items())
                print(f"    witness: {witness} ({v.counterexample.description})")
            entry["obligations"].append(_verdict_json(v))

        props = [p for p in doc.properties if p.statechart == model.name]
        if args.property:
            props = [p for p in props if p.name == args.property]
        templates = [p for p in props if isinstance(p, ck.PropertySpec)]
        for p in templates:
            v = ck.check_template(model, p, budget)
            property_verdicts.append(v)
            statuses.append(v.status)
            print(f"  {v.summary()}")
            _print_counterexample(model, v)
            entry["properties"].append(_verdict_json(v))
        if props:
            verdicts = ck.check_reachable(model, props, max_depth=args.depth,
                                          max_states=args.max_states)
            for v in verdicts:
                v.name = f"{v.name}[reachability]"
                property_verdicts.append(v)
                statuses.append(v.status)
                print(f"  {v.summary()}")
                _print_counterexample(model, v)
                entry["properties"].append(_verdict_json(v))
        structured["statecharts"].append(entry)

    for net in doc.nets:
        report = pn.analyze(net, max_states=args.max_states)
        _print_petri(report)
        if report.deadlocks:
            statuses.append("violated")
        structured["petrinets"].append(_petri_json(report))

    if args.report_dir:
        from . import report as rp
        paths = rp.check_report(obligation_verdicts, property_verdicts, args.report_dir)
        for net in doc.nets:
            paths += rp.petri_report(pn.analyze(net, max_states=args.max_states),
                                     pn.reachability_graph(net, args.max_states), args.report_dir)
        print("report files: " + ", ".join(paths))
    if args.json:
        print(json.dumps(structured, indent=2))
    return _statuses_exit(statuses)


def _print_counterexample(model, v: ck.Verdict) -> None:
    ce = v.counterexample
    if ce is None:
        return
    if ce.trace is not None:
        path = " ".join(ce.trace) if ce.trace else "(initial state)"
        print(f"    counterexample trace: {path}")
    if ce.state is not None:
        vals = {d.name: x for d, x in zip(model.variables, ce.state.values)}
        print(f"    at mode={ce.state.mode} {vals}" +
              (f" on event {ce.event}" if ce.event else ""))
    if ce.description:
        print(f"    ({ce.description})")


def _verdict_json(v: ck.Verdict) -> dict:
    out = {"name": v.name, "status": v.status, "method": v.method}
    if v.coverage is not None:
        out["coverage"] = v.coverage
    if v.counterexample is not None:
        ce = v.counterexample
        out["counterexample"] = {
            "description": ce.description,
            "event": ce.event,
            "trace": list(ce.trace) if ce.trace is not None else None,
        }
    return out


# --- petri -----------------------------------------------------------------------

def _print_petri(report: pn.AnalysisReport) -> None:
    print(f"petrinet {report.net_name}: {report.explored} markings explored"
          + (" (truncated)" if report.truncated else ""))
    for vec in report.p_invariants:
        terms = " + ".join(
            (f"{w}*{p}" if w > 1 else p)
            for p, w in zip(report.places, vec) if w)
        print(f"  invariant: {terms} is conserved")
    print(f"  deadlocks: {len(report.deadlocks)}"
          + (f" {report.deadlocks}" if report.deadlocks else ""))
    print(f"  reinitializable: {report.reinitializable}"
          + ("" if report.reinit_sound else " (not sound: truncated)"))
    for event, availability in report.event_availability.items():
        print(f"  event {event}: {availability}")
    for marking, event, ids in report.nondeterminism:
        print(f"  warning: event {event} enables {ids} together at {marking}")


def _petri_json(report: pn.AnalysisReport) -> dict:
    return {
        "name": report.net_name,
        "p_invariants": [list(v) for v in report.p_invariants],
        "deadlocks": report.deadlocks,
        "bounds": report.bound_per_place,
        "availability": report.event_availability,
        "reinitializable": report.reinitializable,
        "explored": report.explored,
        "truncated": report.truncated,
    }


def cmd_petri(args) -> int:
    doc = _load(args.file)
    if not doc.nets:
        print("error: document contains no petrinet section", file=sys.stderr)
        return 3
    status = 0
    payload = []
    for net in doc.nets:
        report = pn.analyze(net, max_states=args.max_states)
        _print_petri(report)
        payload.append(_petri_json(report))
        if report.deadlocks:
            status = 1
        if args.report_dir:
            from . import report as rp
            graph = pn.reachability_graph(net, args.max_states)
            print("report files: " + ", ".join(rp.petri_report(report, graph, args.report_dir)))
    if args.json:
        print(json.dumps(payload, indent=2))
    return status


# --- simulate ---------------------------------------------------------------------

def cmd_simulate(args) -> int:
    doc = _load(args.file)
    model = _pick_statechart(doc, args.statechart)
    if model is None:
        return 3
    events = model.events()
    state = sc.initial_state(model)
    lines: list[str] = []
    if args.script:
        try:
            with open(args.script, "r", encoding="utf-8") as f:
                lines = [ln.strip() for ln in f]
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return 3
    print("event\tresult\tmode\tdisplay")
    print(f"(init)\t-\t{state.mode}\t{render.display_text(model, state)}")

    def run_line(line: str) -> Optional[int]:
        nonlocal state
        if not line or line.startswith("//") or line.startswith("#"):
            return None
        if line.split()[0] == "tick":
            try:
                dt = int(line.split()[1])
            except (IndexError, ValueError):
                print(f"error: malformed tick line: {line!r}", file=sys.stderr)
                return 3
            state = sc.tick(model, state, dt)
            print(f"tick {dt}\t-\t{state.mode}\t{render.display_text(model, state)}")
            return None
        if line not in events:
            print(f"error: unknown event '{line}'", file=sys.stderr)
            return 3
        outcome = sc.step(model, state, line)
        state = outcome.state
        result = "ignored" if outcome.ignored else "accepted"
        print(f"{line}\t{result}\t{state.mode}\t{render.display_text(model, state)}")
        return None

    if args.script:
        for line in lines:
            code = run_line(line)
            if code is not None:
                return code
    elif args.interactive:
        print("// type event names (or 'tick N', 'quit'):", file=sys.stderr)
        for line in sys.stdin:
            line = line.strip()
            if line in ("quit", "exit"):
                break
            code = run_line(line)
            if code is not None:
                return code
    return 0


def _pick_statechart(doc, name: Optional[str]):
    if name:
        model = doc.statechart(name)
        if model is None:
            print(f"error: no statechart named '{name}'", file=sys.stderr)
            return None
        return model
    if not doc.statecharts:
        print("error: document contains no statechart section", file=sys.stderr)
        return None
    return doc.statecharts[0]


# --- coexec ----------------------------------------------------------------------

def cmd_coexec(args) -> int:
    doc = _load(args.file)
    if not doc.correspondences:
        print("error: document contains no correspondence section", file=sys.stderr)
        return 3
    status = 0
    for corr in doc.correspondences:
        tm = doc.taskmodel(corr.taskmodel)
        model = doc.statechart(corr.statechart)
        if tm is None or model is None:
            print(f"error: correspondence '{corr.name}' references missing sections",
                  file=sys.stderr)
            return 3
        try:
            binding = cx.bind(corr, tm, model)
        except (cx.UnboundInputTask, cx.UnknownEvent, cx.KindMismatch) as e:
            print(f"error: {e}", file=sys.stderr)
            return 3
        for w in binding.warnings:
            print(f"warning: {w}", file=sys.stderr)
        print(f"correspondence {corr.name}: sweep restricted to bound events "
              f"({', '.join(sorted(set(corr.input_bindings.values())))}); "
              "complete co-states exempt from direction 2")
        try:
            divergences = cx.find_divergences(binding, max_length=args.depth)
        except ResourceLimit as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        scenarios = tk.enumerate_scenarios(tm, args.depth)
        test_report = cx.run_tests(binding, scenarios.scenarios)
        passed = sum(1 for r in test_report.results if r.passed)
        print(f"  {len(scenarios.scenarios)} scenarios (enumeration "
              f"{'complete' if scenarios.complete else 'length-capped'}), {passed} passed")
        print(f"  {len(divergences)} divergences")
        for d in divergences:
            print(f"    {d.render()}")
        if divergences or passed != len(test_report.results):
            status = 1
        if args.junit:
            from . import report as rp
            rp.junit_xml(test_report, f"coexec_{corr.name}", args.junit)
            print(f"  junit report: {args.junit}")
        if args.report_dir:
            from . import report as rp
            print("  report files: " + ", ".join(rp.coexec_report(test_report, args.report_dir)))
        if args.json:
            print(json.dumps({
                "correspondence": corr.name,
                "scenarios": len(scenarios.scenarios),
                "enumeration_complete": scenarios.complete,
                "passed": passed,
                "divergences": [{"kind": d.kind, "detail": d.detail, "trace": list(d.trace)}
                                for d in divergences],
            }, indent=2))
    return status


# --- workload ---------------------------------------------------------------------

def cmd_workload(args) -> int:
    doc = _load(args.file)
    if not doc.taskmodels:
        print("error: document contains no taskmodel section", file=sys.stderr)
        return 3
    tm = doc.taskmodels[0]
    scope = args.scope or tm.root.id
    try:
        metrics = tk.workload_metrics(tm, scope)
    except tk.UnknownTask:
        print(f"error: no task named '{scope}'", file=sys.stderr)
        return 3
    print(f"workload for '{scope}' ({metrics.leaf_total} leaf tasks)")
    for kind, count in metrics.counts.items():
        if count:
            print(f"  {kind}: {count}")
    cognitive = sum(metrics.counts[k] for k in tk.COGNITIVE_KINDS)
    print(f"  cognitive total: {cognitive}")
    print(f"  information items to remember: {metrics.information_items_to_remember}")
    if args.report_dir:
        from . import report as rp
        print("report files: " + ", ".join(rp.workload_report(metrics, args.report_dir)))
    if args.json:
        print(json.dumps({"scope": scope, "counts": metrics.counts,
                          "cognitive_total": cognitive,
                          "information_items_to_remember": metrics.information_items_to_remember,
                          "leaf_total": metrics.leaf_total}, indent=2))
    return 0


# --- export / serve ----------------------------------------------------------------

def cmd_export_json(args) -> int:
    doc = _load(args.file)
    print(json.dumps(export_json(doc), indent=2))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(root=args.root, default_model=args.file,
                     frozen_time=args.frozen_time, idle_minutes=args.idle_minutes,
                     ui_dir=args.ui)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as e:
        print(f"error: could not serve on port {args.port}: {e}", file=sys.stderr)
        return 4
    return 0


# --- entry point --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hmiv",
                                     description="modelling and verification workbench "
                                                 "for human-machine interface logic")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help=".hmi document")
        p.add_argument("--json", action="store_true", help="also print structured JSON")
        p.add_argument("--report-dir", help="write CSV and figure reports into this directory")

    p = sub.add_parser("check", help="obligations and property verification")
    common(p)
    p.add_argument("--property", help="check a single property by name")
    p.add_argument("--depth", type=int, default=25, help="reachability depth bound")
    p.add_argument("--budget", type=int, default=ck.DEFAULT_PRODUCT_CAP,
                   help="max exhaustive projection size")
    p.add_argument("--max-states", type=int, default=ck.DEFAULT_MAX_STATES)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("simulate", help="replay an event script")
    p.add_argument("file")
    p.add_argument("--script", help="file with one event per line ('tick N' advances timers)")
    p.add_argument("--interactive", action="store_true")
    p.add_argument("--statechart", help="statechart name (default: first in the document)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("coexec", help="task/system co-execution analysis")
    common(p)
    p.add_argument("--depth", type=int, default=20, help="max scenario length")
    p.add_argument("--junit", help="write a JUnit XML report to this path")
    p.set_defaults(fn=cmd_coexec)

    p = sub.add_parser("workload", help="task workload metrics")
    common(p)
    p.add_argument("--scope", help="task id (default: task model root)")
    p.set_defaults(fn=cmd_workload)

    p = sub.add_parser("petri", help="Petri net static analysis")
    common(p)
    p.add_argument("--max-states", type=int, default=pn.DEFAULT_MAX_STATES)
    p.set_defaults(fn=cmd_petri)

    p = sub.add_parser("export-json", help="structured export of a document")
    p.add_argument("file")
    p.set_defaults(fn=cmd_export_json)

    p = sub.add_parser("serve", help="HTTP/WebSocket live-session service")
    p.add_argument("file", nargs="?", help="default .hmi document for new sessions")
    p.add_argument("--root", default=".", help="directory that session model paths resolve under")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8089)
    p.add_argument("--frozen-time", action="store_true",
                   help="disable wall-clock timers (reproducible demos)")
    p.add_argument("--idle-minutes", type=float, default=30.0)
    p.add_argument("--ui", help="static directory to mount at /ui")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

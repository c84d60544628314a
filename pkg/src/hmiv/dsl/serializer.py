"""Canonical pretty-printer and structured export for .hmi documents.

serialize -> parse is the identity on valid documents (up to spans), and the
printed form is stable across runs, so serialized fixtures diff cleanly.
"""

from __future__ import annotations

from .. import expr as ex
from .. import fixedpoint as fp
from ..checker import InvariantSpec, PropertySpec
from ..coexec import Correspondence
from ..expr import BoolType, DecimalType, EnumType, StrType
from ..petri import NetTransition, PetriNet
from ..statechart import StatechartModel, TimerDecl, Transition, VariableDecl
from ..taskmodel import TaskModel, TaskNode
from .document import Document

_OPERATOR_NAMES = {"enable": "enable", "choice": "choice",
                   "order_independent": "order_independent", "concurrent": "concurrent",
                   "optional_child": "optional", "iterate_child": "iterate"}


def _render_type(t) -> str:
    if isinstance(t, BoolType):
        return "boolean"
    if isinstance(t, DecimalType):
        return "decimal"
    if isinstance(t, EnumType):
        return f"enum({', '.join(t.literals)})"
    return f'string({t.max_len}, "{t.alphabet or ""}")'


def _render_value(value, t) -> str:
    if isinstance(t, BoolType):
        return "true" if value else "false"
    if isinstance(t, DecimalType):
        return fp.format_value(value)
    if isinstance(t, StrType):
        return f'"{value}"'
    return str(value)


def _statechart(m: StatechartModel, out: list[str]) -> None:
    out.append(f"statechart {m.name} {{")
    out.append(f"  modes {', '.join(m.modes)}")
    if m.declared_events:
        out.append(f"  events {', '.join(m.declared_events)}")
    out.append(f"  initial {m.initial_mode}")
    for v in m.variables:
        rng = ""
        if v.range is not None:
            rng = f" in [{fp.format_value(v.range[0])}, {fp.format_value(v.range[1])}]"
        out.append(f"  var {v.name}: {_render_type(v.type)}{rng} = {_render_value(v.initial, v.type)}")
    for tm in m.timers:
        out.append(f"  timer {tm.name} {tm.duration_ms} ms in {', '.join(tm.modes)} emits {tm.event}")
    by_mode: dict[str, list[str]] = {}
    for mode, event in m.responds:
        by_mode.setdefault(mode, []).append(event)
    for mode, events in by_mode.items():
        out.append(f"  responds {mode}: {', '.join(events)}")
    for t in m.transitions:
        line = f"  transition {t.id}: {t.source} -> {t.target} on {t.event}"
        if not (isinstance(t.guard, ex.Lit) and t.guard.value is True):
            line += f" when {ex.render(t.guard)}"
        if t.actions:
            line += " do " + ", ".join(f"{n} := {ex.render(e)}" for n, e in t.actions)
        out.append(line)
    out.append("}")


def _petrinet(n: PetriNet, out: list[str]) -> None:
    out.append(f"petrinet {n.name} {{")
    for p in n.places:
        tokens = n.initial_marking.get(p, 0)
        out.append(f"  place {p}" + (f" tokens {tokens}" if tokens else ""))
    for t in n.transitions:
        head = f"  transition {t.id}"
        if t.event:
            head += f" on {t.event}"
        arcs = []
        if t.inputs:
            arcs.append("in " + ", ".join(
                p if w == 1 else f"{p} * {w}" for p, w in t.inputs.items()))
        if t.outputs:
            arcs.append("out " + ", ".join(
                p if w == 1 else f"{p} * {w}" for p, w in t.outputs.items()))
        out.append(head + " { " + "; ".join(arcs) + " }")
    out.append("}")


def _task(n: TaskNode, out: list[str], indent: str) -> None:
    head = _OPERATOR_NAMES[n.operator] if n.operator else n.kind
    line = f"{indent}task {n.id}"
    if n.label != n.id:
        line += f' "{n.label}"'
    line += f": {head}"
    if n.produces:
        line += " produces " + ", ".join(f'"{x}"' for x in n.produces)
    if n.consumes:
        line += " consumes " + ", ".join(f'"{x}"' for x in n.consumes)
    if n.children:
        out.append(line + " {")
        for c in n.children:
            _task(c, out, indent + "  ")
        out.append(indent + "}")
    else:
        out.append(line)


def _taskmodel(t: TaskModel, out: list[str]) -> None:
    out.append(f"taskmodel {t.name} {{")
    if t.information_items:
        out.append("  items " + ", ".join(f'"{x}"' for x in t.information_items))
    _task(t.root, out, "  ")
    out.append("}")


def _correspondence(c: Correspondence, out: list[str]) -> None:
    out.append(f"correspondence {c.name} {{")
    out.append(f"  taskmodel {c.taskmodel}")
    out.append(f"  statechart {c.statechart}")
    for task, event in c.input_bindings.items():
        out.append(f"  input {task} -> {event}")
    for obs, task in c.output_bindings:
        out.append(f"  output {ex.render(obs)} -> {task}")
    out.append("}")


def _property(p, out: list[str]) -> None:
    out.append(f"property {p.name} {{")
    out.append(f"  statechart {p.statechart}")
    if isinstance(p, InvariantSpec):
        out.append(f"  require {ex.render(p.require)}")
    else:
        actions = ", ".join(e if m is None else f"{e} @ {m}" for e, m in p.action_class)
        out.append(f"  actions {actions}")
        if not (isinstance(p.guard, ex.Lit) and p.guard.value is True):
            out.append(f"  guard {ex.render(p.guard)}")
        out.append("  filter pre " + ", ".join(ex.render(e) for e in p.filter_pre))
        out.append("  filter post " + ", ".join(ex.render(e) for e in p.filter_post))
        rel = p.relation if isinstance(p.relation, str) else ex.render(p.relation)
        out.append(f"  relation {rel}")
    out.append("}")


def serialize_document(doc: Document) -> str:
    out: list[str] = []
    for m in doc.statecharts:
        _statechart(m, out)
        out.append("")
    for n in doc.nets:
        _petrinet(n, out)
        out.append("")
    for t in doc.taskmodels:
        _taskmodel(t, out)
        out.append("")
    for c in doc.correspondences:
        _correspondence(c, out)
        out.append("")
    for p in doc.properties:
        _property(p, out)
        out.append("")
    while out and out[-1] == "":
        out.pop()
    return "\n".join(out) + ("\n" if out else "")


# --- structured export ----------------------------------------------------------

def export_json(doc: Document) -> dict:
    """One plain-data object per section, stable key order."""

    def expr_str(e) -> str:
        return ex.render(e)

    def var_json(v: VariableDecl) -> dict:
        d = {"name": v.name, "type": _render_type(v.type),
             "initial": _render_value(v.initial, v.type)}
        if v.range is not None:
            d["range"] = [fp.format_value(v.range[0]), fp.format_value(v.range[1])]
        return d

    def transition_json(t: Transition) -> dict:
        return {"id": t.id, "source": t.source, "target": t.target, "event": t.event,
                "guard": expr_str(t.guard),
                "actions": [{"variable": n, "value": expr_str(e)} for n, e in t.actions]}

    def timer_json(t: TimerDecl) -> dict:
        return {"name": t.name, "duration_ms": t.duration_ms,
                "event": t.event, "modes": list(t.modes)}

    def net_transition_json(t: NetTransition) -> dict:
        return {"id": t.id, "event": t.event,
                "inputs": dict(t.inputs), "outputs": dict(t.outputs)}

    def task_json(n: TaskNode) -> dict:
        return {"id": n.id, "label": n.label,
                "kind": n.kind if n.operator is None else "abstract",
                "operator": n.operator,
                "produces": list(n.produces), "consumes": list(n.consumes),
                "children": [task_json(c) for c in n.children]}

    def property_json(p) -> dict:
        if isinstance(p, InvariantSpec):
            return {"name": p.name, "statechart": p.statechart, "kind": "invariant",
                    "require": expr_str(p.require)}
        return {"name": p.name, "statechart": p.statechart, "kind": "template",
                "actions": [{"event": e, "mode": m} for e, m in p.action_class],
                "guard": expr_str(p.guard),
                "filter_pre": [expr_str(e) for e in p.filter_pre],
                "filter_post": [expr_str(e) for e in p.filter_post],
                "relation": p.relation if isinstance(p.relation, str) else expr_str(p.relation)}

    return {
        "statecharts": [{
            "name": m.name, "modes": list(m.modes), "initial": m.initial_mode,
            "events": m.events(),
            "variables": [var_json(v) for v in m.variables],
            "timers": [timer_json(t) for t in m.timers],
            "responds": [{"mode": mo, "event": ev} for mo, ev in m.responds],
            "transitions": [transition_json(t) for t in m.transitions],
        } for m in doc.statecharts],
        "petrinets": [{
            "name": n.name, "places": list(n.places),
            "initial_marking": {p: n.initial_marking.get(p, 0) for p in n.places},
            "transitions": [net_transition_json(t) for t in n.transitions],
        } for n in doc.nets],
        "taskmodels": [{
            "name": t.name, "information_items": list(t.information_items),
            "root": task_json(t.root),
        } for t in doc.taskmodels],
        "correspondences": [{
            "name": c.name, "taskmodel": c.taskmodel, "statechart": c.statechart,
            "inputs": [{"task": task, "event": event} for task, event in c.input_bindings.items()],
            "outputs": [{"observation": expr_str(o), "task": task} for o, task in c.output_bindings],
        } for c in doc.correspondences],
        "properties": [property_json(p) for p in doc.properties],
    }

"""Cross-reference and per-model validation of parsed documents."""

from __future__ import annotations

from .. import expr as ex
from ..checker import InvariantSpec, validate_property
from ..coexec import Correspondence
from ..expr import BoolType, Span
from ..petri import validate_net
from ..statechart import validate_statechart
from ..taskmodel import validate_taskmodel
from .document import Diagnostic, Document

_TOP = (1, 1, 1, 1)


def _diag(severity: str, message: str, span, code: str) -> Diagnostic:
    return Diagnostic(severity, message, span or _TOP, code)


def validate_document(doc: Document) -> list[Diagnostic]:
    """Empty list iff the document and every contained model are well formed."""
    out: list[Diagnostic] = []

    for kind, items in (("statechart", doc.statecharts), ("petrinet", doc.nets),
                        ("taskmodel", doc.taskmodels),
                        ("correspondence", doc.correspondences),
                        ("property", doc.properties)):
        names = [x.name for x in items]
        for name in sorted({n for n in names if names.count(n) > 1}):
            item = next(x for x in items if x.name == name)
            out.append(_diag("error", f"duplicate {kind} name '{name}'", item.span, "E_DUPLICATE"))

    for m in doc.statecharts:
        for p in validate_statechart(m):
            out.append(_diag("error", p.message, p.span or m.span, p.code))
    for n in doc.nets:
        for p in validate_net(n):
            out.append(_diag("error", p.message, p.span or n.span, p.code))
    for t in doc.taskmodels:
        for p in validate_taskmodel(t):
            out.append(_diag("error", p.message, p.span or t.span, p.code))

    for c in doc.correspondences:
        out.extend(_validate_correspondence(c, doc))

    for p in doc.properties:
        model = doc.statechart(p.statechart)
        if model is None:
            out.append(_diag("error", f"property '{p.name}' references unknown statechart "
                             f"'{p.statechart}'", p.span, "E_UNRESOLVED"))
            continue
        if validate_statechart(model):
            continue   # the model's own diagnostics already cover this
        for problem in validate_property(p, model):
            out.append(_diag("error", problem.message, problem.span or p.span, problem.code))

    return out


def _validate_correspondence(c: Correspondence, doc: Document) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    tm = doc.taskmodel(c.taskmodel)
    model = doc.statechart(c.statechart)
    if tm is None:
        out.append(_diag("error", f"correspondence '{c.name}' references unknown task model "
                         f"'{c.taskmodel}'", c.span, "E_UNRESOLVED"))
    if model is None:
        out.append(_diag("error", f"correspondence '{c.name}' references unknown statechart "
                         f"'{c.statechart}'", c.span, "E_UNRESOLVED"))
    if tm is None or model is None:
        return out
    if validate_taskmodel(tm) or validate_statechart(model):
        return out

    events = set(model.events())
    scope = model.scope(with_mode=True)
    for task_id, event in c.input_bindings.items():
        if not tm.has_node(task_id):
            out.append(_diag("error", f"correspondence '{c.name}' binds unknown task "
                             f"'{task_id}'", c.span, "E_UNRESOLVED"))
            continue
        if tm.node(task_id).kind != "interactive_input":
            out.append(_diag("error", f"'{task_id}' is {tm.node(task_id).kind}; only "
                             "interactive_input tasks bind to events", c.span, "E_TYPE"))
        if event not in events:
            out.append(_diag("error", f"correspondence '{c.name}' binds '{task_id}' to "
                             f"unknown event '{event}'", c.span, "E_UNRESOLVED"))
    bound_outputs = set()
    for obs, task_id in c.output_bindings:
        bound_outputs.add(task_id)
        if not tm.has_node(task_id):
            out.append(_diag("error", f"correspondence '{c.name}' binds observation to "
                             f"unknown task '{task_id}'", c.span, "E_UNRESOLVED"))
            continue
        if tm.node(task_id).kind != "interactive_output":
            out.append(_diag("error", f"'{task_id}' is {tm.node(task_id).kind}; observations "
                             "bind to interactive_output tasks", c.span, "E_TYPE"))
        try:
            t = ex.typecheck(obs, scope)
            if not isinstance(t, BoolType):
                out.append(_diag("error", f"observation for '{task_id}' must be boolean, "
                                 f"got {t}", getattr(obs, "span", None) or c.span, "E_TYPE"))
        except ex.ExprError as e:
            out.append(_diag("error", f"observation for '{task_id}': {e.message}",
                             e.span or c.span, "E_TYPE"))

    for leaf_id in tm.leaves():
        node = tm.node(leaf_id)
        if node.kind == "interactive_input" and leaf_id not in c.input_bindings:
            out.append(_diag("error", f"interactive input task '{leaf_id}' has no bound event",
                             c.span, "E_UNRESOLVED"))
        if node.kind == "interactive_output" and leaf_id not in bound_outputs:
            out.append(_diag("warning", f"interactive output task '{leaf_id}' has no bound "
                             "observation", c.span, "W_UNBOUND"))
    return out

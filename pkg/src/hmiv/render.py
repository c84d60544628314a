"""Shared state rendering for transcripts, the session service and the UI.

A statechart that follows the barometer convention (variables `units`,
`display` and `entry`) renders through the case-study display logic; any
other model renders as its mode name.
"""

from __future__ import annotations

from . import fcu
from .statechart import StatechartModel, SystemState


def display_text(model: StatechartModel, state: SystemState) -> str:
    names = {v.name for v in model.variables}
    if {"units", "display", "entry"} <= names:
        env = state.valuation(model)
        return fcu.render_display(env["display"], env["units"], state.mode, env["entry"])
    return state.mode


def state_json(model: StatechartModel, state: SystemState, enabled: list[str]) -> dict:
    from . import fixedpoint as fp
    from .expr import BoolType, DecimalType

    variables = {}
    for decl, value in zip(model.variables, state.values):
        if isinstance(decl.type, DecimalType):
            variables[decl.name] = fp.format_value(value)
        elif isinstance(decl.type, BoolType):
            variables[decl.name] = "true" if value else "false"
        else:
            variables[decl.name] = str(value)
    return {
        "mode": state.mode,
        "variables": variables,
        "display": display_text(model, state),
        "enabled": enabled,
    }

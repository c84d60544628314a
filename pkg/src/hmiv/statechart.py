"""Interaction-logic models: typed state, guarded event transitions, timers.

A model is a flat statechart: a set of modes, typed variables, transitions
labelled with events, and inactivity timers that emit an expiry event.  Step
semantics are deterministic by construction (the checker discharges the
disjointness obligations that guarantee it): an event either fires exactly
one transition or is ignored, leaving the state untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from . import expr as ex
from .expr import BOOL, DECIMAL, BoolType, DecimalType, EnumType, Expr, Lit, Span, StrType, Type

TRUE = Lit(True, BOOL)


@dataclass(frozen=True)
class VariableDecl:
    name: str
    type: Type
    initial: object
    range: Optional[tuple[int, int]] = None  # declared bounds, decimals only
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Transition:
    id: str
    source: str
    target: str
    event: str
    guard: Expr = TRUE
    actions: tuple[tuple[str, Expr], ...] = ()
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class TimerDecl:
    name: str
    duration_ms: int
    event: str
    modes: tuple[str, ...]
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class StatechartModel:
    name: str
    modes: tuple[str, ...]
    initial_mode: str
    variables: tuple[VariableDecl, ...] = ()
    transitions: tuple[Transition, ...] = ()
    timers: tuple[TimerDecl, ...] = ()
    # (mode, event) pairs the model promises to always respond to; drives
    # coverage obligations.
    responds: tuple[tuple[str, str], ...] = ()
    # events that exist even without a transition (a model may deliberately
    # ignore an event everywhere)
    declared_events: tuple[str, ...] = ()
    span: Optional[Span] = field(default=None, compare=False)
    initial_span: Optional[Span] = field(default=None, compare=False)

    def var_index(self) -> dict[str, int]:
        return {v.name: i for i, v in enumerate(self.variables)}

    def events(self) -> list[str]:
        """All event identifiers: explicitly declared ones first, then
        transition-declaration order, then timer expiry events."""
        seen: list[str] = []
        for ev in self.declared_events:
            if ev not in seen:
                seen.append(ev)
        for t in self.transitions:
            if t.event not in seen:
                seen.append(t.event)
        for tm in self.timers:
            if tm.event not in seen:
                seen.append(tm.event)
        return seen

    def mode_type(self) -> EnumType:
        return EnumType(tuple(self.modes))

    def scope(self, with_mode: bool = False) -> ex.Scope:
        types = {v.name: v.type for v in self.variables}
        return ex.Scope(types, self.mode_type() if with_mode else None)


@dataclass(frozen=True)
class SystemState:
    mode: str
    values: tuple            # one slot per declared variable, declaration order
    timers: tuple = ()       # elapsed ms per declared timer

    def valuation(self, model: StatechartModel) -> dict[str, object]:
        env: dict[str, object] = {v.name: x for v, x in zip(model.variables, self.values)}
        env[ex.MODE_VAR] = self.mode
        return env


@dataclass(frozen=True)
class StepOutcome:
    state: SystemState
    fired: Optional[str]     # transition id, or None when ignored
    ignored: bool


class NondeterminismError(Exception):
    def __init__(self, event: str, ids: list[str]):
        super().__init__(f"event '{event}' enables {len(ids)} transitions: {', '.join(ids)}")
        self.event = event
        self.ids = ids


@dataclass
class Problem:
    message: str
    span: Optional[Span] = None
    code: str = "E_MODEL"


# --- validation ---------------------------------------------------------------

def value_in_domain(value: object, decl: VariableDecl) -> bool:
    t = decl.type
    if isinstance(t, BoolType):
        return isinstance(value, bool)
    if isinstance(t, DecimalType):
        if not isinstance(value, int) or isinstance(value, bool):
            return False
        return decl.range is None or decl.range[0] <= value <= decl.range[1]
    if isinstance(t, EnumType):
        return value in t.literals
    if isinstance(t, StrType):
        return (isinstance(value, str) and len(value) <= t.max_len
                and (t.alphabet is None or all(c in t.alphabet for c in value)))
    return False


def validate_statechart(model: StatechartModel) -> list[Problem]:
    problems: list[Problem] = []

    def err(msg: str, span: Optional[Span] = None, code: str = "E_MODEL") -> None:
        problems.append(Problem(msg, span, code))

    if len(set(model.modes)) != len(model.modes):
        err(f"duplicate mode names in statechart '{model.name}'", model.span, "E_DUPLICATE")
    if model.initial_mode not in model.modes:
        err(f"initial mode '{model.initial_mode}' is not declared",
            model.initial_span or model.span, "E_UNRESOLVED")

    names = [v.name for v in model.variables]
    if len(set(names)) != len(names):
        err(f"duplicate variable names in statechart '{model.name}'", model.span, "E_DUPLICATE")

    scope = model.scope(with_mode=False)
    for lit in sorted(scope.ambiguous_literals):
        err(f"enum literal '{lit}' is declared by more than one type", model.span, "E_DUPLICATE")
    for v in model.variables:
        if v.name in scope.literals:
            err(f"variable '{v.name}' collides with an enum literal", v.span, "E_DUPLICATE")
        if v.range is not None and not isinstance(v.type, DecimalType):
            err(f"range annotation on non-decimal variable '{v.name}'", v.span, "E_TYPE")
        if not value_in_domain(v.initial, v):
            err(f"initial value of '{v.name}' is outside its type domain", v.span, "E_TYPE")

    ids = [t.id for t in model.transitions]
    if len(set(ids)) != len(ids):
        err(f"duplicate transition ids in statechart '{model.name}'", model.span, "E_DUPLICATE")

    var_types = {v.name: v.type for v in model.variables}
    for t in model.transitions:
        if t.source not in model.modes:
            err(f"transition '{t.id}': unknown source mode '{t.source}'", t.span, "E_UNRESOLVED")
        if t.target not in model.modes:
            err(f"transition '{t.id}': unknown target mode '{t.target}'", t.span, "E_UNRESOLVED")
        try:
            gt = ex.typecheck(t.guard, scope)
            if not isinstance(gt, BoolType):
                err(f"transition '{t.id}': guard is {gt}, not boolean", t.span, "E_TYPE")
        except ex.ExprError as e:
            err(f"transition '{t.id}': {e.message}", e.span or t.span, "E_TYPE")
        for target, rhs in t.actions:
            if target not in var_types:
                err(f"transition '{t.id}': assignment to unknown variable '{target}'", t.span, "E_UNRESOLVED")
                continue
            try:
                rt = ex.typecheck(rhs, scope)
                if not ex.same_type(rt, var_types[target]):
                    err(f"transition '{t.id}': cannot assign {rt} to '{target}'", t.span, "E_TYPE")
            except ex.ExprError as e:
                err(f"transition '{t.id}': {e.message}", e.span or t.span, "E_TYPE")

    tnames = [tm.name for tm in model.timers]
    if len(set(tnames)) != len(tnames):
        err("duplicate timer names", model.span, "E_DUPLICATE")
    for tm in model.timers:
        if tm.duration_ms <= 0:
            err(f"timer '{tm.name}': duration must be positive", tm.span, "E_MODEL")
        for m in tm.modes:
            if m not in model.modes:
                err(f"timer '{tm.name}': unknown mode '{m}'", tm.span, "E_UNRESOLVED")

    for mode, event in model.responds:
        if mode not in model.modes:
            err(f"responds declaration names unknown mode '{mode}'", model.span, "E_UNRESOLVED")

    return problems


# --- prepared runtime ----------------------------------------------------------

class Runtime:
    """Compiled dispatch tables for a validated model."""

    def __init__(self, model: StatechartModel):
        self.model = model
        idx = model.var_index()
        caps = {v.name: v.type.max_len for v in model.variables if isinstance(v.type, StrType)}
        self.by_source_event: dict[tuple[str, str], list] = {}
        for t in model.transitions:
            guard = ex.compile_expr(t.guard, idx, caps)
            actions = tuple((idx[name], ex.compile_expr(rhs, idx, caps)) for name, rhs in t.actions)
            self.by_source_event.setdefault((t.source, t.event), []).append((t, guard, actions))
        self.initial_values = tuple(v.initial for v in model.variables)


_runtimes: dict[int, Runtime] = {}


def runtime(model: StatechartModel) -> Runtime:
    rt = _runtimes.get(id(model))
    if rt is None or rt.model is not model:
        problems = validate_statechart(model)
        if problems:
            raise ValueError(f"invalid statechart '{model.name}': {problems[0].message}")
        rt = Runtime(model)
        _runtimes[id(model)] = rt
    return rt


# --- operations -----------------------------------------------------------------

def initial_state(model: StatechartModel) -> SystemState:
    rt = runtime(model)
    return SystemState(model.initial_mode, rt.initial_values, (0,) * len(model.timers))


def eval_in_state(model: StatechartModel, e: Expr, state: SystemState) -> object:
    """Evaluate an expression against a state (tree walk; convenience API)."""
    return ex.eval_expr(e, state.valuation(model))


def enabled_transitions(model: StatechartModel, state: SystemState) -> set[str]:
    rt = runtime(model)
    out = set()
    for (source, _event), entries in rt.by_source_event.items():
        if source != state.mode:
            continue
        for t, guard, _actions in entries:
            if guard(state.values, state.mode):
                out.add(t.id)
    return out


def enabled_events(model: StatechartModel, state: SystemState) -> list[str]:
    """Events with at least one enabled transition, in declaration order."""
    rt = runtime(model)
    out = []
    for ev in model.events():
        entries = rt.by_source_event.get((state.mode, ev), ())
        if any(guard(state.values, state.mode) for _t, guard, _a in entries):
            out.append(ev)
    return out


def step(model: StatechartModel, state: SystemState, event: str) -> StepOutcome:
    """Apply one event.  Ignored events return the state unchanged; two or
    more enabled transitions raise NondeterminismError."""
    rt = runtime(model)
    entries = rt.by_source_event.get((state.mode, event), ())
    matches = [(t, actions) for t, guard, actions in entries if guard(state.values, state.mode)]
    if not matches:
        return StepOutcome(state, None, True)
    if len(matches) > 1:
        raise NondeterminismError(event, [t.id for t, _ in matches])
    t, actions = matches[0]
    if actions:
        new_values = list(state.values)
        # right-hand sides all read the pre-state; writes apply in order
        computed = [(slot, rhs(state.values, state.mode)) for slot, rhs in actions]
        for slot, value in computed:
            new_values[slot] = value
        values = tuple(new_values)
    else:
        values = state.values
    # accepted events reset every timer
    return StepOutcome(SystemState(t.target, values, (0,) * len(model.timers)), t.id, False)


def tick(model: StatechartModel, state: SystemState, dt_ms: int) -> SystemState:
    """Advance inactivity timers by dt_ms.

    Timers attached to the current mode accumulate time; each timer reaching
    its duration emits its expiry event exactly once through step().  A fired
    timer is reset whether or not the model had a transition for it.
    """
    if dt_ms < 0:
        raise ValueError("dt must be non-negative")
    if dt_ms == 0 or not model.timers:
        return state
    elapsed = list(state.timers)
    expired: list[int] = []
    for i, tm in enumerate(model.timers):
        if state.mode in tm.modes:
            elapsed[i] += dt_ms
            if elapsed[i] >= tm.duration_ms:
                expired.append(i)
    current = SystemState(state.mode, state.values, tuple(elapsed))
    for i in expired:
        outcome = step(model, current, model.timers[i].event)
        if outcome.ignored:
            reset = list(current.timers)
            reset[i] = 0
            current = SystemState(current.mode, current.values, tuple(reset))
        else:
            current = outcome.state
    return current


def state_ok(model: StatechartModel, state: SystemState) -> bool:
    """Type-domain well-formedness of a state (used by property tests)."""
    if state.mode not in model.modes:
        return False
    if len(state.values) != len(model.variables):
        return False
    return all(value_in_domain(x, v) for v, x in zip(model.variables, state.values))


def make_state(model: StatechartModel, mode: str, valuation: dict[str, object]) -> SystemState:
    """Build a state from a name -> value map (missing names take initials)."""
    rt = runtime(model)
    values = list(rt.initial_values)
    idx = model.var_index()
    for name, value in valuation.items():
        values[idx[name]] = value
    return SystemState(mode, tuple(values), (0,) * len(model.timers))

"""Well-formedness obligations and property verification for statecharts.

Three engines:

  guard_obligations / check_obligation
      coverage, disjointness and range-preservation conditions, discharged by
      enumerating the quantized domains of the variables each obligation
      actually reads (exhaustively when the product fits the budget,
      uniformly sampled otherwise).

  check_template
      instances of the consistency template -- a class of actions, a guard,
      pre/post state projections and a relation between them -- checked
      inductively per matching transition over the same projected domains.

  check_reachable
      bounded breadth-first exploration of (mode, valuation) states with
      quantized state identification, evaluating state predicates and
      template instances at every visited state; violations come with a
      replayable event trace from the initial state.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from . import expr as ex
from . import statechart as sc
from .errors import ResourceLimit
from .expr import BOOL, BoolType, DecimalType, EnumType, Expr, Span, StrType
from .statechart import StatechartModel, SystemState

DEFAULT_PRODUCT_CAP = 1_000_000
DEFAULT_SAMPLES = 100_000
DEFAULT_MAX_STATES = 1_000_000
DEFAULT_DECIMAL_WINDOW = (-100_000, 100_000)   # +/-1000.00 for unannotated decimals


class ProjectionTooLarge(Exception):
    pass


@dataclass(frozen=True)
class DomainBudget:
    product_cap: int = DEFAULT_PRODUCT_CAP
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    allow_sampling: bool = True


# --- quantized domains ----------------------------------------------------------

class Domain:
    size: int

    def values(self):
        raise NotImplementedError

    def sample(self, rng: random.Random):
        raise NotImplementedError


class BoolDomain(Domain):
    size = 2

    def values(self):
        return iter((False, True))

    def sample(self, rng):
        return rng.random() < 0.5


class EnumDomain(Domain):
    def __init__(self, literals: Sequence[str]):
        self.literals = tuple(literals)
        self.size = len(self.literals)

    def values(self):
        return iter(self.literals)

    def sample(self, rng):
        return self.literals[rng.randrange(self.size)]


class DecimalDomain(Domain):
    def __init__(self, lo: int, hi: int):
        self.lo, self.hi = lo, hi
        self.size = hi - lo + 1

    def values(self):
        return iter(range(self.lo, self.hi + 1))

    def sample(self, rng):
        return rng.randrange(self.lo, self.hi + 1)


class StrDomain(Domain):
    """All strings over the alphabet up to max_len, ordered by length then
    alphabet position."""

    def __init__(self, max_len: int, alphabet: str):
        self.max_len = max_len
        self.alphabet = alphabet
        self.counts = [len(alphabet) ** l for l in range(max_len + 1)]
        self.size = sum(self.counts)

    def values(self):
        for l in range(self.max_len + 1):
            for chars in itertools.product(self.alphabet, repeat=l):
                yield "".join(chars)

    def sample(self, rng):
        i = rng.randrange(self.size)
        for l, count in enumerate(self.counts):
            if i < count:
                base = len(self.alphabet)
                out = []
                for _ in range(l):
                    out.append(self.alphabet[i % base])
                    i //= base
                return "".join(reversed(out))
            i -= count
        raise AssertionError("index out of domain")


def domain_of(decl: sc.VariableDecl) -> Domain:
    t = decl.type
    if isinstance(t, BoolType):
        return BoolDomain()
    if isinstance(t, EnumType):
        return EnumDomain(t.literals)
    if isinstance(t, DecimalType):
        lo, hi = decl.range if decl.range is not None else DEFAULT_DECIMAL_WINDOW
        return DecimalDomain(lo, hi)
    if isinstance(t, StrType):
        return StrDomain(t.max_len, t.alphabet or "0123456789.")
    raise TypeError(f"no domain for {t}")


# --- verdicts ---------------------------------------------------------------------

@dataclass
class Counterexample:
    description: str
    state: Optional[SystemState] = None
    event: Optional[str] = None
    post: Optional[SystemState] = None
    trace: Optional[tuple[str, ...]] = None     # events from the initial state
    valuation: Optional[dict] = None


@dataclass
class Verdict:
    name: str
    status: str                                  # holds | violated | unknown
    method: str                                  # inductive_exhaustive | inductive_sampled | bounded_reachability
    counterexample: Optional[Counterexample] = None
    coverage: Optional[float] = None             # sampled fraction of the projection
    detail: str = ""
    explored: Optional[int] = None               # reachability: canonical states visited

    def summary(self) -> str:
        extra = ""
        if self.method == "inductive_sampled" and self.coverage is not None:
            extra = f", coverage {self.coverage:.3g}"
        return f"{self.name}: {self.status} ({self.method}{extra})"


# --- properties --------------------------------------------------------------------

@dataclass(frozen=True)
class PropertySpec:
    """Consistency-template instance over a statechart."""
    name: str
    statechart: str
    action_class: tuple[tuple[str, Optional[str]], ...]   # (event, optional mode)
    guard: Expr
    filter_pre: tuple[Expr, ...]
    filter_post: tuple[Expr, ...]
    relation: Union[str, Expr]                  # "equal" | "not_equal" | custom Expr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class InvariantSpec:
    """A state predicate required at every reachable state."""
    name: str
    statechart: str
    require: Expr
    span: Optional[Span] = field(default=None, compare=False)


def relation_scope(prop: PropertySpec, model: StatechartModel) -> ex.Scope:
    """Typing scope for a custom relation: pre_i / post_i component names."""
    scope = model.scope(with_mode=True)
    types: dict[str, ex.Type] = {}
    for i, e in enumerate(prop.filter_pre, 1):
        types[f"pre_{i}"] = ex.typecheck(e, scope)
    for i, e in enumerate(prop.filter_post, 1):
        types[f"post_{i}"] = ex.typecheck(e, scope)
    return ex.Scope(types, model.mode_type())


def validate_property(prop: Union[PropertySpec, InvariantSpec],
                      model: StatechartModel) -> list[sc.Problem]:
    problems: list[sc.Problem] = []
    scope = model.scope(with_mode=True)

    def check_bool(e: Expr, what: str) -> None:
        try:
            t = ex.typecheck(e, scope)
            if not isinstance(t, BoolType):
                problems.append(sc.Problem(f"{what} must be boolean, got {t}", prop.span, "E_TYPE"))
        except ex.ExprError as err:
            problems.append(sc.Problem(f"{what}: {err.message}", err.span or prop.span, "E_TYPE"))

    if isinstance(prop, InvariantSpec):
        check_bool(prop.require, f"property '{prop.name}': require clause")
        return problems

    if not prop.action_class:
        problems.append(sc.Problem(f"property '{prop.name}': empty action class", prop.span))
    events = set(model.events())
    for event, mode in prop.action_class:
        if event not in events:
            problems.append(sc.Problem(
                f"property '{prop.name}': unknown event '{event}'", prop.span, "E_UNRESOLVED"))
        if mode is not None and mode not in model.modes:
            problems.append(sc.Problem(
                f"property '{prop.name}': unknown mode '{mode}'", prop.span, "E_UNRESOLVED"))
    check_bool(prop.guard, f"property '{prop.name}': guard")
    if len(prop.filter_pre) != len(prop.filter_post):
        problems.append(sc.Problem(
            f"property '{prop.name}': filters project different arities", prop.span, "E_TYPE"))
    else:
        for i, (a, b) in enumerate(zip(prop.filter_pre, prop.filter_post), 1):
            try:
                ta = ex.typecheck(a, scope)
                tb = ex.typecheck(b, scope)
                if not ex.same_type(ta, tb):
                    problems.append(sc.Problem(
                        f"property '{prop.name}': filter component {i} compares {ta} with {tb}",
                        prop.span, "E_TYPE"))
            except ex.ExprError as err:
                problems.append(sc.Problem(
                    f"property '{prop.name}': {err.message}", err.span or prop.span, "E_TYPE"))
    if isinstance(prop.relation, Expr):
        try:
            t = ex.typecheck(prop.relation, relation_scope(prop, model))
            if not isinstance(t, BoolType):
                problems.append(sc.Problem(
                    f"property '{prop.name}': relation must be boolean", prop.span, "E_TYPE"))
        except ex.ExprError as err:
            problems.append(sc.Problem(
                f"property '{prop.name}': relation: {err.message}", err.span or prop.span, "E_TYPE"))
    elif prop.relation not in ("equal", "not_equal"):
        problems.append(sc.Problem(
            f"property '{prop.name}': unknown relation '{prop.relation}'", prop.span))
    return problems


# --- obligations ---------------------------------------------------------------------

@dataclass(frozen=True)
class Obligation:
    kind: str                    # coverage | disjointness | range_preservation
    location: str                # "mode/event" or transition id
    formula: str                 # human-readable rendering
    mode: Optional[str] = None
    event: Optional[str] = None
    transition: Optional[str] = None
    variable: Optional[str] = None

    def ident(self) -> str:
        return f"{self.kind}:{self.location}" + (f":{self.variable}" if self.variable else "")


def guard_obligations(model: StatechartModel) -> list[Obligation]:
    out: list[Obligation] = []
    groups: dict[tuple[str, str], list[sc.Transition]] = {}
    for t in model.transitions:
        groups.setdefault((t.source, t.event), []).append(t)

    for (mode, event), ts in groups.items():
        if len(ts) >= 2:
            guards = "; ".join(ex.render(t.guard) for t in ts)
            out.append(Obligation(
                kind="disjointness",
                location=f"{mode}/{event}",
                formula=f"at most one of [{guards}] holds",
                mode=mode, event=event))

    for mode, event in model.responds:
        ts = groups.get((mode, event), [])
        guards = " or ".join(ex.render(t.guard) for t in ts) if ts else "false"
        out.append(Obligation(
            kind="coverage",
            location=f"{mode}/{event}",
            formula=f"{guards} covers all states",
            mode=mode, event=event))

    ranged = {v.name: v.range for v in model.variables if v.range is not None}
    for t in model.transitions:
        for target, rhs in t.actions:
            if target in ranged:
                lo, hi = ranged[target]
                out.append(Obligation(
                    kind="range_preservation",
                    location=t.id,
                    formula=(f"{target} := {ex.render(rhs)} stays in "
                             f"[{_fmt(lo)}, {_fmt(hi)}]"),
                    transition=t.id, variable=target))
    return out


def _fmt(v: int) -> str:
    from . import fixedpoint as fp
    return fp.format_value(v)


@dataclass
class _Projection:
    names: list[str]
    slots: list[int]
    domains: list[Domain]
    product: int


def _projection(model: StatechartModel, names: set[str]) -> _Projection:
    idx = model.var_index()
    decls = {v.name: v for v in model.variables}
    ordered = [v.name for v in model.variables if v.name in names]
    domains = [domain_of(decls[n]) for n in ordered]
    product = 1
    for d in domains:
        product *= d.size
    return _Projection(ordered, [idx[n] for n in ordered], domains, product)


def _iterate(proj: _Projection, budget: DomainBudget):
    """Yield value tuples for the projection: the full ascending product when
    it fits the budget, else a seeded uniform sample.  Returns (exhaustive,
    iterator, coverage)."""
    if proj.product <= budget.product_cap:
        return True, itertools.product(*(d.values() for d in proj.domains)), None
    if not budget.allow_sampling:
        raise ProjectionTooLarge(
            f"projection of {proj.product} valuations exceeds the budget of {budget.product_cap}")
    rng = random.Random(budget.seed)

    def sampled():
        for _ in range(budget.samples):
            yield tuple(d.sample(rng) for d in proj.domains)

    return False, sampled(), min(1.0, budget.samples / proj.product)


def _read_set(exprs: list[Expr]) -> set[str]:
    names: set[str] = set()
    for e in exprs:
        names |= ex.free_vars(e)
    names.discard(ex.MODE_VAR)
    return names


def check_obligation(model: StatechartModel, ob: Obligation,
                     budget: DomainBudget = DomainBudget()) -> Verdict:
    rt = sc.runtime(model)
    idx = model.var_index()
    caps = {v.name: v.type.max_len for v in model.variables if isinstance(v.type, StrType)}
    base = list(rt.initial_values)

    if ob.kind in ("disjointness", "coverage"):
        entries = rt.by_source_event.get((ob.mode, ob.event), [])
        guards = [g for _t, g, _a in entries]
        read = _read_set([t.guard for t, _g, _a in entries])
        mode = ob.mode

        if ob.kind == "coverage":
            def failure(vals) -> Optional[str]:
                return None if any(g(vals, mode) for g in guards) else "no transition responds"
        else:
            def failure(vals) -> Optional[str]:
                hits = [e[0].id for e in entries if e[1](vals, mode)]
                return f"transitions {', '.join(hits)} overlap" if len(hits) > 1 else None
    else:
        t = next(x for x in model.transitions if x.id == ob.transition)
        guard = ex.compile_expr(t.guard, idx, caps)
        rhs_expr = next(rhs for target, rhs in t.actions if target == ob.variable)
        rhs = ex.compile_expr(rhs_expr, idx, caps)
        decl = next(v for v in model.variables if v.name == ob.variable)
        lo, hi = decl.range
        read = _read_set([t.guard, rhs_expr])
        mode = t.source

        def failure(vals) -> Optional[str]:
            if not guard(vals, mode):
                return None
            v = rhs(vals, mode)
            if lo <= v <= hi:
                return None
            return f"{ob.variable} becomes {_fmt(v)}"

    proj = _projection(model, read)
    exhaustive, valuations, coverage = _iterate(proj, budget)
    for combo in valuations:
        vals = list(base)
        for slot, value in zip(proj.slots, combo):
            vals[slot] = value
        vals = tuple(vals)
        why = failure(vals)
        if why is not None:
            witness = {n: vals[s] for n, s in zip(proj.names, proj.slots)}
            return Verdict(
                name=ob.ident(), status="violated",
                method="inductive_exhaustive" if exhaustive else "inductive_sampled",
                counterexample=Counterexample(
                    description=why,
                    state=SystemState(mode, vals, (0,) * len(model.timers)),
                    valuation=witness),
                coverage=coverage)
    return Verdict(
        name=ob.ident(), status="holds",
        method="inductive_exhaustive" if exhaustive else "inductive_sampled",
        coverage=coverage)


# --- consistency templates --------------------------------------------------------------

def _matching_transitions(model: StatechartModel, prop: PropertySpec) -> list[sc.Transition]:
    out = []
    for t in model.transitions:
        for event, mode in prop.action_class:
            if t.event == event and (mode is None or t.source == mode):
                out.append(t)
                break
    return out


def _compile_relation(prop: PropertySpec, model: StatechartModel) -> Callable:
    if prop.relation == "equal":
        return lambda pre, post: pre == post
    if prop.relation == "not_equal":
        return lambda pre, post: pre != post
    names: dict[str, int] = {}
    for i in range(len(prop.filter_pre)):
        names[f"pre_{i + 1}"] = i
    for i in range(len(prop.filter_post)):
        names[f"post_{i + 1}"] = len(prop.filter_pre) + i
    fn = ex.compile_expr(prop.relation, names)
    return lambda pre, post: fn(pre + post, None)


def check_template(model: StatechartModel, prop: PropertySpec,
                   budget: DomainBudget = DomainBudget()) -> Verdict:
    """Per-transition inductive check of a consistency-template instance."""
    rt = sc.runtime(model)
    idx = model.var_index()
    caps = {v.name: v.type.max_len for v in model.variables if isinstance(v.type, StrType)}
    assigned = {t.id: {name: rhs for name, rhs in t.actions} for t in model.transitions}

    guard_fn = ex.compile_expr(prop.guard, idx, caps)
    pre_fns = [ex.compile_expr(e, idx, caps) for e in prop.filter_pre]
    post_fns = [ex.compile_expr(e, idx, caps) for e in prop.filter_post]
    relation = _compile_relation(prop, model)

    transitions = _matching_transitions(model, prop)
    all_exhaustive = True
    min_coverage: Optional[float] = None
    base = list(rt.initial_values)

    for t in transitions:
        read = _read_set([prop.guard, t.guard] + list(prop.filter_pre))
        for e in prop.filter_post:
            for name in ex.free_vars(e) - {ex.MODE_VAR}:
                if name in assigned[t.id]:
                    read |= ex.free_vars(assigned[t.id][name]) - {ex.MODE_VAR}
                else:
                    read.add(name)
        t_guard = ex.compile_expr(t.guard, idx, caps)

        proj = _projection(model, read)
        exhaustive, valuations, coverage = _iterate(proj, budget)
        if not exhaustive:
            all_exhaustive = False
            min_coverage = coverage if min_coverage is None else min(min_coverage, coverage)

        for combo in valuations:
            vals = list(base)
            for slot, value in zip(proj.slots, combo):
                vals[slot] = value
            vals = tuple(vals)
            if not t_guard(vals, t.source) or not guard_fn(vals, t.source):
                continue
            state = SystemState(t.source, vals, (0,) * len(model.timers))
            outcome = sc.step(model, state, t.event)
            if outcome.fired != t.id:
                continue   # a disjoint sibling owns this valuation
            pre = tuple(f(vals, t.source) for f in pre_fns)
            post = tuple(f(outcome.state.values, outcome.state.mode) for f in post_fns)
            if not relation(pre, post):
                return Verdict(
                    name=prop.name, status="violated",
                    method="inductive_exhaustive" if exhaustive else "inductive_sampled",
                    counterexample=Counterexample(
                        description=(f"transition '{t.id}' maps projection {pre} to {post}"),
                        state=state, event=t.event, post=outcome.state),
                    coverage=coverage,
                    detail=f"transition {t.id}")

    method = "inductive_exhaustive" if all_exhaustive else "inductive_sampled"
    detail = f"{len(transitions)} transition(s) in the action class"
    return Verdict(name=prop.name, status="holds", method=method,
                   coverage=min_coverage, detail=detail)


# --- bounded reachability ------------------------------------------------------------------

@dataclass(frozen=True)
class CanonSpec:
    """State-identification quantization for the explicit search.

    Entry buffers collapse to (length, has-dot, whole-unit value), with
    values above every declared range merged into one "over" class, so every
    enterable whole value is explored while runaway magnitudes are not.
    Range-annotated decimals keep their exact boundary values but quantize
    the interior to a coarse grid; unannotated decimals floor to whole
    units.  Exploration visits one concrete representative per canonical
    class; a violation always carries the concrete path actually walked.
    """
    decimal_interior_grid: int = 10_000    # hundredths; 100 whole units
    unannotated_grid: int = 100


def _canonizer(model: StatechartModel, canon: CanonSpec) -> Callable:
    from . import fcu as _fcu

    ranges = [v.range for v in model.variables]
    hi_whole = max((r[1] // 100 for r in ranges if r is not None), default=10_000)
    over_class = hi_whole + 1
    grid = canon.decimal_interior_grid
    ugrid = canon.unannotated_grid

    canoners: list[Callable] = []
    for v, rng in zip(model.variables, ranges):
        if isinstance(v.type, DecimalType):
            if rng is not None:
                lo, hi = rng

                def dec_canon(val, lo=lo, hi=hi):
                    if val <= lo:
                        return ("lo", val == lo)
                    if val >= hi:
                        return ("hi", val == hi)
                    return val // grid

                canoners.append(dec_canon)
            else:
                canoners.append(lambda val: val // ugrid)
        elif isinstance(v.type, StrType):
            def str_canon(val):
                if any(c.isdigit() for c in val):
                    whole = _fcu.parse_buffer(val, 0) // 100
                    return (len(val), "." in val, min(whole, over_class))
                return (len(val), "." in val, None)

            canoners.append(str_canon)
        else:
            canoners.append(lambda val: val)

    def key(state: SystemState) -> tuple:
        return (state.mode,) + tuple(c(v) for c, v in zip(canoners, state.values))

    return key


@dataclass
class _TemplateCheck:
    prop: PropertySpec
    guard: Callable
    pre_fns: list[Callable]
    post_fns: list[Callable]
    relation: Callable


def check_reachable(model: StatechartModel,
                    props: Union[PropertySpec, InvariantSpec, Expr,
                                 Sequence[Union[PropertySpec, InvariantSpec]]],
                    max_depth: int,
                    max_states: int = DEFAULT_MAX_STATES,
                    canon: CanonSpec = CanonSpec()) -> Union[Verdict, list[Verdict]]:
    """Breadth-first search from the initial state over all events.

    `props` may be a single property (a Verdict is returned), a bare boolean
    expression treated as a state predicate, or a list (one Verdict each; the
    exploration is shared).
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    single = not isinstance(props, (list, tuple))
    if isinstance(props, Expr):
        props = InvariantSpec("predicate", model.name, props)
    plist: list[Union[PropertySpec, InvariantSpec]] = [props] if single else list(props)

    idx = model.var_index()
    caps = {v.name: v.type.max_len for v in model.variables if isinstance(v.type, StrType)}
    checks: list[Union[_TemplateCheck, tuple]] = []
    for p in plist:
        if isinstance(p, InvariantSpec):
            checks.append(("inv", p, ex.compile_expr(p.require, idx, caps)))
        else:
            checks.append(_TemplateCheck(
                p,
                ex.compile_expr(p.guard, idx, caps),
                [ex.compile_expr(e, idx, caps) for e in p.filter_pre],
                [ex.compile_expr(e, idx, caps) for e in p.filter_post],
                _compile_relation(p, model)))

    events = model.events()
    key_of = _canonizer(model, canon)
    init = sc.initial_state(model)

    states: list[SystemState] = [init]
    parents: list[tuple[int, Optional[str]]] = [(-1, None)]
    depths = [0]
    seen = {key_of(init): 0}
    verdicts: dict[int, Verdict] = {}
    truncated = False

    def trace_to(i: int) -> tuple[str, ...]:
        out = []
        while i > 0:
            prev, ev = parents[i]
            out.append(ev)
            i = prev
        return tuple(reversed(out))

    def examine(i: int) -> None:
        state = states[i]
        for ci, chk in enumerate(checks):
            if ci in verdicts:
                continue
            if isinstance(chk, tuple):
                _tag, p, fn = chk
                if not fn(state.values, state.mode):
                    verdicts[ci] = Verdict(
                        name=p.name, status="violated", method="bounded_reachability",
                        counterexample=Counterexample(
                            description="state predicate fails",
                            state=state, trace=trace_to(i)))
            else:
                p = chk.prop
                for event, mode in p.action_class:
                    if mode is not None and state.mode != mode:
                        continue
                    if not chk.guard(state.values, state.mode):
                        continue
                    outcome = sc.step(model, state, event)
                    if outcome.ignored:
                        continue
                    pre = tuple(f(state.values, state.mode) for f in chk.pre_fns)
                    post = tuple(f(outcome.state.values, outcome.state.mode) for f in chk.post_fns)
                    if not chk.relation(pre, post):
                        verdicts[ci] = Verdict(
                            name=p.name, status="violated", method="bounded_reachability",
                            counterexample=Counterexample(
                                description=f"after '{event}' projection {pre} became {post}",
                                state=state, event=event, post=outcome.state,
                                trace=trace_to(i) + (event,)))
                        break

    examine(0)
    cursor = 0
    while cursor < len(states) and len(verdicts) < len(checks):
        i = cursor
        cursor += 1
        state = states[i]
        depth = depths[i]
        for event in events:
            outcome = sc.step(model, state, event)
            if outcome.ignored:
                continue
            k = key_of(outcome.state)
            if k in seen:
                continue
            if depth >= max_depth or len(states) >= max_states:
                truncated = True   # an unseen successor was left unexplored
                continue
            seen[k] = len(states)
            states.append(outcome.state)
            parents.append((i, event))
            depths.append(depth + 1)
            examine(len(states) - 1)

    out: list[Verdict] = []
    for ci, chk in enumerate(checks):
        p = chk[1] if isinstance(chk, tuple) else chk.prop
        if ci in verdicts:
            v = verdicts[ci]
            v.explored = len(states)
            _assert_replayable(model, v)
            out.append(v)
        elif truncated:
            out.append(Verdict(name=p.name, status="unknown", method="bounded_reachability",
                               detail=f"frontier truncated after {len(states)} states",
                               explored=len(states)))
        else:
            out.append(Verdict(name=p.name, status="holds", method="bounded_reachability",
                               detail=f"{len(states)} canonical states explored",
                               explored=len(states)))
    return out[0] if single else out


def _assert_replayable(model: StatechartModel, v: Verdict) -> None:
    """Every reported reachability violation must replay through step()."""
    ce = v.counterexample
    if ce is None or ce.trace is None:
        return
    state = sc.initial_state(model)
    trace = ce.trace if ce.event is None else ce.trace[:-1]
    for event in trace:
        outcome = sc.step(model, state, event)
        if outcome.ignored:
            raise AssertionError(f"counterexample trace event '{event}' was ignored on replay")
        state = outcome.state
    if ce.event is not None:
        if sc.step(model, state, ce.event).state != ce.post:
            raise AssertionError("counterexample post-state does not replay")
    elif state != ce.state:
        raise AssertionError("counterexample state does not replay")

"""Co-execution of task models against system models through a correspondence.

A correspondence maps interactive input tasks to system events and system
observations (boolean expressions over the system state) to interactive
output tasks.  Co-execution drives both models in lock step and reports
divergences:

  task_allowed_system_disabled   an input task fired an event the system
                                 ignored in its current state
  output_mismatch                an output task's bound observation is false
  system_allowed_task_forbidden  the system offers a bound event at a
                                 co-reachable point where no task bound to it
                                 can ever run again

The third direction is restricted to events appearing in the input bindings
(the system legitimately has events outside the analysed task, e.g. timers)
and is not applied at co-states where the task execution is complete: once
the procedure may legitimately stop, the system continuing to offer actions
is not an inconsistency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import statechart as sc
from . import taskmodel as tk
from .errors import ResourceLimit
from .expr import Expr, Span
from .statechart import StatechartModel, SystemState
from .taskmodel import TaskExecState, TaskModel

DEFAULT_COSTATE_CAP = 50_000


@dataclass(frozen=True)
class Correspondence:
    name: str
    taskmodel: str
    statechart: str
    input_bindings: dict[str, str]                    # input task id -> event
    output_bindings: tuple[tuple[Expr, str], ...]     # (observation, output task id)
    span: Optional[Span] = field(default=None, compare=False)


class UnboundInputTask(Exception):
    pass


class UnknownEvent(Exception):
    pass


class KindMismatch(Exception):
    pass


@dataclass
class Binding:
    corr: Correspondence
    tm: TaskModel
    model: StatechartModel
    warnings: list[str]

    def tasks_for_event(self, event: str) -> list[str]:
        return [t for t, e in self.corr.input_bindings.items() if e == event]

    def observations_for(self, task_id: str) -> list[Expr]:
        return [obs for obs, t in self.corr.output_bindings if t == task_id]


def bind(corr: Correspondence, tm: TaskModel, model: StatechartModel) -> Binding:
    """Validate the correspondence against both models.

    Every interactive input task must be bound to an existing event; output
    tasks left unbound are reported as warnings only.
    """
    events = set(model.events())
    for task_id, event in corr.input_bindings.items():
        node = tm.node(task_id)
        if node.kind != "interactive_input":
            raise KindMismatch(f"'{task_id}' is {node.kind}, only interactive_input tasks take events")
        if event not in events:
            raise UnknownEvent(f"'{task_id}' is bound to unknown event '{event}'")
    for _obs, task_id in corr.output_bindings:
        node = tm.node(task_id)
        if node.kind != "interactive_output":
            raise KindMismatch(f"'{task_id}' is {node.kind}, observations bind to interactive_output tasks")
    bound_outputs = {t for _o, t in corr.output_bindings}
    warnings = []
    for leaf_id in tm.leaves():
        node = tm.node(leaf_id)
        if node.kind == "interactive_input" and leaf_id not in corr.input_bindings:
            raise UnboundInputTask(f"interactive input task '{leaf_id}' has no bound event")
        if node.kind == "interactive_output" and leaf_id not in bound_outputs:
            warnings.append(f"interactive output task '{leaf_id}' has no bound observation")
    return Binding(corr, tm, model, warnings)


@dataclass(frozen=True)
class CoState:
    task: TaskExecState
    system: SystemState

    def key(self) -> tuple:
        return (self.task.key(), self.system)


def fresh_costate(binding: Binding) -> CoState:
    return CoState(tk.fresh_state(binding.tm), sc.initial_state(binding.model))


@dataclass(frozen=True)
class DivergenceReport:
    kind: str                     # task_allowed_system_disabled | output_mismatch | system_allowed_task_forbidden
    trace: tuple[str, ...]        # executed leaf sequence reaching the divergence
    detail: str                   # offending task or event id

    def render(self) -> str:
        path = " -> ".join(self.trace) if self.trace else "(initial)"
        return f"{self.kind}: {self.detail} after [{path}]"


@dataclass
class CoStepOutcome:
    state: Optional[CoState]
    divergence: Optional[DivergenceReport] = None


def costep(binding: Binding, cs: CoState, leaf_id: str) -> CoStepOutcome:
    """Execute one task leaf against the co-state.

    Non-interactive leaves advance the task model only.  Input leaves send
    their bound event to the system; output leaves check their bound
    observations against the system state.
    """
    task_state = tk.execute_task(binding.tm, cs.task, leaf_id)  # raises TaskNotEnabled
    node = binding.tm.node(leaf_id)
    system = cs.system
    if node.kind == "interactive_input":
        event = binding.corr.input_bindings[leaf_id]
        outcome = sc.step(binding.model, system, event)
        if outcome.ignored:
            return CoStepOutcome(None, DivergenceReport(
                kind="task_allowed_system_disabled",
                trace=task_state.trace,
                detail=f"{leaf_id} ({event})"))
        system = outcome.state
    elif node.kind == "interactive_output":
        env = system.valuation(binding.model)
        from . import expr as ex
        for obs in binding.observations_for(leaf_id):
            if not ex.eval_expr(obs, env):
                return CoStepOutcome(None, DivergenceReport(
                    kind="output_mismatch",
                    trace=task_state.trace,
                    detail=f"{leaf_id}: expected {ex.render(obs)}"))
    return CoStepOutcome(CoState(task_state, system))


def replay(binding: Binding, scenario: tuple[str, ...]) -> CoStepOutcome:
    """Run a whole scenario from a fresh co-state; stops at the first divergence."""
    cs = fresh_costate(binding)
    for leaf_id in scenario:
        out = costep(binding, cs, leaf_id)
        if out.divergence is not None:
            return out
        cs = out.state
    return CoStepOutcome(cs)


def find_divergences(binding: Binding, max_length: int,
                     costate_cap: int = DEFAULT_COSTATE_CAP) -> list[DivergenceReport]:
    """Two-directional consistency sweep.

    Direction 1 replays every enumerated scenario through costep.  Direction
    2 walks all co-reachable states and reports bound system events that are
    enabled while every task bound to them is neither enabled nor executable
    in any continuation.  Reports are deduplicated by (kind, detail), keeping
    the first (breadth-first shortest) trace.
    """
    tm, model = binding.tm, binding.model
    found: dict[tuple[str, str], DivergenceReport] = {}

    scenarios = tk.enumerate_scenarios(tm, max_length)
    for scenario in scenarios.scenarios:
        out = replay(binding, scenario)
        if out.divergence is not None:
            found.setdefault((out.divergence.kind, out.divergence.detail), out.divergence)

    bound_events = sorted(set(binding.corr.input_bindings.values()))
    start = fresh_costate(binding)
    queue = [start]
    seen = {start.key()}
    fe_cache: dict[tuple, bool] = {}
    while queue:
        if len(seen) > costate_cap:
            raise ResourceLimit(f"co-execution sweep exceeded {costate_cap} states")
        cs = queue.pop(0)
        if not tk.is_complete(tm, cs.task):
            enabled_now = tk.enabled_tasks(tm, cs.task)
            sys_enabled = set(sc.enabled_events(model, cs.system))
            for event in bound_events:
                if event not in sys_enabled:
                    continue
                tasks = binding.tasks_for_event(event)
                if any(t in enabled_now for t in tasks):
                    continue
                ck = (cs.task.key(), event)
                if ck not in fe_cache:
                    fe_cache[ck] = any(tk.future_executable(tm, cs.task, t) for t in tasks)
                if not fe_cache[ck]:
                    found.setdefault(
                        ("system_allowed_task_forbidden", event),
                        DivergenceReport("system_allowed_task_forbidden", cs.task.trace, event))
        if len(cs.task.trace) >= max_length:
            continue
        for leaf_id in tk.enabled_tasks_ordered(tm, cs.task):
            out = costep(binding, cs, leaf_id)
            if out.divergence is not None:
                continue   # direction 1 already covers divergent branches
            k = out.state.key()
            if k not in seen:
                seen.add(k)
                queue.append(out.state)
    return sorted(found.values(), key=lambda d: (d.kind, d.detail))


@dataclass
class ScenarioResult:
    index: int
    scenario: tuple[str, ...]
    passed: bool
    note: str = ""


@dataclass
class TestReport:
    results: list[ScenarioResult]
    divergences: list[DivergenceReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def run_tests(binding: Binding, scenarios: list[tuple[str, ...]]) -> TestReport:
    """Execute each scenario from a fresh co-state; deterministic report."""
    results = []
    divergences = []
    for i, scenario in enumerate(scenarios):
        try:
            out = replay(binding, scenario)
        except tk.TaskNotEnabled as e:
            results.append(ScenarioResult(i, scenario, False, f"TaskNotEnabled: {e}"))
            continue
        if out.divergence is not None:
            divergences.append(out.divergence)
            results.append(ScenarioResult(i, scenario, False, out.divergence.render()))
        else:
            results.append(ScenarioResult(i, scenario, True))
    return TestReport(results, divergences)

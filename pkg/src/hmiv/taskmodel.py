"""Hierarchical task trees with temporal operators, simulation and metrics.

Leaves carry a task kind (interactive input/output, cognitive analysis or
decision, perception, motor, system); internal nodes carry an operator:

  enable             children run left to right
  choice             exactly one child branch runs; committed on first step
  order_independent  children run in any order
  concurrent         children may interleave freely
  optional_child     single child may run or be skipped; the decision stays
                     open until the surrounding execution closes over it
  iterate_child      single child runs any number of times; its subtree is
                     reset each time it completes a full pass

Execution state is a map of leaf statuses plus choice commitments; every
derived notion (enabled set, completability) is computed from it, which keeps
states hashable and replay deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .errors import ResourceLimit
from .expr import Span

LEAF_KINDS = ("interactive_input", "interactive_output", "cognitive_analysis",
              "cognitive_decision", "perception", "motor", "system")
OPERATORS = ("enable", "choice", "order_independent", "concurrent",
             "optional_child", "iterate_child")
COGNITIVE_KINDS = ("cognitive_analysis", "cognitive_decision")
MEMORY_SOURCE_KINDS = COGNITIVE_KINDS + ("perception",)


@dataclass(frozen=True)
class TaskNode:
    id: str
    label: str
    kind: str = "abstract"                      # leaves: one of LEAF_KINDS
    operator: Optional[str] = None              # internal nodes only
    children: tuple["TaskNode", ...] = ()
    produces: tuple[str, ...] = ()
    consumes: tuple[str, ...] = ()
    span: Optional[Span] = field(default=None, compare=False)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class TaskModel:
    name: str
    root: TaskNode
    information_items: tuple[str, ...] = ()
    span: Optional[Span] = field(default=None, compare=False)

    def __post_init__(self):
        nodes: dict[str, TaskNode] = {}
        parents: dict[str, Optional[str]] = {self.root.id: None}
        leaves: list[str] = []
        order: dict[str, int] = {}

        def walk(n: TaskNode) -> None:
            order[n.id] = len(order)
            nodes[n.id] = n
            if n.is_leaf:
                leaves.append(n.id)
            for c in n.children:
                parents[c.id] = n.id
                walk(c)

        walk(self.root)
        object.__setattr__(self, "_nodes", nodes)
        object.__setattr__(self, "_parents", parents)
        object.__setattr__(self, "_leaves", tuple(leaves))
        object.__setattr__(self, "_order", order)

    def node(self, node_id: str) -> TaskNode:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownTask(node_id) from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def leaves(self) -> tuple[str, ...]:
        return self._leaves

    def parent(self, node_id: str) -> Optional[str]:
        return self._parents[node_id]

    def ancestors(self, node_id: str) -> list[str]:
        """Path from the node's parent up to the root."""
        out = []
        cur = self._parents[node_id]
        while cur is not None:
            out.append(cur)
            cur = self._parents[cur]
        return out

    def doc_position(self, node_id: str) -> int:
        return self._order[node_id]


class UnknownTask(Exception):
    pass


class TaskNotEnabled(Exception):
    pass


@dataclass
class TaskProblem:
    message: str
    span: Optional[Span] = None
    code: str = "E_MODEL"


def validate_taskmodel(tm: TaskModel) -> list[TaskProblem]:
    problems = []
    ids: list[str] = []

    def walk(n: TaskNode, under_iterate: bool) -> None:
        ids.append(n.id)
        if n.is_leaf:
            if n.kind not in LEAF_KINDS:
                problems.append(TaskProblem(
                    f"leaf task '{n.id}' must have a concrete kind, not '{n.kind}'", n.span, "E_TYPE"))
            if n.operator is not None:
                problems.append(TaskProblem(f"leaf task '{n.id}' cannot carry an operator", n.span))
        else:
            if n.operator not in OPERATORS:
                problems.append(TaskProblem(
                    f"task '{n.id}' needs an operator, got '{n.operator}'", n.span, "E_TYPE"))
            if n.operator in ("optional_child", "iterate_child") and len(n.children) != 1:
                problems.append(TaskProblem(
                    f"task '{n.id}': {n.operator} takes exactly one child", n.span))
            if n.operator == "optional_child" and under_iterate:
                problems.append(TaskProblem(
                    f"task '{n.id}': optional_child may not appear inside iterate_child "
                    "(the skip decision has no stable window there)", n.span))
        known = set(tm.information_items)
        for item in n.produces + n.consumes:
            if item not in known:
                problems.append(TaskProblem(
                    f"task '{n.id}' references undeclared information item '{item}'", n.span, "E_UNRESOLVED"))
        for c in n.children:
            walk(c, under_iterate or n.operator == "iterate_child")

    walk(tm.root, False)
    if len(set(ids)) != len(ids):
        problems.append(TaskProblem(f"duplicate task ids in model '{tm.name}'", tm.span, "E_DUPLICATE"))
    return problems


# --- execution state ------------------------------------------------------------

@dataclass(frozen=True)
class TaskExecState:
    statuses: dict[str, str]        # leaf id -> pending | done
    commits: dict[str, str]         # choice node id -> chosen child id
    # optional nodes that have started; unlike leaf statuses this survives
    # iterate resets, a started optional must run its child to completion
    started: frozenset = frozenset()
    trace: tuple[str, ...] = ()
    produced: frozenset = frozenset()

    def key(self) -> tuple:
        """Behavioural identity (history excluded)."""
        return (tuple(sorted(self.statuses.items())),
                tuple(sorted(self.commits.items())), self.started)

    def status(self, leaf_id: str) -> str:
        return self.statuses[leaf_id]


def fresh_state(tm: TaskModel) -> TaskExecState:
    return TaskExecState({leaf: "pending" for leaf in tm.leaves()}, {})


def node_status(tm: TaskModel, es: TaskExecState, node_id: str) -> str:
    """Derived status of any node: pending, active, done or skipped."""
    n = tm.node(node_id)
    for anc in tm.ancestors(node_id):
        a = tm.node(anc)
        if a.operator == "choice" and anc in es.commits:
            chosen = es.commits[anc]
            on_path = node_id == chosen or chosen in [x.id for x in _subtree(n)] or _contains(tm, chosen, node_id)
            if not on_path:
                return "skipped"
    if _fin(tm, es, n):
        return "done"
    if _touched(tm, es, n):
        return "active"
    return "pending"


def _contains(tm: TaskModel, ancestor_id: str, node_id: str) -> bool:
    cur: Optional[str] = node_id
    while cur is not None:
        if cur == ancestor_id:
            return True
        cur = tm.parent(cur)
    return False


def _subtree(n: TaskNode) -> Iterable[TaskNode]:
    yield n
    for c in n.children:
        yield from _subtree(c)


def _touched(tm: TaskModel, es: TaskExecState, n: TaskNode) -> bool:
    return any(es.statuses[x.id] == "done" for x in _subtree(n) if x.is_leaf)


def _clean(tm: TaskModel, es: TaskExecState, n: TaskNode) -> bool:
    """Rest state for an iterate pass: no executed leaves and no lingering
    choice commitments (an inner reset clears statuses but a committed choice
    still owes its branch's mandatory work)."""
    for x in _subtree(n):
        if x.is_leaf:
            if es.statuses[x.id] == "done":
                return False
        elif x.operator == "choice" and x.id in es.commits:
            return False
    return True


def _fin(tm: TaskModel, es: TaskExecState, n: TaskNode) -> bool:
    """Node finished: nothing in the current pass remains to run."""
    if n.is_leaf:
        return es.statuses[n.id] == "done"
    if n.operator == "choice":
        chosen = es.commits.get(n.id)
        return chosen is not None and _fin(tm, es, tm.node(chosen))
    if n.operator == "optional_child":
        return _fin(tm, es, n.children[0])
    if n.operator == "iterate_child":
        # a finished pass resets eagerly, so a clean subtree is the rest state
        return _clean(tm, es, n.children[0])
    return all(_fin(tm, es, c) for c in n.children)


def _completable(tm: TaskModel, es: TaskExecState, n: TaskNode) -> bool:
    """The node could close now: optional parts may still be waived, but no
    mandatory or started work is outstanding."""
    if n.is_leaf:
        return es.statuses[n.id] == "done"
    if n.operator == "choice":
        chosen = es.commits.get(n.id)
        return chosen is not None and _completable(tm, es, tm.node(chosen))
    if n.operator == "optional_child":
        if n.id not in es.started:
            return True
        return _completable(tm, es, n.children[0])
    if n.operator == "iterate_child":
        return _clean(tm, es, n.children[0])
    return all(_completable(tm, es, c) for c in n.children)


def _enabled(tm: TaskModel, es: TaskExecState, n: TaskNode) -> list[str]:
    if n.is_leaf:
        return [n.id] if es.statuses[n.id] == "pending" else []
    if n.operator == "choice":
        chosen = es.commits.get(n.id)
        if chosen is not None:
            return _enabled(tm, es, tm.node(chosen))
        out = []
        for c in n.children:
            out.extend(_enabled(tm, es, c))
        return out
    if n.operator in ("optional_child", "iterate_child"):
        return _enabled(tm, es, n.children[0])
    if n.operator == "enable":
        out = []
        for c in n.children:
            out.extend(_enabled(tm, es, c))
            if not _completable(tm, es, c):
                break
        return out
    # order_independent / concurrent: free union
    out = []
    for c in n.children:
        out.extend(_enabled(tm, es, c))
    return out


def enabled_tasks(tm: TaskModel, es: TaskExecState) -> set[str]:
    return set(_enabled(tm, es, tm.root))


def enabled_tasks_ordered(tm: TaskModel, es: TaskExecState) -> list[str]:
    """Enabled leaves in document order (drives deterministic enumeration)."""
    seen = []
    for leaf in _enabled(tm, es, tm.root):
        if leaf not in seen:
            seen.append(leaf)
    return sorted(seen, key=tm.doc_position)


def is_complete(tm: TaskModel, es: TaskExecState) -> bool:
    return _completable(tm, es, tm.root)


def execute_task(tm: TaskModel, es: TaskExecState, leaf_id: str) -> TaskExecState:
    """Run one enabled leaf: mark it done, commit choice ancestors, record
    produced information, and reset any iterate pass that just finished."""
    if leaf_id not in enabled_tasks(tm, es):
        if not tm.has_node(leaf_id):
            raise UnknownTask(leaf_id)
        raise TaskNotEnabled(leaf_id)
    node = tm.node(leaf_id)
    statuses = dict(es.statuses)
    commits = dict(es.commits)
    started = set(es.started)
    statuses[leaf_id] = "done"

    # commit choice ancestors to the branch used; mark optionals as started
    path_child = leaf_id
    for anc in tm.ancestors(leaf_id):
        a = tm.node(anc)
        if a.operator == "choice" and anc not in commits:
            commits[anc] = path_child
        elif a.operator == "optional_child":
            started.add(anc)
        path_child = anc

    interim = TaskExecState(statuses, commits, frozenset(started))
    # iterate ancestors whose pass just finished reset their subtree,
    # innermost first; the executed leaf itself is the progress evidence (an
    # inner reset may already have cleared the leaf statuses)
    for anc in tm.ancestors(leaf_id):
        a = tm.node(anc)
        if a.operator == "iterate_child":
            child = a.children[0]
            if _fin(tm, interim, child):
                for x in _subtree(child):
                    if x.is_leaf:
                        statuses[x.id] = "pending"
                    elif x.operator == "choice":
                        commits.pop(x.id, None)
                interim = TaskExecState(statuses, commits, frozenset(started))

    return TaskExecState(statuses, commits, frozenset(started),
                         es.trace + (leaf_id,),
                         es.produced | frozenset(node.produces))


# --- scenario enumeration ---------------------------------------------------------

@dataclass
class ScenarioSet:
    scenarios: list[tuple[str, ...]]
    complete: bool        # False when some execution path hit the length cap


def enumerate_scenarios(tm: TaskModel, max_length: int,
                        cap: int = 10_000) -> ScenarioSet:
    """All complete traces (root completable at the end) of length up to
    max_length, depth-first in document order."""
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    out: list[tuple[str, ...]] = []
    truncated = False

    def walk(es: TaskExecState) -> None:
        nonlocal truncated
        if is_complete(tm, es):
            if len(out) >= cap:
                raise ResourceLimit(f"more than {cap} scenarios")
            out.append(es.trace)
        if len(es.trace) >= max_length:
            if not is_complete(tm, es):
                truncated = True
            return
        extended = False
        for leaf in enabled_tasks_ordered(tm, es):
            extended = True
            walk(execute_task(tm, es, leaf))
        if not extended and not is_complete(tm, es):
            truncated = True   # stuck execution; nothing to enumerate

    walk(fresh_state(tm))
    return ScenarioSet(out, complete=not truncated)


def future_executable(tm: TaskModel, es: TaskExecState, leaf_id: str,
                      state_cap: int = 20_000) -> bool:
    """Can some continuation of this execution still run the leaf?

    Exact search over execution states (memoised).  If the cap is hit the
    answer is conservatively True, so callers never flag a task as forbidden
    without proof.
    """
    tm.node(leaf_id)
    seen = set()
    stack = [es]
    while stack:
        cur = stack.pop()
        k = cur.key()
        if k in seen:
            continue
        seen.add(k)
        if len(seen) > state_cap:
            return True
        enabled = enabled_tasks_ordered(tm, cur)
        if leaf_id in enabled:
            return True
        for leaf in enabled:
            stack.append(execute_task(tm, cur, leaf))
    return False


# --- workload metrics ----------------------------------------------------------------

@dataclass
class WorkloadMetrics:
    scope: str
    counts: dict[str, int]                  # per leaf kind
    information_items_to_remember: int
    leaf_total: int


def workload_metrics(tm: TaskModel, scope: str) -> WorkloadMetrics:
    """Kind counts over the subtree plus the number of information items a
    user must hold: produced by a perception or cognitive leaf and consumed
    by a later leaf (document order) within the scope."""
    root = tm.node(scope)
    leaves = [x for x in _subtree(root) if x.is_leaf]
    counts = {k: 0 for k in LEAF_KINDS}
    for leaf in leaves:
        counts[leaf.kind] += 1
    remembered = set()
    for i, producer in enumerate(leaves):
        if producer.kind not in MEMORY_SOURCE_KINDS:
            continue
        for item in producer.produces:
            if any(item in later.consumes for later in leaves[i + 1:]):
                remembered.add(item)
    return WorkloadMetrics(scope, counts, len(remembered), len(leaves))

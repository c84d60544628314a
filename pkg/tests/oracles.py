"""Independent oracles used by the unit and acceptance suites.

The task-execution oracle re-implements the operator semantics as a
term-rewriting interpreter over immutable residual terms, with none of the
status-map bookkeeping of the production engine: a leaf rewrites to done, a
choice rewrites to its chosen branch, a started optional rewrites to its
body, and an iterate resets its body to a fresh copy whenever a pass
finishes.  Both implementations answer to the same semantics; agreement is
checked on exhaustively generated trees.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

from hmiv.taskmodel import TaskModel, TaskNode

# --- residual terms -------------------------------------------------------------

DONE = ("done",)


def term_of(node: TaskNode):
    if node.is_leaf:
        return ("leaf", node.id)
    children = tuple(term_of(c) for c in node.children)
    if node.operator == "enable":
        return ("seq", children)
    if node.operator == "choice":
        return ("choice", children)
    if node.operator in ("order_independent", "concurrent"):
        return ("any", children)
    if node.operator == "optional_child":
        return ("opt", children[0])
    if node.operator == "iterate_child":
        return ("iter", children[0], children[0])
    raise ValueError(node.operator)


def _fin(t) -> bool:
    """The current pass of this term is completely executed."""
    kind = t[0]
    if kind == "done":
        return True
    if kind == "leaf":
        return False
    if kind in ("seq", "any"):
        return all(_fin(c) for c in t[1])
    if kind == "choice":
        return False          # an uncommitted choice still has work
    if kind == "opt":
        return False          # unstarted optional does not count as executed
    if kind == "iter":
        return t[1] == t[2]   # rest state: current pass untouched
    raise ValueError(kind)


def _closed(t) -> bool:
    """The term does not block later sequence siblings right now."""
    kind = t[0]
    if kind == "done":
        return True
    if kind == "leaf":
        return False
    if kind in ("seq", "any"):
        return all(_closed(c) for c in t[1])
    if kind == "choice":
        return False
    if kind == "opt":
        return True           # may still be skipped
    if kind == "iter":
        return t[1] == t[2]   # clean between passes, blocking mid-pass
    raise ValueError(kind)


def completable(t) -> bool:
    kind = t[0]
    if kind == "done":
        return True
    if kind == "leaf":
        return False
    if kind in ("seq", "any"):
        return all(completable(c) for c in t[1])
    if kind == "choice":
        return False
    if kind == "opt":
        return True           # a started optional was rewritten to its body
    if kind == "iter":
        return t[1] == t[2]
    raise ValueError(kind)


def steps(t) -> list[tuple[str, object]]:
    """All (leaf id, residual term) moves available on the term."""
    kind = t[0]
    if kind == "leaf":
        return [(t[1], DONE)]
    if kind == "done":
        return []
    if kind == "seq":
        out = []
        children = t[1]
        for i, child in enumerate(children):
            if not all(_closed(c) for c in children[:i]):
                continue
            for leaf, residual in steps(child):
                out.append((leaf, ("seq", children[:i] + (residual,) + children[i + 1:])))
        return out
    if kind == "any":
        out = []
        children = t[1]
        for i, child in enumerate(children):
            for leaf, residual in steps(child):
                out.append((leaf, ("any", children[:i] + (residual,) + children[i + 1:])))
        return out
    if kind == "choice":
        out = []
        for child in t[1]:
            out.extend(steps(child))   # committing replaces the choice
        return out
    if kind == "opt":
        return steps(t[1])             # starting replaces the optional
    if kind == "iter":
        out = []
        for leaf, residual in steps(t[2]):
            if _fin(residual):
                residual = t[1]        # pass finished: reset to a fresh copy
            out.append((leaf, ("iter", t[1], residual)))
        return out
    raise ValueError(kind)


def enabled_leaves(t) -> set[str]:
    return {leaf for leaf, _ in steps(t)}


def oracle_scenarios(tm: TaskModel, max_length: int) -> tuple[set, bool]:
    """All complete traces up to max_length, plus a no-truncation flag."""
    out: set[tuple[str, ...]] = set()
    truncated = False

    def walk(term, trace):
        nonlocal truncated
        if completable(term):
            out.add(trace)
        moves = steps(term)
        if len(trace) >= max_length:
            if not completable(term):
                truncated = True
            return
        if not moves and not completable(term):
            truncated = True
            return
        for leaf, residual in moves:
            walk(residual, trace + (leaf,))

    walk(term_of(tm.root), ())
    return out, not truncated


def oracle_future_executable(tm: TaskModel, prefix: tuple[str, ...],
                             leaf_id: str, bound: int = 50_000) -> Optional[bool]:
    """Replay the prefix on the oracle term, then search continuations for
    the leaf.  None when the bound is hit (no verdict)."""
    term = term_of(tm.root)
    for leaf in prefix:
        residual = next((r for x, r in steps(term) if x == leaf), None)
        assert residual is not None, f"oracle cannot replay {prefix}"
        term = residual
    seen = set()
    stack = [term]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        if len(seen) > bound:
            return None
        for leaf, residual in steps(cur):
            if leaf == leaf_id:
                return True
            stack.append(residual)
    return False


# --- exhaustive tree generation ----------------------------------------------------

UNARY_OPS = ("enable", "choice", "order_independent", "concurrent",
             "optional_child", "iterate_child")
NARY_OPS = ("enable", "choice", "order_independent", "concurrent")


def all_trees(max_nodes: int) -> Iterable[TaskModel]:
    """Every operator tree with up to max_nodes nodes (single leaf kind),
    excluding shapes the validator rejects (optional under iterate)."""
    counter = itertools.count()

    def build(n: int, under_iterate: bool):
        if n == 1:
            yield lambda: TaskNode(f"n{next(counter)}", "leaf", kind="motor")
            return
        for k in range(1, n):
            ops = UNARY_OPS if k == 1 else NARY_OPS
            for sizes in _compositions(n - 1, k):
                for op in ops:
                    if op == "optional_child" and under_iterate:
                        continue
                    child_gens = [list(build(s, under_iterate or op == "iterate_child"))
                                  for s in sizes]
                    for combo in itertools.product(*child_gens):
                        def make(op=op, combo=combo):
                            return TaskNode(f"n{next(counter)}", "node", kind="abstract",
                                            operator=op,
                                            children=tuple(g() for g in combo))
                        yield make

    for total in range(1, max_nodes + 1):
        for gen in build(total, False):
            yield TaskModel("gen", gen())


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def count_trees(max_nodes: int) -> int:
    return sum(1 for _ in all_trees(max_nodes))

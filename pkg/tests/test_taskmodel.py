"""Task operator semantics, scenarios and workload metrics."""

import random

import pytest

from hmiv import taskmodel as tk
from hmiv.errors import ResourceLimit
from hmiv.taskmodel import TaskModel, TaskNode

from .oracles import all_trees, oracle_future_executable, oracle_scenarios


def seq(*leaves):
    return TaskModel("m", TaskNode("root", "r", operator="enable", children=tuple(
        TaskNode(x, x.upper(), kind="motor") for x in leaves)))


# --- enabled / execute -------------------------------------------------------------

def test_fifth_row_subtree(fcu_taskmodel):
    """The mode-change subtree enables its leaves strictly in order and has
    exactly six of them."""
    subtree = fcu_taskmodel.node("change_mode_qnh")
    tm = TaskModel("row5", subtree)
    es = tk.fresh_state(tm)
    assert tk.enabled_tasks(tm, es) == {"reach_qnh"}
    es = tk.execute_task(tm, es, "reach_qnh")
    assert tk.enabled_tasks(tm, es) == {"click_qnh"}
    for leaf in ("click_qnh", "sys_change_mode", "display_qnh",
                 "check_mode_after", "decide_mode_ok"):
        es = tk.execute_task(tm, es, leaf)
    assert tk.is_complete(tm, es)
    assert len(es.trace) == 6


def test_choice_enables_both_then_commits():
    tm = TaskModel("c", TaskNode("root", "r", operator="choice", children=(
        TaskNode("a", "A", kind="perception"),
        TaskNode("b", "B", kind="motor"),
    )))
    es = tk.fresh_state(tm)
    assert tk.enabled_tasks(tm, es) == {"a", "b"}
    es = tk.execute_task(tm, es, "b")
    assert tk.enabled_tasks(tm, es) == set()
    assert tk.is_complete(tm, es)
    assert tk.node_status(tm, es, "a") == "skipped"


def test_execute_only_enabled():
    tm = seq("a", "b")
    es = tk.fresh_state(tm)
    with pytest.raises(tk.TaskNotEnabled):
        tk.execute_task(tm, es, "b")
    with pytest.raises(tk.UnknownTask):
        tk.execute_task(tm, es, "zz")
    es = tk.execute_task(tm, es, "a")
    assert tk.node_status(tm, es, "a") == "done"
    assert tk.node_status(tm, es, "root") == "active"


def test_fresh_state_nonempty():
    for tm in list(all_trees(4))[::7]:
        assert tk.enabled_tasks(tm, tk.fresh_state(tm))


# --- scenarios ---------------------------------------------------------------------

def test_enable_sequence_single_scenario():
    out = tk.enumerate_scenarios(seq("a", "b", "c"), 10)
    assert out.scenarios == [("a", "b", "c")]
    assert out.complete


def test_choice_two_scenarios():
    tm = TaskModel("c", TaskNode("root", "r", operator="choice", children=(
        TaskNode("a", "A", kind="perception"),
        TaskNode("b", "B", kind="motor"),
    )))
    out = tk.enumerate_scenarios(tm, 10)
    assert sorted(out.scenarios) == [("a",), ("b",)]
    assert out.complete


def test_scenarios_replay(fcu_taskmodel):
    out = tk.enumerate_scenarios(fcu_taskmodel, 16)
    assert out.scenarios
    for scenario in out.scenarios:
        es = tk.fresh_state(fcu_taskmodel)
        for leaf in scenario:
            es = tk.execute_task(fcu_taskmodel, es, leaf)
        assert tk.is_complete(fcu_taskmodel, es)


def test_scenario_cap():
    tm = TaskModel("i", TaskNode("root", "r", operator="iterate_child", children=(
        TaskNode("del", "d", operator="order_independent", children=(
            TaskNode("a", "A", kind="motor"),
            TaskNode("b", "B", kind="motor"),
        )),
    )))
    with pytest.raises(ResourceLimit):
        tk.enumerate_scenarios(tm, 14, cap=50)


def test_fixture_subtree_matches_oracle(fcu_taskmodel):
    """The shipped barometric-reference subtree enumerates exactly the traces
    the rewriting oracle derives (interleavings of optional unit toggling and
    commit cycles included)."""
    subtree = TaskModel("scope", fcu_taskmodel.node("set_baro"))
    mine = tk.enumerate_scenarios(subtree, 16, cap=200_000)
    want, want_complete = oracle_scenarios(subtree, 16)
    assert set(mine.scenarios) == want
    assert mine.complete == want_complete
    assert len(want) > 5


def test_matches_oracle_small_trees():
    """Exhaustive agreement with the rewriting oracle on every tree with up
    to five nodes (the seven-node sweep runs in the acceptance suite)."""
    checked = 0
    for tm in all_trees(5):
        leaves = len(tm.leaves())
        budget = min(leaves + 2, 6)
        mine = tk.enumerate_scenarios(tm, budget, cap=200_000)
        want, want_complete = oracle_scenarios(tm, budget)
        assert set(mine.scenarios) == want, tm.root
        assert len(mine.scenarios) == len(set(mine.scenarios))
        assert mine.complete == want_complete, tm.root
        checked += 1
    assert checked > 2000


def test_future_executable_matches_oracle():
    rng = random.Random(11)
    trees = list(all_trees(5))
    for tm in rng.sample(trees, 300):
        es = tk.fresh_state(tm)
        prefix = []
        for _ in range(rng.randint(0, 4)):
            enabled = tk.enabled_tasks_ordered(tm, es)
            if not enabled:
                break
            leaf = rng.choice(enabled)
            es = tk.execute_task(tm, es, leaf)
            prefix.append(leaf)
        for leaf in tm.leaves():
            want = oracle_future_executable(tm, tuple(prefix), leaf)
            if want is None:
                continue
            assert tk.future_executable(tm, es, leaf) == want, (tm.root, prefix, leaf)


# --- workload ----------------------------------------------------------------------

def test_workload_fixture(fcu_taskmodel):
    metrics = tk.workload_metrics(fcu_taskmodel, "set_baro")
    assert metrics.counts["cognitive_analysis"] == 1
    assert metrics.counts["cognitive_decision"] == 3
    assert metrics.counts["perception"] == 5
    assert metrics.counts["interactive_input"] == 5
    assert metrics.counts["interactive_output"] == 2
    assert metrics.counts["motor"] == 2
    assert metrics.counts["system"] == 1
    assert sum(metrics.counts.values()) == metrics.leaf_total == 19
    # target, current reading, and their comparison all need remembering
    assert metrics.information_items_to_remember == 3


def test_workload_no_cognitive():
    tm = seq("a", "b")
    metrics = tk.workload_metrics(tm, "root")
    assert metrics.counts["cognitive_analysis"] == 0
    assert metrics.counts["cognitive_decision"] == 0
    assert metrics.counts["motor"] == 2


def test_workload_leaf_scope(fcu_taskmodel):
    metrics = tk.workload_metrics(fcu_taskmodel, "click_qnh")
    assert metrics.leaf_total == 1
    assert [c for c in metrics.counts.values() if c] == [1]
    with pytest.raises(tk.UnknownTask):
        tk.workload_metrics(fcu_taskmodel, "missing")


# --- validation ----------------------------------------------------------------------

def test_validation():
    bad = TaskModel("v", TaskNode("root", "r", operator="iterate_child", children=(
        TaskNode("o", "O", operator="optional_child", children=(
            TaskNode("x", "X", kind="motor"),
        )),
    )))
    problems = tk.validate_taskmodel(bad)
    assert any("optional_child may not appear inside" in p.message for p in problems)

    dup = TaskModel("d", TaskNode("root", "r", operator="enable", children=(
        TaskNode("a", "A", kind="motor"), TaskNode("a", "A2", kind="motor"))))
    assert any("duplicate task ids" in p.message for p in tk.validate_taskmodel(dup))

    abstract_leaf = TaskModel("l", TaskNode("root", "r", operator="enable", children=(
        TaskNode("a", "A", kind="abstract"),)))
    assert any("concrete kind" in p.message for p in tk.validate_taskmodel(abstract_leaf))

"""Binding validation, co-stepping, divergence detection, scenario tests."""

import pytest

from hmiv import coexec as cx
from hmiv import statechart as sc
from hmiv import taskmodel as tk
from hmiv.dsl import load_document
from hmiv.expr import Binary, Var

from .conftest import fixture_path

ROW5 = ("reach_qnh", "click_qnh", "sys_change_mode", "display_qnh",
        "check_mode_after", "decide_mode_ok")
SPINE = ("obtain_weather_info", "receive_target", "gather_current",
         "interpret_pressure", "decide_change", "check_mode") + ROW5


def test_bind_fixture_valid(fcu_binding):
    assert fcu_binding.warnings == []
    assert fcu_binding.corr.input_bindings["click_qnh"] == "qnhClick"


def test_bind_kind_mismatch(fcu_doc, fcu_taskmodel, fcu_model):
    from dataclasses import replace
    corr = fcu_doc.correspondences[0]
    bad = replace(corr, input_bindings={**corr.input_bindings, "decide_change": "qnhClick"})
    with pytest.raises(cx.KindMismatch):
        cx.bind(bad, fcu_taskmodel, fcu_model)


def test_bind_unknown_event(fcu_doc, fcu_taskmodel, fcu_model):
    from dataclasses import replace
    corr = fcu_doc.correspondences[0]
    bad = replace(corr, input_bindings={**corr.input_bindings, "click_qnh": "noSuchEvent"})
    with pytest.raises(cx.UnknownEvent):
        cx.bind(bad, fcu_taskmodel, fcu_model)


def test_bind_unbound_input(fcu_doc, fcu_taskmodel, fcu_model):
    from dataclasses import replace
    corr = replace(fcu_doc.correspondences[0], input_bindings={})
    with pytest.raises(cx.UnboundInputTask):
        cx.bind(corr, fcu_taskmodel, fcu_model)


def test_costep_row5_reaches_qnh(fcu_binding):
    cs = cx.fresh_costate(fcu_binding)
    assert cs.system.mode == "STD"
    for leaf in SPINE:
        out = cx.costep(fcu_binding, cs, leaf)
        assert out.divergence is None, out.divergence
        cs = out.state
    assert cs.system.mode == "QNH"
    assert set(ROW5) <= set(cs.task.trace)


def test_costep_not_enabled(fcu_binding):
    cs = cx.fresh_costate(fcu_binding)
    with pytest.raises(tk.TaskNotEnabled):
        cx.costep(fcu_binding, cs, "click_qnh")


def test_costep_output_mismatch(fcu_doc, fcu_taskmodel, fcu_model):
    """Rebind the QNH display check to assert STD mode: reaching it in QNH
    must report an output mismatch."""
    from dataclasses import replace
    corr = fcu_doc.correspondences[0]
    outputs = tuple((Binary("=", Var("mode"), Var("STD")), t) if t == "display_qnh"
                    else (o, t) for o, t in corr.output_bindings)
    binding = cx.bind(replace(corr, output_bindings=outputs), fcu_taskmodel, fcu_model)
    cs = cx.fresh_costate(binding)
    for leaf in SPINE[:9]:
        cs = cx.costep(binding, cs, leaf).state
    out = cx.costep(binding, cs, "display_qnh")
    assert out.divergence is not None
    assert out.divergence.kind == "output_mismatch"
    assert "display_qnh" in out.divergence.detail


def test_find_divergences_fixture_empty(fcu_binding):
    assert cx.find_divergences(fcu_binding, max_length=20) == []


def test_mutant_system_disables_qnh_click():
    doc = load_document(fixture_path("fcu-mutant-no-qnhclick.hmi")).document
    binding = cx.bind(doc.correspondences[0], doc.taskmodel("descent_prep"),
                      doc.statechart("fcu"))
    divergences = cx.find_divergences(binding, max_length=20)
    assert divergences
    assert all(d.kind == "task_allowed_system_disabled" for d in divergences)
    report = divergences[0]
    assert "click_qnh" in report.detail
    # trace replays to the divergence
    cs = cx.fresh_costate(binding)
    for leaf in report.trace[:-1]:
        out = cx.costep(binding, cs, leaf)
        assert out.divergence is None
        cs = out.state
    final = cx.costep(binding, cs, report.trace[-1])
    assert final.divergence is not None
    assert final.divergence.kind == report.kind


def test_mutant_task_forbids_unit_toggle():
    doc = load_document(fixture_path("fcu-mutant-no-unit-task.hmi")).document
    binding = cx.bind(doc.correspondences[0], doc.taskmodel("descent_prep"),
                      doc.statechart("fcu"))
    divergences = cx.find_divergences(binding, max_length=20)
    kinds = {d.kind for d in divergences}
    assert kinds == {"system_allowed_task_forbidden"}
    assert any(d.detail == "unitClick" for d in divergences)


def test_unbound_events_never_reported(fcu_binding):
    """The system fires editTimeout, escKey and the other digits, none of
    which are bound; direction 2 stays silent about them."""
    divergences = cx.find_divergences(fcu_binding, max_length=14)
    assert all(d.detail in fcu_binding.corr.input_bindings.values() or
               d.kind != "system_allowed_task_forbidden" for d in divergences)
    assert divergences == []


def test_run_tests_all_pass(fcu_binding):
    scenarios = tk.enumerate_scenarios(fcu_binding.tm, 16).scenarios
    report = cx.run_tests(fcu_binding, scenarios)
    assert report.passed
    assert len(report.results) == len(scenarios)
    assert report.divergences == []


def test_run_tests_out_of_order_fails(fcu_binding):
    report = cx.run_tests(fcu_binding, [("click_qnh",)])
    assert not report.passed
    assert "TaskNotEnabled" in report.results[0].note


def test_run_tests_empty(fcu_binding):
    rep = cx.run_tests(fcu_binding, [])
    assert rep.passed and rep.results == []


def test_internal_consistency(fcu_binding):
    """find_divergences is empty exactly when the full scenario replay passes
    and the direction-2 sweep is silent."""
    divergences = cx.find_divergences(fcu_binding, max_length=18)
    scenarios = tk.enumerate_scenarios(fcu_binding.tm, 18).scenarios
    report = cx.run_tests(fcu_binding, scenarios)
    assert (divergences == []) == report.passed

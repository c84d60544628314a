"""Expression typing and the agreement of both evaluators."""

import pytest
from hypothesis import given, strategies as st

from hmiv import expr as ex
from hmiv.expr import (BOOL, DECIMAL, Binary, Call, EnumType, ExprError, Lit,
                       StrType, Unary, Var)
from hmiv.fixedpoint import DivisionByZero

UNITS = EnumType(("inHg", "hPa"))
ENTRY = StrType(5, "0123456789.")
SCOPE = ex.Scope({"units": UNITS, "display": DECIMAL, "flag": BOOL, "entry": ENTRY})
VAR_INDEX = {"units": 0, "display": 1, "flag": 2, "entry": 3}
CAPS = {"entry": 5}


def both(e, units="hPa", display=101300, flag=False, entry=""):
    env = {"units": units, "display": display, "flag": flag, "entry": entry}
    tree = ex.eval_expr(e, env)
    compiled = ex.compile_expr(e, VAR_INDEX, CAPS)((units, display, flag, entry), None)
    assert tree == compiled, f"evaluators disagree on {ex.render(e)}"
    return tree


def dec(x):
    return Lit(x, DECIMAL)


def test_enum_equality():
    assert both(Binary("=", Var("units"), Var("hPa"))) is True
    assert both(Binary("=", Var("units"), Var("inHg"))) is False


def test_decimal_addition():
    # display + 1.00 with display = 1013.00
    assert both(Binary("+", Var("display"), dec(100))) == 101400


def test_division_by_zero():
    e = Binary("/", dec(100), dec(0))
    with pytest.raises(DivisionByZero):
        ex.eval_expr(e, {})
    with pytest.raises(DivisionByZero):
        ex.compile_expr(e, {})((), None)


def test_string_builtins():
    assert both(Call("len", (Var("entry"),)), entry="99.") == 300
    assert both(Call("append", (Var("entry"), Lit("5", StrType(1)))), entry="12") == "125"
    assert both(Call("append", (Var("entry"), Lit("5", StrType(1)))), entry="12345") == "12345"
    assert both(Call("droplast", (Var("entry"),)), entry="12") == "1"


def test_intrinsics():
    assert both(Call("push_key", (Var("entry"), Lit("9", StrType(1)))), entry="") == "9"
    assert both(Call("entry_value", (Var("entry"), Var("display"))), entry="990") == 99000
    assert both(Call("entry_value", (Var("entry"), Var("display"))), entry="") == 101300
    assert both(Call("to_hpa", (dec(2992),))) == 101321
    assert both(Call("clamp_pressure", (dec(120000), Lit(False, BOOL)))) == 110000


def test_typecheck_accepts_valid():
    assert ex.typecheck(Binary("and", Var("flag"), Binary("<", Var("display"), dec(0))), SCOPE) == BOOL
    assert isinstance(ex.typecheck(Call("push_key", (Var("entry"), Lit("1", StrType(1)))), SCOPE), StrType)


def test_typecheck_rejects():
    with pytest.raises(ExprError):
        ex.typecheck(Var("nonexistent"), SCOPE)
    with pytest.raises(ExprError):
        ex.typecheck(Binary("+", Var("flag"), dec(1)), SCOPE)
    with pytest.raises(ExprError):
        ex.typecheck(Binary("=", Var("units"), dec(1)), SCOPE)
    with pytest.raises(ExprError):
        ex.typecheck(Call("unknown_fn", ()), SCOPE)
    with pytest.raises(ExprError):
        ex.typecheck(Call("len", (Var("display"),)), SCOPE)


def test_free_vars():
    e = Binary("and", Binary("=", Var("units"), Var("hPa")),
               Binary("<", Call("len", (Var("entry"),)), dec(500)))
    assert ex.free_vars(e) == {"units", "hPa", "entry"}


# --- random expression agreement -------------------------------------------------

def decimal_exprs(depth: int):
    if depth == 0:
        return st.one_of(
            st.integers(-10**4, 10**4).map(dec),
            st.just(Var("display")),
        )
    sub = decimal_exprs(depth - 1)
    return st.one_of(
        sub,
        st.tuples(st.sampled_from(["+", "-", "*", "/"]), sub, sub)
          .map(lambda t: Binary(t[0], t[1], t[2])),
        sub.map(lambda e: Unary("neg", e)),
    )


def bool_exprs(depth: int):
    leaves = st.one_of(
        st.booleans().map(lambda b: Lit(b, BOOL)),
        st.just(Var("flag")),
        st.tuples(st.sampled_from(["=", "!=", "<", "<=", ">", ">="]),
                  decimal_exprs(1), decimal_exprs(1))
          .map(lambda t: Binary(t[0], t[1], t[2])),
    )
    if depth == 0:
        return leaves
    sub = bool_exprs(depth - 1)
    return st.one_of(
        leaves,
        st.tuples(st.sampled_from(["and", "or"]), sub, sub)
          .map(lambda t: Binary(t[0], t[1], t[2])),
        sub.map(lambda e: Unary("not", e)),
    )


@given(bool_exprs(3), st.integers(-10**5, 10**5), st.booleans())
def test_compiled_matches_tree_walk(e, display, flag):
    env = {"units": "hPa", "display": display, "flag": flag, "entry": ""}
    compiled = ex.compile_expr(e, VAR_INDEX, CAPS)
    try:
        expected = ex.eval_expr(e, env)
    except DivisionByZero:
        with pytest.raises(DivisionByZero):
            compiled(("hPa", display, flag, ""), None)
        return
    assert compiled(("hPa", display, flag, ""), None) == expected


def test_render_parses_back():
    from hmiv.dsl.parser import Parser
    e = Binary("or", Binary("=", Var("units"), Var("hPa")),
               Binary("<=", Binary("+", Var("display"), dec(150)), dec(200)))
    text = ex.render(e)
    parsed = Parser(text).expr()
    assert parsed == e

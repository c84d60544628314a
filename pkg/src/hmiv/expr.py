"""Expression language for guards, actions, observations and property filters.

An expression is a small AST over literals, variable references, decimal
arithmetic, comparisons, boolean connectives, enum equality, bounded-string
operations, and calls into a fixed registry of intrinsic functions (the
keypad/conversion library of the data-entry case study).

Two evaluators are provided: a plain tree walk (`eval_expr`) and a compiler
to Python closures (`compile_expr`) used by the checker's hot loops.  The
test suite holds them to identical results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import fcu
from . import fixedpoint as fp
from .fixedpoint import DivisionByZero

Span = tuple[int, int, int, int]  # start line, start col, end line, end col (1-based)


class ExprError(Exception):
    """Type or resolution error in an expression."""

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span


# --- types -------------------------------------------------------------------

@dataclass(frozen=True)
class BoolType:
    def __str__(self) -> str:
        return "boolean"


@dataclass(frozen=True)
class DecimalType:
    def __str__(self) -> str:
        return "decimal"


@dataclass(frozen=True)
class EnumType:
    literals: tuple[str, ...]

    def __str__(self) -> str:
        return f"enum({', '.join(self.literals)})"


@dataclass(frozen=True)
class StrType:
    max_len: int
    alphabet: Optional[str] = None  # None: unconstrained (string literals)

    def __str__(self) -> str:
        if self.alphabet is None:
            return f"string({self.max_len})"
        return f'string({self.max_len}, "{self.alphabet}")'


Type = BoolType | DecimalType | EnumType | StrType

BOOL = BoolType()
DECIMAL = DecimalType()


def same_type(a: Type, b: Type) -> bool:
    """Assignment/comparison compatibility."""
    if isinstance(a, StrType) and isinstance(b, StrType):
        return True
    if isinstance(a, EnumType) and isinstance(b, EnumType):
        return set(a.literals) == set(b.literals) or bool(set(a.literals) & set(b.literals))
    return type(a) is type(b)


# --- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Lit(Expr):
    value: object          # bool | int (hundredths) | str (string or enum literal)
    type: Type
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Var(Expr):
    name: str              # declared variable, or the pseudo-variable "mode"
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Unary(Expr):
    op: str                # "not" | "neg"
    operand: Expr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Binary(Expr):
    op: str                # + - * / and or = != < <= > >=
    left: Expr
    right: Expr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]
    span: Optional[Span] = field(default=None, compare=False)


MODE_VAR = "mode"


def free_vars(e: Expr) -> set[str]:
    """Names of variables (including "mode") the expression reads."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Unary):
        return free_vars(e.operand)
    if isinstance(e, Binary):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Call):
        out: set[str] = set()
        for a in e.args:
            out |= free_vars(a)
        return out
    return set()


# --- intrinsic registry ------------------------------------------------------

@dataclass(frozen=True)
class Intrinsic:
    name: str
    params: tuple[str, ...]   # tags: "decimal" | "bool" | "str"
    result: str
    fn: Callable


def _clamp_pressure(v: int, inhg: bool) -> int:
    return fcu.clamp_to_range(v, fcu.INHG if inhg else fcu.HPA)


INTRINSICS: dict[str, Intrinsic] = {
    i.name: i
    for i in (
        Intrinsic("push_key", ("str", "str"), "str", fcu.push_key),
        Intrinsic("pop_key", ("str",), "str", fcu.pop_key),
        Intrinsic("entry_value", ("str", "decimal"), "decimal", fcu.parse_buffer),
        Intrinsic("clamp_pressure", ("decimal", "bool"), "decimal", _clamp_pressure),
        Intrinsic("to_hpa", ("decimal",), "decimal", fcu.inhg_to_hpa),
        Intrinsic("to_inhg", ("decimal",), "decimal", fcu.hpa_to_inhg),
    )
}

_BUILTIN_STRING_FNS = ("len", "append", "droplast")


def _tag_of(t: Type) -> str:
    if isinstance(t, BoolType):
        return "bool"
    if isinstance(t, DecimalType):
        return "decimal"
    if isinstance(t, StrType):
        return "str"
    return "enum"


# --- type checking -----------------------------------------------------------

class Scope:
    """Name resolution context: variable types plus enum literal lookup."""

    def __init__(self, variables: dict[str, Type], mode_type: Optional[EnumType] = None):
        self.variables = dict(variables)
        self.mode_type = mode_type
        self.literals: dict[str, EnumType] = {}
        duplicates: set[str] = set()
        enum_types = [t for t in self.variables.values() if isinstance(t, EnumType)]
        if mode_type is not None:
            enum_types.append(mode_type)
        for et in enum_types:
            for lit in et.literals:
                if lit in self.literals and self.literals[lit] != et:
                    duplicates.add(lit)
                self.literals[lit] = et
        self.ambiguous_literals = duplicates

    def with_mode(self, mode_type: EnumType) -> "Scope":
        return Scope(self.variables, mode_type)


def typecheck(e: Expr, scope: Scope) -> Type:
    """Return the expression's type or raise ExprError."""
    if isinstance(e, Lit):
        return e.type
    if isinstance(e, Var):
        if e.name == MODE_VAR and scope.mode_type is not None:
            return scope.mode_type
        if e.name in scope.variables:
            return scope.variables[e.name]
        if e.name in scope.ambiguous_literals:
            raise ExprError(f"enum literal '{e.name}' is ambiguous", e.span)
        if e.name in scope.literals:
            return scope.literals[e.name]
        raise ExprError(f"unresolved identifier '{e.name}'", e.span)
    if isinstance(e, Unary):
        t = typecheck(e.operand, scope)
        if e.op == "not":
            if not isinstance(t, BoolType):
                raise ExprError(f"'not' needs a boolean, got {t}", e.span)
            return BOOL
        if not isinstance(t, DecimalType):
            raise ExprError(f"unary minus needs a decimal, got {t}", e.span)
        return DECIMAL
    if isinstance(e, Binary):
        lt = typecheck(e.left, scope)
        rt = typecheck(e.right, scope)
        if e.op in ("and", "or"):
            if not (isinstance(lt, BoolType) and isinstance(rt, BoolType)):
                raise ExprError(f"'{e.op}' needs booleans, got {lt} and {rt}", e.span)
            return BOOL
        if e.op in ("+", "-", "*", "/"):
            if not (isinstance(lt, DecimalType) and isinstance(rt, DecimalType)):
                raise ExprError(f"'{e.op}' needs decimals, got {lt} and {rt}", e.span)
            return DECIMAL
        if e.op in ("=", "!="):
            if not same_type(lt, rt):
                raise ExprError(f"cannot compare {lt} with {rt}", e.span)
            return BOOL
        if e.op in ("<", "<=", ">", ">="):
            if not (isinstance(lt, DecimalType) and isinstance(rt, DecimalType)):
                raise ExprError(f"'{e.op}' needs decimals, got {lt} and {rt}", e.span)
            return BOOL
        raise ExprError(f"unknown operator '{e.op}'", e.span)
    if isinstance(e, Call):
        if e.name == "len":
            _expect_args(e, 1)
            t = typecheck(e.args[0], scope)
            if not isinstance(t, StrType):
                raise ExprError(f"len needs a string, got {t}", e.span)
            return DECIMAL
        if e.name == "append":
            _expect_args(e, 2)
            t = typecheck(e.args[0], scope)
            x = typecheck(e.args[1], scope)
            if not (isinstance(t, StrType) and isinstance(x, StrType)):
                raise ExprError("append needs string arguments", e.span)
            return t
        if e.name == "droplast":
            _expect_args(e, 1)
            t = typecheck(e.args[0], scope)
            if not isinstance(t, StrType):
                raise ExprError(f"droplast needs a string, got {t}", e.span)
            return t
        intr = INTRINSICS.get(e.name)
        if intr is None:
            raise ExprError(f"unknown function '{e.name}'", e.span)
        _expect_args(e, len(intr.params))
        for arg, tag in zip(e.args, intr.params):
            at = typecheck(arg, scope)
            if _tag_of(at) != tag:
                raise ExprError(f"{e.name} expects {tag}, got {at}", arg.span if hasattr(arg, "span") else e.span)
        return {"decimal": DECIMAL, "bool": BOOL}.get(intr.result) or StrType(fcu.BUFFER_CAPACITY, fcu.BUFFER_ALPHABET)
    raise ExprError(f"unknown expression node {e!r}", None)


def _expect_args(e: Call, n: int) -> None:
    if len(e.args) != n:
        raise ExprError(f"{e.name} takes {n} argument(s), got {len(e.args)}", e.span)


# --- evaluation --------------------------------------------------------------

def eval_expr(e: Expr, env: dict[str, object]) -> object:
    """Tree-walking evaluation against a name -> value environment.

    The environment holds every variable plus "mode"; enum literals that are
    not shadowed by the environment evaluate to themselves.
    """
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        if e.name in env:
            return env[e.name]
        return e.name  # enum literal
    if isinstance(e, Unary):
        v = eval_expr(e.operand, env)
        return (not v) if e.op == "not" else -v
    if isinstance(e, Binary):
        if e.op == "and":
            return bool(eval_expr(e.left, env)) and bool(eval_expr(e.right, env))
        if e.op == "or":
            return bool(eval_expr(e.left, env)) or bool(eval_expr(e.right, env))
        a = eval_expr(e.left, env)
        b = eval_expr(e.right, env)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return fp.mul(a, b)
        if e.op == "/":
            return fp.div(a, b)
        if e.op == "=":
            return a == b
        if e.op == "!=":
            return a != b
        if e.op == "<":
            return a < b
        if e.op == "<=":
            return a <= b
        if e.op == ">":
            return a > b
        return a >= b
    if isinstance(e, Call):
        args = [eval_expr(a, env) for a in e.args]
        if e.name == "len":
            return len(args[0]) * 100
        if e.name == "append":
            s, x = args
            return (s + x)[: _cap_of(e.args[0])]
        if e.name == "droplast":
            return args[0][:-1]
        return INTRINSICS[e.name].fn(*args)
    raise ExprError(f"cannot evaluate {e!r}")


def _cap_of(arg: Expr) -> int:
    # append clips at the receiving string's declared capacity; literals have
    # no capacity of their own, so fall back to the case-study buffer size.
    t = getattr(arg, "type", None)
    if isinstance(t, StrType):
        return t.max_len
    return fcu.BUFFER_CAPACITY


# --- compilation -------------------------------------------------------------

def compile_expr(e: Expr, var_index: dict[str, int],
                 str_caps: Optional[dict[str, int]] = None) -> Callable:
    """Compile to fn(values_tuple, mode) -> value.

    `var_index` maps variable names to positions in the state's value tuple;
    `str_caps` gives declared capacities for bounded-string variables so that
    append can clip.  Enum literals compile to constants.
    """
    ns: dict[str, object] = {
        "_mul": fp.mul,
        "_div": fp.div,
    }
    for name, intr in INTRINSICS.items():
        ns["_i_" + name] = intr.fn
    caps = str_caps or {}

    def gen(x: Expr) -> str:
        if isinstance(x, Lit):
            return repr(x.value)
        if isinstance(x, Var):
            if x.name == MODE_VAR:
                return "m"
            if x.name in var_index:
                return f"v[{var_index[x.name]}]"
            return repr(x.name)  # enum literal
        if isinstance(x, Unary):
            return f"(not {gen(x.operand)})" if x.op == "not" else f"(-{gen(x.operand)})"
        if isinstance(x, Binary):
            if x.op == "*":
                return f"_mul({gen(x.left)}, {gen(x.right)})"
            if x.op == "/":
                return f"_div({gen(x.left)}, {gen(x.right)})"
            op = {"=": "==", "!=": "!="}.get(x.op, x.op)
            return f"({gen(x.left)} {op} {gen(x.right)})"
        if isinstance(x, Call):
            args = ", ".join(gen(a) for a in x.args)
            if x.name == "len":
                return f"(len({args}) * 100)"
            if x.name == "append":
                cap = fcu.BUFFER_CAPACITY
                first = x.args[0]
                t = getattr(first, "type", None)
                if isinstance(t, StrType):
                    cap = t.max_len
                elif isinstance(first, Var) and first.name in caps:
                    cap = caps[first.name]
                return f"(({gen(x.args[0])} + {gen(x.args[1])})[:{cap}])"
            if x.name == "droplast":
                return f"({gen(x.args[0])}[:-1])"
            return f"_i_{x.name}({args})"
        raise ExprError(f"cannot compile {x!r}")

    src = f"lambda v, m: {gen(e)}"
    return eval(src, ns)  # noqa: S307 - source is generated from a validated AST


# --- rendering (used by diagnostics, obligations and the serializer) ---------

_PRECEDENCE = {"or": 1, "and": 2, "=": 3, "!=": 3, "<": 3, "<=": 3, ">": 3, ">=": 3,
               "+": 4, "-": 4, "*": 5, "/": 5}


def render(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, Lit):
        if isinstance(e.type, BoolType):
            return "true" if e.value else "false"
        if isinstance(e.type, DecimalType):
            return fp.format_value(e.value)
        if isinstance(e.type, StrType):
            return '"' + str(e.value) + '"'
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        inner = render(e.operand, 6)
        return f"not {inner}" if e.op == "not" else f"-{inner}"
    if isinstance(e, Binary):
        prec = _PRECEDENCE[e.op]
        text = f"{render(e.left, prec)} {e.op} {render(e.right, prec + 1)}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(e, Call):
        return f"{e.name}({', '.join(render(a) for a in e.args)})"
    return repr(e)

"""Recursive-descent parser for .hmi documents.

Panic-mode recovery: a syntax error inside a section emits a diagnostic and
skips ahead to the next top-level section keyword, so one malformed section
does not hide diagnostics in the others.
"""

from __future__ import annotations

from typing import Optional

from .. import expr as ex
from ..checker import InvariantSpec, PropertySpec
from ..coexec import Correspondence
from ..expr import BOOL, DECIMAL, Binary, Call, EnumType, Expr, Lit, StrType, Unary, Var
from ..petri import NetTransition, PetriNet
from ..statechart import StatechartModel, TimerDecl, Transition, VariableDecl
from ..taskmodel import TaskModel, TaskNode
from .document import Diagnostic, Document, ParseResult
from .lexer import Token, tokenize

SECTION_KEYWORDS = ("statechart", "petrinet", "taskmodel", "correspondence", "property")

TASK_KINDS = {"interactive_input", "interactive_output", "cognitive_analysis",
              "cognitive_decision", "perception", "motor", "system"}
TASK_OPERATORS = {"enable": "enable", "choice": "choice",
                  "order_independent": "order_independent", "concurrent": "concurrent",
                  "optional": "optional_child", "iterate": "iterate_child"}


class _Abort(Exception):
    """Internal: unwind to section level after a syntax error."""


class Parser:
    def __init__(self, source: str):
        self.tokens, self.diagnostics = tokenize(source)
        self.pos = 0

    # --- token plumbing ---

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.text == text and t.kind in ("ident", "punct")

    def accept(self, text: str) -> Optional[Token]:
        if self.at(text):
            return self.next()
        return None

    def error(self, message: str, token: Optional[Token] = None) -> None:
        t = token or self.peek()
        self.diagnostics.append(Diagnostic("error", message, t.span, "E_SYNTAX"))

    def expect(self, text: str) -> Token:
        t = self.peek()
        if self.at(text):
            return self.next()
        self.error(f"expected '{text}', found {t.text!r}" if t.kind != "eof"
                   else f"expected '{text}', found end of input", t)
        raise _Abort()

    def expect_ident(self, what: str = "identifier") -> Token:
        t = self.peek()
        if t.kind == "ident":
            return self.next()
        self.error(f"expected {what}, found {t.text!r}", t)
        raise _Abort()

    def expect_number(self, what: str = "number") -> Token:
        t = self.peek()
        if t.kind == "number":
            return self.next()
        self.error(f"expected {what}, found {t.text!r}", t)
        raise _Abort()

    def expect_string(self, what: str = "string") -> Token:
        t = self.peek()
        if t.kind == "string":
            return self.next()
        self.error(f"expected {what}, found {t.text!r}", t)
        raise _Abort()

    def skip_to_section(self) -> None:
        depth = 0
        while True:
            t = self.peek()
            if t.kind == "eof":
                return
            if t.text == "{":
                depth += 1
            elif t.text == "}":
                depth = max(0, depth - 1)
            elif t.kind == "ident" and t.text in SECTION_KEYWORDS and depth == 0:
                return
            self.next()

    # --- document ---

    def parse_document(self) -> Document:
        doc = Document()
        while self.peek().kind != "eof":
            t = self.peek()
            try:
                if self.accept("statechart"):
                    doc.statecharts.append(self.statechart())
                elif self.accept("petrinet"):
                    doc.nets.append(self.petrinet())
                elif self.accept("taskmodel"):
                    doc.taskmodels.append(self.taskmodel())
                elif self.accept("correspondence"):
                    doc.correspondences.append(self.correspondence())
                elif self.accept("property"):
                    doc.properties.append(self.property_spec())
                else:
                    self.error(f"expected a section keyword, found {t.text!r}", t)
                    self.next()
                    self.skip_to_section()
            except _Abort:
                self.skip_to_section()
        return doc

    # --- statechart ---

    def statechart(self) -> StatechartModel:
        name_tok = self.expect_ident("statechart name")
        self.expect("{")
        modes: list[str] = []
        initial = ""
        initial_span = None
        variables: list[VariableDecl] = []
        transitions: list[Transition] = []
        timers: list[TimerDecl] = []
        responds: list[tuple[str, str]] = []
        declared_events: list[str] = []
        while not self.at("}") and self.peek().kind != "eof":
            if self.accept("modes"):
                modes.append(self.expect_ident("mode name").text)
                while self.accept(","):
                    modes.append(self.expect_ident("mode name").text)
            elif self.accept("events"):
                declared_events.append(self.expect_ident("event name").text)
                while self.accept(","):
                    declared_events.append(self.expect_ident("event name").text)
            elif self.accept("initial"):
                tok = self.expect_ident("initial mode")
                initial, initial_span = tok.text, tok.span
            elif self.accept("var"):
                variables.append(self.vardecl())
            elif self.accept("timer"):
                timers.append(self.timerdecl())
            elif self.accept("responds"):
                mode = self.expect_ident("mode name").text
                self.expect(":")
                responds.append((mode, self.expect_ident("event name").text))
                while self.accept(","):
                    responds.append((mode, self.expect_ident("event name").text))
            elif self.accept("transition"):
                transitions.append(self.transition())
            else:
                self.error(f"unexpected {self.peek().text!r} in statechart body")
                raise _Abort()
        self.expect("}")
        return StatechartModel(
            name=name_tok.text, modes=tuple(modes), initial_mode=initial,
            variables=tuple(variables), transitions=tuple(transitions),
            timers=tuple(timers), responds=tuple(responds),
            declared_events=tuple(declared_events), span=name_tok.span,
            initial_span=initial_span)

    def vardecl(self) -> VariableDecl:
        name_tok = self.expect_ident("variable name")
        self.expect(":")
        vtype = self.vartype()
        vrange = None
        if self.accept("in"):
            self.expect("[")
            lo = self.expect_number("range lower bound").value
            self.expect(",")
            hi = self.expect_number("range upper bound").value
            self.expect("]")
            vrange = (lo, hi)
        self.expect("=")
        initial = self.literal_value()
        return VariableDecl(name_tok.text, vtype, initial, vrange, span=name_tok.span)

    def vartype(self):
        t = self.expect_ident("type")
        if t.text == "boolean":
            return BOOL
        if t.text == "decimal":
            return DECIMAL
        if t.text == "enum":
            self.expect("(")
            lits = [self.expect_ident("enum literal").text]
            while self.accept(","):
                lits.append(self.expect_ident("enum literal").text)
            self.expect(")")
            return EnumType(tuple(lits))
        if t.text == "string":
            self.expect("(")
            max_len_tok = self.expect_number("maximum length")
            max_len = max_len_tok.value // 100
            if max_len_tok.fractional:
                self.error("string capacity must be a whole number", max_len_tok)
            self.expect(",")
            alphabet = self.expect_string("alphabet").value
            self.expect(")")
            return StrType(max_len, alphabet)
        self.error(f"unknown type '{t.text}'", t)
        raise _Abort()

    def literal_value(self):
        t = self.peek()
        if t.kind == "number":
            return self.next().value
        if t.kind == "string":
            return self.next().value
        if t.kind == "ident":
            self.next()
            if t.text == "true":
                return True
            if t.text == "false":
                return False
            return t.text           # enum literal
        self.error(f"expected a literal, found {t.text!r}", t)
        raise _Abort()

    def timerdecl(self) -> TimerDecl:
        name_tok = self.expect_ident("timer name")
        ms_tok = self.expect_number("duration")
        if ms_tok.fractional:
            self.error("timer duration must be whole milliseconds", ms_tok)
        self.expect("ms")
        self.expect("in")
        modes = [self.expect_ident("mode name").text]
        while self.accept(","):
            modes.append(self.expect_ident("mode name").text)
        self.expect("emits")
        event = self.expect_ident("expiry event").text
        return TimerDecl(name_tok.text, ms_tok.value // 100, event, tuple(modes), span=name_tok.span)

    def transition(self) -> Transition:
        id_tok = self.expect_ident("transition id")
        self.expect(":")
        source = self.expect_ident("source mode").text
        self.expect("->")
        target = self.expect_ident("target mode").text
        self.expect("on")
        event = self.expect_ident("event name").text
        guard: Expr = Lit(True, BOOL)
        if self.accept("when"):
            guard = self.expr()
        actions: list[tuple[str, Expr]] = []
        if self.accept("do"):
            actions.append(self.assignment())
            while self.accept(","):
                actions.append(self.assignment())
        return Transition(id_tok.text, source, target, event, guard,
                          tuple(actions), span=id_tok.span)

    def assignment(self) -> tuple[str, Expr]:
        name = self.expect_ident("variable name").text
        self.expect(":=")
        return (name, self.expr())

    # --- petri net ---

    def petrinet(self) -> PetriNet:
        name_tok = self.expect_ident("net name")
        self.expect("{")
        places: list[str] = []
        marking: dict[str, int] = {}
        transitions: list[NetTransition] = []
        while not self.at("}") and self.peek().kind != "eof":
            if self.accept("place"):
                p = self.expect_ident("place name")
                places.append(p.text)
                if self.accept("tokens"):
                    n = self.expect_number("token count")
                    if n.fractional:
                        self.error("token counts are whole numbers", n)
                    marking[p.text] = n.value // 100
            elif self.accept("transition"):
                transitions.append(self.net_transition())
            else:
                self.error(f"unexpected {self.peek().text!r} in petrinet body")
                raise _Abort()
        self.expect("}")
        return PetriNet(name_tok.text, tuple(places), tuple(transitions),
                        marking, span=name_tok.span)

    def net_transition(self) -> NetTransition:
        id_tok = self.expect_ident("transition name")
        event = None
        if self.accept("on"):
            event = self.expect_ident("event label").text
        self.expect("{")
        inputs: dict[str, int] = {}
        outputs: dict[str, int] = {}
        if self.accept("in"):
            self.arc_list(inputs)
        if self.accept(";"):
            pass
        if self.accept("out"):
            self.arc_list(outputs)
        self.expect("}")
        return NetTransition(id_tok.text, inputs, outputs, event, span=id_tok.span)

    def arc_list(self, into: dict[str, int]) -> None:
        while True:
            place = self.expect_ident("place name")
            weight = 1
            if self.accept("*"):
                w = self.expect_number("arc weight")
                if w.fractional:
                    self.error("arc weights are whole numbers", w)
                weight = w.value // 100
            into[place.text] = into.get(place.text, 0) + weight
            if not self.accept(","):
                return

    # --- task model ---

    def taskmodel(self) -> TaskModel:
        name_tok = self.expect_ident("task model name")
        self.expect("{")
        items: list[str] = []
        if self.accept("items"):
            items.append(self.expect_string("information item").value)
            while self.accept(","):
                items.append(self.expect_string("information item").value)
        self.expect("task")
        root = self.task_node()
        self.expect("}")
        return TaskModel(name_tok.text, root, tuple(items), span=name_tok.span)

    def task_node(self) -> TaskNode:
        id_tok = self.expect_ident("task id")
        label = id_tok.text
        if self.peek().kind == "string":
            label = self.next().value
        self.expect(":")
        head = self.expect_ident("task kind or operator")
        produces: list[str] = []
        consumes: list[str] = []
        while True:
            if self.accept("produces"):
                produces.append(self.expect_string("information item").value)
                while self.accept(","):
                    produces.append(self.expect_string("information item").value)
            elif self.accept("consumes"):
                consumes.append(self.expect_string("information item").value)
                while self.accept(","):
                    consumes.append(self.expect_string("information item").value)
            else:
                break
        children: list[TaskNode] = []
        if self.accept("{"):
            while not self.at("}") and self.peek().kind != "eof":
                self.expect("task")
                children.append(self.task_node())
            self.expect("}")
        if head.text in TASK_OPERATORS and children:
            kind, operator = "abstract", TASK_OPERATORS[head.text]
        elif head.text in TASK_OPERATORS:
            self.error(f"operator task '{id_tok.text}' needs children", id_tok)
            kind, operator = "abstract", TASK_OPERATORS[head.text]
        else:
            kind, operator = head.text, None
            if children:
                self.error(f"leaf kind '{head.text}' cannot have children", head)
        return TaskNode(id_tok.text, label, kind, operator, tuple(children),
                        tuple(produces), tuple(consumes), span=id_tok.span)

    # --- correspondence ---

    def correspondence(self) -> Correspondence:
        name_tok = self.expect_ident("correspondence name")
        self.expect("{")
        self.expect("taskmodel")
        tm = self.expect_ident("task model name").text
        self.expect("statechart")
        model = self.expect_ident("statechart name").text
        inputs: dict[str, str] = {}
        outputs: list[tuple[Expr, str]] = []
        while not self.at("}") and self.peek().kind != "eof":
            if self.accept("input"):
                task = self.expect_ident("task id").text
                self.expect("->")
                inputs[task] = self.expect_ident("event name").text
            elif self.accept("output"):
                obs = self.expr()
                self.expect("->")
                outputs.append((obs, self.expect_ident("task id").text))
            else:
                self.error(f"unexpected {self.peek().text!r} in correspondence body")
                raise _Abort()
        self.expect("}")
        return Correspondence(name_tok.text, tm, model, inputs, tuple(outputs),
                              span=name_tok.span)

    # --- properties ---

    def property_spec(self):
        name_tok = self.expect_ident("property name")
        self.expect("{")
        self.expect("statechart")
        model = self.expect_ident("statechart name").text
        if self.accept("require"):
            require = self.expr()
            self.expect("}")
            return InvariantSpec(name_tok.text, model, require, span=name_tok.span)
        self.expect("actions")
        actions = [self.action_ref()]
        while self.accept(","):
            actions.append(self.action_ref())
        guard: Expr = Lit(True, BOOL)
        if self.accept("guard"):
            guard = self.expr()
        self.expect("filter")
        self.expect("pre")
        pre = [self.expr()]
        while self.accept(","):
            pre.append(self.expr())
        self.expect("filter")
        self.expect("post")
        post = [self.expr()]
        while self.accept(","):
            post.append(self.expr())
        self.expect("relation")
        if self.accept("equal"):
            relation = "equal"
        elif self.accept("not_equal"):
            relation = "not_equal"
        else:
            relation = self.expr()
        self.expect("}")
        return PropertySpec(name_tok.text, model, tuple(actions), guard,
                            tuple(pre), tuple(post), relation, span=name_tok.span)

    def action_ref(self) -> tuple[str, Optional[str]]:
        event = self.expect_ident("event name").text
        mode = None
        if self.accept("@"):
            mode = self.expect_ident("mode name").text
        return (event, mode)

    # --- expressions ---

    def expr(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        left = self.and_expr()
        while self.at("or"):
            op = self.next()
            left = Binary("or", left, self.and_expr(), span=op.span)
        return left

    def and_expr(self) -> Expr:
        left = self.not_expr()
        while self.at("and"):
            op = self.next()
            left = Binary("and", left, self.not_expr(), span=op.span)
        return left

    def not_expr(self) -> Expr:
        if self.at("not"):
            op = self.next()
            return Unary("not", self.not_expr(), span=op.span)
        return self.comparison()

    def comparison(self) -> Expr:
        left = self.additive()
        t = self.peek()
        if t.kind == "punct" and t.text in ("=", "!=", "<", "<=", ">", ">="):
            self.next()
            return Binary(t.text, left, self.additive(), span=t.span)
        return left

    def additive(self) -> Expr:
        left = self.multiplicative()
        while True:
            t = self.peek()
            if t.kind == "punct" and t.text in ("+", "-"):
                self.next()
                left = Binary(t.text, left, self.multiplicative(), span=t.span)
            else:
                return left

    def multiplicative(self) -> Expr:
        left = self.unary()
        while True:
            t = self.peek()
            if t.kind == "punct" and t.text in ("*", "/"):
                self.next()
                left = Binary(t.text, left, self.unary(), span=t.span)
            else:
                return left

    def unary(self) -> Expr:
        if self.at("-"):
            op = self.next()
            return Unary("neg", self.unary(), span=op.span)
        return self.primary()

    def primary(self) -> Expr:
        t = self.peek()
        if t.kind == "number":
            self.next()
            return Lit(t.value, DECIMAL, span=t.span)
        if t.kind == "string":
            self.next()
            return Lit(t.value, StrType(len(t.value)), span=t.span)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident":
            self.next()
            if t.text == "true":
                return Lit(True, BOOL, span=t.span)
            if t.text == "false":
                return Lit(False, BOOL, span=t.span)
            if self.at("("):
                self.next()
                args: list[Expr] = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.accept(","):
                        args.append(self.expr())
                self.expect(")")
                return Call(t.text, tuple(args), span=t.span)
            return Var(t.text, span=t.span)
        self.error(f"expected an expression, found {t.text!r}", t)
        raise _Abort()


def parse_document(source: str) -> ParseResult:
    """Parse a .hmi document.  Never raises on any input; errors come back
    as diagnostics and the document is None when any error occurred."""
    parser = Parser(source)
    doc = parser.parse_document()
    errors = [d for d in parser.diagnostics if d.severity == "error"]
    return ParseResult(None if errors else doc, parser.diagnostics)

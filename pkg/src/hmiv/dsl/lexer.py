"""Tokenizer for .hmi documents.

Never raises on arbitrary input: malformed characters and literals produce
error diagnostics and the lexer carries on, so the parser always sees a
well-formed token stream ending in EOF.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..expr import Span
from .document import Diagnostic

# ASCII only: unicode digit characters would pass str.isdigit but break int()
_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<nl>\n)
      | (?P<comment>//[^\n]*)
      | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<number>[0-9]+(?:\.(?P<frac>[0-9]+))?)
      | (?P<string>"[^"\n]*"?)
      | (?P<punct>->|:=|<=|>=|!=|[{}()\[\],;:*@=<>+\-/])
      | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str        # ident | number | string | punct | eof
    text: str
    value: object    # numbers: hundredths int; strings: content
    span: Span
    fractional: bool = False   # numbers: True when written with a decimal point


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line = 1
    line_start = 0

    for m in _TOKEN_RE.finditer(source):
        g = m.group
        if g("nl") is not None:
            line += 1
            line_start = m.end()
            continue
        if g("ws") is not None or g("comment") is not None:
            continue
        col = m.start() - line_start + 1
        end_col = m.end() - line_start + 1
        span = (line, col, line, end_col)
        text = m.group(0)
        if g("ident") is not None:
            tokens.append(Token("ident", text, text, span))
        elif g("number") is not None:
            frac = g("frac") or ""
            if len(frac) > 2:
                diagnostics.append(Diagnostic(
                    "error", f"decimal literal '{text}' has more than two fractional digits",
                    span, "E_SYNTAX"))
                frac = frac[:2]
            value = int(text.split(".")[0]) * 100 + int(frac.ljust(2, "0") or 0)
            tokens.append(Token("number", text, value, span, "." in text))
        elif g("string") is not None:
            if text.endswith('"') and len(text) >= 2:
                content = text[1:-1]
            else:
                content = text[1:]
                diagnostics.append(Diagnostic("error", "unterminated string literal",
                                              span, "E_SYNTAX"))
            tokens.append(Token("string", '"' + content + '"', content, span))
        elif g("punct") is not None:
            tokens.append(Token("punct", text, text, span))
        else:
            diagnostics.append(Diagnostic(
                "error", f"unexpected character {text!r}", span, "E_SYNTAX"))

    end_col = len(source) - line_start + 1
    tokens.append(Token("eof", "", None, (line, end_col, line, end_col)))
    return tokens, diagnostics

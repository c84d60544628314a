"""Document container and diagnostics for the .hmi format."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..checker import InvariantSpec, PropertySpec
from ..coexec import Correspondence
from ..expr import Span
from ..petri import PetriNet
from ..statechart import StatechartModel
from ..taskmodel import TaskModel

AnyProperty = Union[PropertySpec, InvariantSpec]


@dataclass
class Diagnostic:
    severity: str          # error | warning
    message: str
    span: Span             # (line, col, end line, end col), 1-based
    code: str              # stable identifier, e.g. E_SYNTAX

    def render(self) -> str:
        line, col, _el, _ec = self.span
        return f"{line}:{col}: {self.severity}: {self.message} [{self.code}]"


@dataclass
class Document:
    statecharts: list[StatechartModel] = field(default_factory=list)
    nets: list[PetriNet] = field(default_factory=list)
    taskmodels: list[TaskModel] = field(default_factory=list)
    correspondences: list[Correspondence] = field(default_factory=list)
    properties: list[AnyProperty] = field(default_factory=list)

    def statechart(self, name: str) -> Optional[StatechartModel]:
        return next((m for m in self.statecharts if m.name == name), None)

    def net(self, name: str) -> Optional[PetriNet]:
        return next((n for n in self.nets if n.name == name), None)

    def taskmodel(self, name: str) -> Optional[TaskModel]:
        return next((t for t in self.taskmodels if t.name == name), None)

    def property_named(self, name: str) -> Optional[AnyProperty]:
        return next((p for p in self.properties if p.name == name), None)

    def is_empty(self) -> bool:
        return not (self.statecharts or self.nets or self.taskmodels
                    or self.correspondences or self.properties)


@dataclass
class ParseResult:
    document: Optional[Document]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.document is not None and not any(
            d.severity == "error" for d in self.diagnostics)

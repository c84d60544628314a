"""The .hmi document format: parsing, validation, serialization, export.

A document holds statecharts, Petri nets, task models, correspondences and
properties in one brace-delimited text file (grammar in docs/format.md).
"""

from .document import Diagnostic, Document, ParseResult
from .parser import parse_document
from .serializer import export_json, serialize_document
from .validate import validate_document

__all__ = ["Diagnostic", "Document", "ParseResult", "parse_document",
           "serialize_document", "export_json", "validate_document", "load_document"]


def load_document(path: str) -> ParseResult:
    """Parse and validate a document file; validation diagnostics are merged
    into the result (the document stays available when only warnings occur)."""
    with open(path, "r", encoding="utf-8", errors="replace") as f:
        source = f.read()
    result = parse_document(source)
    if result.document is not None:
        diags = validate_document(result.document)
        result.diagnostics.extend(diags)
        if any(d.severity == "error" for d in diags):
            return ParseResult(None, result.diagnostics)
    return result

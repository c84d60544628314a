"""Errors shared across the analysis engines."""


class ResourceLimit(Exception):
    """An analysis exceeded its configured exploration budget."""
